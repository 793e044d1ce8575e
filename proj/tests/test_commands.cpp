#include "doctest.h"

#include "newsmarket/commands.hpp"
#include "newsmarket/io.hpp"
#include "newsmarket/market.hpp"
#include "newsmarket/phase.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

using namespace newsmarket;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Fresh scratch directory per test case.
struct Scratch {
    fs::path dir;
    explicit Scratch(const std::string& name) {
        dir = fs::temp_directory_path() / ("newsmarket_cmd_" + name);
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    ~Scratch() {
        std::error_code ec;
        fs::remove_all(dir, ec);
    }
    std::string path(const std::string& file) const { return (dir / file).string(); }
    std::string write(const std::string& file, const std::string& text) const {
        std::ofstream(path(file)) << text;
        return path(file);
    }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream o;
    o << in.rdbuf();
    return o.str();
}

std::vector<std::string> data_lines(const std::string& path) {
    std::vector<std::string> out;
    std::istringstream in(slurp(path));
    for (std::string line; std::getline(in, line);) {
        if (!line.empty() && line[0] != '#') out.push_back(line);
    }
    return out;
}

std::string news_csv(std::size_t n) {
    std::ostringstream o;
    o << "date_index,H\n";
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i);
        o << i << ',' << format_double(0.3 * std::sin(2 * kPi * t / 120.0) + 0.1 * std::cos(2 * kPi * t / 37.0))
          << '\n';
    }
    return o.str();
}

std::string write_params(const Scratch& s, const std::string& file, const ModelParams& p) {
    std::ostringstream o;
    for (const auto& [k, v] : to_key_values(p)) o << k << " = " << format_double(v) << '\n';
    return s.write(file, o.str());
}

std::string message_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const std::exception& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("simulate-empirical writes a deterministic four-column table") {
    Scratch s("empirical");
    EmpiricalCommand cmd;
    cmd.h_csv = s.write("news.csv", news_csv(300));
    cmd.out_csv = s.path("a.csv");
    std::ostringstream log;
    cmd_simulate_empirical(cmd, log);
    cmd.out_csv = s.path("b.csv");
    cmd_simulate_empirical(cmd, log);
    CHECK(slurp(s.path("a.csv")) == slurp(s.path("b.csv")));

    const Table t = read_table_csv(s.path("a.csv"));
    CHECK(t.columns == std::vector<std::string>{"day", "H", "s", "p"});
    CHECK(t.rows.size() == 300);
    const std::string text = slurp(s.path("a.csv"));
    CHECK(text.find("# params: ") != std::string::npos);
    CHECK(text.find("# seed: none") != std::string::npos);
}

TEST_CASE("simulate-empirical input errors") {
    Scratch s("empirical_errors");
    EmpiricalCommand cmd;
    cmd.h_csv = s.write("news.csv", news_csv(50));
    cmd.params_file = s.path("missing.params");
    std::ostringstream log;
    CHECK(message_of([&] { cmd_simulate_empirical(cmd, log); }).find("missing.params") != std::string::npos);

    cmd.params_file.clear();
    cmd.h_csv = s.write("bad.csv", "date_index,H\n0,0.1\n1,nan\n2,0.2\n");
    const std::string msg = message_of([&] { cmd_simulate_empirical(cmd, log); });
    CHECK(msg.find("bad.csv:3") != std::string::npos);
}

TEST_CASE("simulate-theory reruns are byte-identical") {
    Scratch s("theory");
    TheoryCommand cmd;
    cmd.horizon = 400;
    cmd.realizations = 3;
    cmd.seed = 42;
    cmd.out_dir = s.path("one");
    std::ostringstream log;
    cmd_simulate_theory(cmd, log);
    cmd.out_dir = s.path("two");
    cmd.workers = 3;
    cmd_simulate_theory(cmd, log);
    for (const char* f : {"run_0.csv", "run_2.csv", "mean.csv", "manifest.txt"}) {
        CHECK(slurp(s.path(std::string("one/") + f)) == slurp(s.path(std::string("two/") + f)));
    }
    CHECK(data_lines(s.path("one/run_1.csv")).size() == 402);
    const std::string manifest = slurp(s.path("one/manifest.txt"));
    CHECK(manifest.find("seed = 42") != std::string::npos);
    CHECK(manifest.find("param.gamma = 56") != std::string::npos);
    CHECK(slurp(s.path("one/run_0.csv")).find("# seed: 42") != std::string::npos);
}

TEST_CASE("noise-free single run matches the autonomous integrator") {
    Scratch s("theory_autonomous");
    ModelParams p = theory_main_case();
    p.kappa = 0.0;
    TheoryCommand cmd;
    cmd.params_file = write_params(s, "p.params", p);
    cmd.horizon = 300;
    cmd.s0 = 0.2;
    cmd.h0 = 0.1;
    cmd.out_dir = s.path("out");
    std::ostringstream log;
    cmd_simulate_theory(cmd, log);
    const Table t = read_table_csv(s.path("out/run_0.csv"));
    const auto ref = integrate_autonomous(p, {0.2, 0.1, 0.0}, 300);
    REQUIRE(t.rows.size() == ref.size());
    const auto sc = t.column("s");
    const auto hc = t.column("h");
    for (std::size_t i = 0; i < ref.size(); ++i) {
        CHECK(sc[i] == doctest::Approx(ref[i].s).epsilon(1e-14));
        CHECK(hc[i] == doctest::Approx(ref[i].h).epsilon(1e-14));
    }
}

TEST_CASE("simulate-theory rejects a short temperature profile") {
    Scratch s("theory_theta");
    std::ostringstream csv;
    csv << "date_index,theta\n";
    for (int i = 0; i < 100; ++i) csv << i << ",0.9\n";
    TheoryCommand cmd;
    cmd.theta_csv = s.write("theta.csv", csv.str());
    cmd.horizon = 200;
    cmd.out_dir = s.path("out");
    std::ostringstream log;
    const std::string msg = message_of([&] { cmd_simulate_theory(cmd, log); });
    CHECK(msg.find("100 days") != std::string::npos);
    CHECK(msg.find("200") != std::string::npos);
}

TEST_CASE("analyze equilibria on the main case") {
    Scratch s("analyze_eq");
    AnalyzeCommand cmd;
    cmd.task = "equilibria";
    cmd.out = s.path("eq.csv");
    std::ostringstream log;
    cmd_analyze(cmd, log);
    const auto rows = data_lines(cmd.out);
    REQUIRE(rows.size() == 4);
    CHECK(rows[1].find("UnstableFocus") != std::string::npos);
    CHECK(rows[2].find("Saddle") != std::string::npos);
    CHECK(rows[3].find("StableFocus") != std::string::npos);
    CHECK(slurp(cmd.out).find("# params: ") != std::string::npos);
}

TEST_CASE("analyze limit-cycle on the cycle-forming gain") {
    Scratch s("analyze_cycle");
    ModelParams p = theory_main_case();
    p.delta = 0.0;
    p.kappa = 0.0;
    p.gamma = 2.48 / p.w_s;
    AnalyzeCommand cmd;
    cmd.task = "limit-cycle";
    cmd.params_file = write_params(s, "cycle.params", p);
    cmd.out = s.path("cycle.csv");
    std::ostringstream log;
    cmd_analyze(cmd, log);
    const auto lines = data_lines(cmd.out);
    REQUIRE(lines.size() == 3);
    CHECK(lines[0].rfind("cycle,exists,stable,period_days", 0) == 0);
    REQUIRE(lines[1].rfind("stable,true,true,", 0) == 0);
    const std::string period = lines[1].substr(17, lines[1].find(',', 17) - 17);
    CHECK(std::stod(period) > 200.0);
}

TEST_CASE("analyze potential lists two minima in the ordered phase") {
    Scratch s("analyze_potential");
    AnalyzeCommand cmd;
    cmd.task = "potential";
    cmd.c = 0.01;
    cmd.out = s.path("u.csv");
    std::ostringstream log;
    cmd_analyze(cmd, log);
    const std::string text = slurp(cmd.out);
    std::size_t minima = 0;
    for (std::size_t pos = text.find(" min\n"); pos != std::string::npos; pos = text.find(" min\n", pos + 1)) ++minima;
    CHECK(minima == 2);
    CHECK(data_lines(cmd.out).size() == 202);
}

TEST_CASE("analyze rejects unknown tasks") {
    AnalyzeCommand cmd;
    cmd.task = "portrait";
    std::ostringstream log;
    CHECK(message_of([&] { cmd_analyze(cmd, log); }).find("unknown analyze task 'portrait'") != std::string::npos);
}

TEST_CASE("glauber meanfield-compare writes the comparison table") {
    Scratch s("glauber");
    GlauberCommand cmd;
    cmd.task = "meanfield-compare";
    cmd.config_file = s.write("spin.cfg",
                              "N_s = 400\nN_h = 200\nJ11 = 1.1\nJ12 = 0.5\nJ21 = 1.0\ntheta = 1\n"
                              "w_s = 1\nw_h = 1\nb_h_amplitude = 0.3\nb_h_period = 10\ns0 = 0.3\n");
    cmd.horizon = 10.0;
    cmd.realizations = 4;
    cmd.seed = 9;
    cmd.out = s.path("mf.csv");
    std::ostringstream log;
    cmd_glauber(cmd, log);
    const Table t = read_table_csv(cmd.out);
    CHECK(t.columns.size() == 7);
    CHECK(t.rows.size() == 11);
    const std::string text = slurp(cmd.out);
    CHECK(text.find("# seed: 9") != std::string::npos);
    CHECK(text.find("max_deviation") != std::string::npos);

    cmd.config_file = s.write("bad.cfg", "N_s = 10\nJ13 = 1\n");
    CHECK(message_of([&] { cmd_glauber(cmd, log); }).find("bad.cfg:2: unknown glauber key 'J13'") !=
          std::string::npos);
}

TEST_CASE("stats returns, histogram and acf") {
    Scratch s("stats");
    std::ostringstream csv;
    csv << "date_index,logp\n";
    for (int i = 0; i < 2000; ++i) csv << i << ',' << format_double(0.0003 * i + 0.05 * std::sin(i / 40.0)) << '\n';
    const std::string in = s.write("p.csv", csv.str());
    std::ostringstream log;

    StatsCommand r;
    r.task = "returns";
    r.input_csv = in;
    r.returns = 21;
    r.out = s.path("r.csv");
    cmd_stats(r, log);
    CHECK(read_table_csv(r.out).rows.size() == (2000 - 21 + 20) / 21);

    StatsCommand h = r;
    h.task = "histogram";
    h.normalize = true;
    h.bins = 10;
    h.out = s.path("h.csv");
    cmd_stats(h, log);
    const Table ht = read_table_csv(h.out);
    CHECK(ht.rows.size() == 10);
    double total = 0.0;
    for (double c : ht.column("count")) total += c;
    CHECK(total == doctest::Approx(static_cast<double>((2000 - 21 + 20) / 21)));

    StatsCommand a;
    a.task = "acf";
    a.input_csv = in;
    a.max_lag = 5;
    a.out = s.path("a.csv");
    cmd_stats(a, log);
    const Table at = read_table_csv(a.out);
    CHECK(at.columns == std::vector<std::string>{"lag", "acf", "band_lo", "band_hi"});
    CHECK(at.rows.size() == 6);
    CHECK(at.rows[0][1] == 1.0);
    CHECK(at.rows[1][3] == doctest::Approx(1.96 / std::sqrt(2000.0)));

    StatsCommand bad = a;
    bad.task = "spectrum";
    CHECK(message_of([&] { cmd_stats(bad, log); }).find("unknown stats task") != std::string::npos);
    StatsCommand lonely = a;
    lonely.task = "xcorr";
    CHECK(message_of([&] { cmd_stats(lonely, log); }).find("second series") != std::string::npos);
}
