#include "doctest.h"

#include "newsmarket/io.hpp"
#include "newsmarket/parallel.hpp"
#include "newsmarket/params.hpp"
#include "newsmarket/random.hpp"
#include "newsmarket/roots.hpp"
#include "newsmarket/series.hpp"

#include <functional>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

using namespace newsmarket;

namespace {

std::string message_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const std::exception& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("calibrated defaults match the published table") {
    const ModelParams p = empirical_defaults();
    CHECK(p.w_s == 0.04);
    CHECK(p.w_h == 0.4);
    CHECK(p.beta1 == 1.1);
    CHECK(p.beta2 == 1.0);
    CHECK(p.a1 == 0.374);
    CHECK(p.a4 == 6.5);
    CHECK(p.s_star == 0.131);
    CHECK(p.h_bar == 0.017);
    CHECK(p.eta() == doctest::Approx(10.0));
    CHECK_NOTHROW(validate(p));
}

TEST_CASE("main theoretical case") {
    const ModelParams p = theory_main_case();
    CHECK(p.beta2 == 0.55);
    CHECK(p.gamma == 56.0);
    CHECK(p.delta == 0.03);
    CHECK(p.kappa == 1.0);
    CHECK(p.gamma_bar() == doctest::Approx(2.24));
}

TEST_CASE("validation names every offending field") {
    ModelParams p;
    p.w_s = 0.0;
    p.a2 = -1.0;
    try {
        validate(p);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        REQUIRE(e.problems().size() == 2);
        CHECK(e.problems()[0] == "w_s must be positive");
        CHECK(e.problems()[1] == "a2 must be positive");
    }
    ModelParams q;
    q.beta1 = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(validate(q), ValidationError);
    ModelParams r;
    r.s_star = 1.5;
    CHECK_THROWS_AS(validate(r), ValidationError);
}

TEST_CASE("parameter files round-trip and report bad lines") {
    std::istringstream good("# comment\nbeta1 = 1.2\n  gamma=56 # trailing\n");
    const ModelParams p = parse_params(good, "good.txt");
    CHECK(p.beta1 == 1.2);
    CHECK(p.gamma == 56.0);

    std::ostringstream dump;
    for (const auto& [k, v] : to_key_values(p)) dump << k << " = " << format_double(v) << '\n';
    std::istringstream again(dump.str());
    const ModelParams q = parse_params(again);
    for (std::size_t i = 0; i < to_key_values(p).size(); ++i) {
        CHECK(to_key_values(p)[i].second == to_key_values(q)[i].second);
    }

    std::istringstream unknown("beta1 = 1.1\nbogus = 3\n");
    CHECK(message_of([&] { parse_params(unknown, "f.txt"); }) == "f.txt:2: unknown parameter 'bogus'");
    std::istringstream dup("gamma = 1\ngamma = 2\n");
    CHECK(message_of([&] { parse_params(dup, "d.txt"); }).find("d.txt:2: duplicate") == 0);
    std::istringstream nan_line("gamma = nan\n");
    CHECK(message_of([&] { parse_params(nan_line, "n.txt"); }).find("n.txt:1:") == 0);
    std::istringstream junk("gamma 3\n");
    CHECK_THROWS_AS(parse_params(junk), std::invalid_argument);
    CHECK(message_of([] { load_params("/nonexistent/p.txt"); }).find("/nonexistent/p.txt") != std::string::npos);
}

TEST_CASE("series helpers") {
    const Series s = make_series({1, 2, 3, 4}, 10);
    CHECK(s.time(2) == 12.0);
    const Series t = slice(s, 1, 2);
    CHECK(t.start_index == 11);
    CHECK(t.values == std::vector<double>{2, 3});
    CHECK_THROWS_AS(slice(s, 3, 2), std::out_of_range);
    Series bad = s;
    bad.values[2] = std::numeric_limits<double>::infinity();
    CHECK(message_of([&] { check_series(bad, "H"); }) == "H has a non-finite sample at index 2");
}

TEST_CASE("CSV reading cites line numbers") {
    std::istringstream ok("# note\ndate_index,value\n5,0.1\n6,-0.2\n\n7,0.3\n");
    const Series s = read_series_csv(ok, "ok.csv");
    CHECK(s.start_index == 5);
    CHECK(s.values == std::vector<double>{0.1, -0.2, 0.3});

    std::istringstream nan_row("0,0.1\n1,nan\n");
    CHECK(message_of([&] { read_series_csv(nan_row, "h.csv"); }) == "h.csv:2: non-finite value");
    std::istringstream gap("0,0.1\n2,0.2\n");
    CHECK(message_of([&] { read_series_csv(gap, "g.csv"); }).find("g.csv:2:") == 0);
    std::istringstream junk("0,0.1\n1,abc\n");
    CHECK(message_of([&] { read_series_csv(junk, "j.csv"); }).find("j.csv:2: malformed") == 0);
    std::istringstream cols("0,0.1,3\n");
    CHECK(message_of([&] { read_series_csv(cols, "c.csv"); }).find("c.csv:1:") == 0);
}

TEST_CASE("table reading and writer round trip") {
    std::ostringstream out;
    CsvWriter w(out);
    w.comment("seed: 3");
    w.header({"day", "s"});
    w.row({0, 0.1});
    w.row({1, 1.0 / 3.0});
    std::istringstream in(out.str());
    const Table t = read_table_csv(in, "t.csv");
    REQUIRE(t.rows.size() == 2);
    CHECK(t.column("s")[1] == 1.0 / 3.0);
    CHECK_THROWS_AS(t.column("p"), std::invalid_argument);
}

TEST_CASE("shortest round-trip formatting") {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) {
        double back = 0.0;
        REQUIRE(parse_double(format_double(v), back));
        CHECK(back == v);
    }
    double x = 0.0;
    CHECK_FALSE(parse_double("1.5x", x));
    CHECK_FALSE(parse_double("", x));
}

TEST_CASE("random source is reproducible and stream-separated") {
    RandomSource a(42, 7), b(42, 7), c(42, 8);
    bool differs = false;
    for (int i = 0; i < 1000; ++i) {
        const double x = a.normal();
        CHECK(x == b.normal());
        differs = differs || x != c.normal();
    }
    CHECK(differs);
    const RandomSource d = a.substream(9);
    CHECK(d.seed() == 42);
    CHECK(d.stream_id() == 9);
}

TEST_CASE("random variates have the right moments") {
    RandomSource r(1);
    const int n = 200000;
    double su = 0, sn = 0, sn2 = 0, se = 0;
    for (int i = 0; i < n; ++i) {
        const double u = r.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        su += u;
        const double z = r.normal();
        sn += z;
        sn2 += z * z;
        se += r.exponential(2.0);
    }
    CHECK(su / n == doctest::Approx(0.5).epsilon(0.01));
    CHECK(std::abs(sn / n) < 0.01);
    CHECK(sn2 / n == doctest::Approx(1.0).epsilon(0.01));
    CHECK(se / n == doctest::Approx(0.5).epsilon(0.01));
    CHECK_THROWS_AS(r.exponential(0.0), std::invalid_argument);
}

TEST_CASE("root finding") {
    const double r = bisect_root([](double x) { return x * x - 2.0; }, 0.0, 2.0);
    CHECK(r == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK_THROWS_AS(bisect_root([](double x) { return x * x + 1.0; }, -1.0, 1.0), std::invalid_argument);
    const auto roots = scan_roots([](double x) { return std::sin(x); }, -4.0, 4.0, 1000);
    REQUIRE(roots.size() == 3);
    CHECK(roots[0] == doctest::Approx(-M_PI));
    CHECK(roots[1] == 0.0);
    CHECK(roots[2] == doctest::Approx(M_PI));
}

TEST_CASE("parallel_for covers every index and propagates failures") {
    std::vector<int> hits(1000, 0);
    parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) CHECK(h == 1);
    CHECK_THROWS_AS(parallel_for(10, 3,
                                 [](std::size_t i) {
                                     if (i == 5) throw std::runtime_error("boom");
                                 }),
                    std::runtime_error);
    CHECK(worker_count(3) == 3);
    CHECK(worker_count() >= 1);
}
