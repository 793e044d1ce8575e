#include "newsmarket/commands.hpp"

#include "newsmarket/analytics.hpp"
#include "newsmarket/glauber.hpp"
#include "newsmarket/io.hpp"
#include "newsmarket/market.hpp"
#include "newsmarket/params.hpp"
#include "newsmarket/phase.hpp"
#include "newsmarket/price.hpp"
#include "newsmarket/sentiment.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

#ifndef NEWSMARKET_VERSION
#define NEWSMARKET_VERSION "dev"
#endif

namespace newsmarket {

namespace {

using Cells = std::vector<std::string>;

std::string fmt(double v) { return format_double(v); }

void text_row(std::ostream& out, const Cells& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out << ',';
        out << cells[i];
    }
    out << '\n';
}

// Output target: a file when a path is given, otherwise stdout.
class Sink {
public:
    explicit Sink(const std::string& path) : path_(path) {
        if (path.empty()) {
            out_ = &std::cout;
            return;
        }
        file_.open(path, std::ios::binary | std::ios::trunc);
        if (!file_) throw std::runtime_error("cannot write output file '" + path + "'");
        out_ = &file_;
    }
    std::ostream& stream() { return *out_; }
    void finish() {
        out_->flush();
        if (!*out_) throw std::runtime_error("write failed for '" + (path_.empty() ? "<stdout>" : path_) + "'");
    }

private:
    std::string path_;
    std::ofstream file_;
    std::ostream* out_ = nullptr;
};

void header_lines(std::ostream& out, const std::string& command, const std::vector<std::string>& extra) {
    out << "# newsmarket " << NEWSMARKET_VERSION << '\n';
    out << "# command: " << command << '\n';
    for (const auto& e : extra) out << "# " << e << '\n';
}

std::string params_line(const ModelParams& p) { return "params: " + describe(p); }

ModelParams params_or(const std::string& path, ModelParams (*fallback)()) {
    return path.empty() ? validate(fallback()) : load_params(path);
}

std::string source_line(const std::string& label, const std::string& path) {
    return label + ": " + (path.empty() ? std::string("built-in defaults") : path);
}

DriftMode parse_mode(const std::string& mode) {
    if (mode == "simplified") return DriftMode::Simplified;
    if (mode == "full") return DriftMode::Full;
    throw std::invalid_argument("unknown drift mode '" + mode + "' (expected simplified or full)");
}

// ---------------------------------------------------------------- glauber config

struct GlauberSetup {
    SpinSystemConfig config;
    double s0 = 0.0;
    double h0 = 0.0;
};

GlauberSetup load_glauber_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open glauber config '" + path + "'");
    GlauberSetup g;
    auto& c = g.config;
    const std::map<std::string, std::function<void(double)>> setters = {
        {"N_s", [&](double v) { c.N_s = std::lround(v); }},
        {"N_h", [&](double v) { c.N_h = std::lround(v); }},
        {"J11", [&](double v) { c.J11 = v; }},
        {"J12", [&](double v) { c.J12 = v; }},
        {"J21", [&](double v) { c.J21 = v; }},
        {"J22", [&](double v) { c.J22 = v; }},
        {"mu_s", [&](double v) { c.mu_s = v; }},
        {"mu_h", [&](double v) { c.mu_h = v; }},
        {"theta", [&](double v) { c.theta = v; }},
        {"w_s", [&](double v) { c.w_s = v; }},
        {"w_h", [&](double v) { c.w_h = v; }},
        {"b_s", [&](double v) { c.b_s.constant = v; }},
        {"b_s_amplitude", [&](double v) { c.b_s.amplitude = v; }},
        {"b_s_period", [&](double v) { c.b_s.period = v; }},
        {"b_h", [&](double v) { c.b_h.constant = v; }},
        {"b_h_amplitude", [&](double v) { c.b_h.amplitude = v; }},
        {"b_h_period", [&](double v) { c.b_h.period = v; }},
        {"s0", [&](double v) { g.s0 = v; }},
        {"h0", [&](double v) { g.h0 = v; }},
    };
    for (const auto& e : parse_key_values(in, path)) {
        auto it = setters.find(e.key);
        if (it == setters.end()) {
            throw std::invalid_argument(path + ":" + std::to_string(e.line) + ": unknown glauber key '" + e.key + "'");
        }
        it->second(e.value);
    }
    validate(c);
    return g;
}

std::string describe(const SpinSystemConfig& c) {
    std::ostringstream o;
    o << "N_s=" << c.N_s << " N_h=" << c.N_h << " J11=" << fmt(c.J11) << " J12=" << fmt(c.J12)
      << " J21=" << fmt(c.J21) << " J22=" << fmt(c.J22) << " mu_s=" << fmt(c.mu_s) << " mu_h=" << fmt(c.mu_h)
      << " theta=" << fmt(c.theta) << " w_s=" << fmt(c.w_s) << " w_h=" << fmt(c.w_h) << " b_s=" << fmt(c.b_s.constant)
      << "+" << fmt(c.b_s.amplitude) << "sin(2pi t/" << fmt(c.b_s.period) << ") b_h=" << fmt(c.b_h.constant) << "+"
      << fmt(c.b_h.amplitude) << "sin(2pi t/" << fmt(c.b_h.period) << ")";
    return o.str();
}

// ---------------------------------------------------------------- stats input

Series load_input(const std::string& path, const std::string& column) {
    if (path.empty()) throw std::invalid_argument("missing input CSV");
    if (column.empty()) return read_series_csv(path);
    const Table t = read_table_csv(path);
    if (t.rows.empty()) throw std::invalid_argument(path + ": no data rows");
    Series s;
    s.start_index = std::lround(t.rows.front().front());
    s.values = t.column(column);
    check_series(s, path.c_str());
    return s;
}

}  // namespace

// ================================================================ simulate-empirical

void cmd_simulate_empirical(const EmpiricalCommand& cmd, std::ostream& log) {
    const ModelParams p = params_or(cmd.params_file, empirical_defaults);
    if (cmd.h_csv.empty()) throw std::invalid_argument("missing news-flow CSV");
    const Series H = read_series_csv(cmd.h_csv);
    const Series s = integrate_sentiment(H, cmd.s0, p, cmd.substeps);
    const Series price = price_from_sentiment(s, p);

    Sink sink(cmd.out_csv);
    auto& out = sink.stream();
    header_lines(out, "simulate-empirical",
                 {source_line("params source", cmd.params_file), params_line(p), "input: " + cmd.h_csv,
                  "s0: " + fmt(cmd.s0), "substeps: " + std::to_string(cmd.substeps), "seed: none (deterministic)"});
    text_row(out, {"day", "H", "s", "p"});
    for (std::size_t i = 0; i < H.size(); ++i) {
        text_row(out, {std::to_string(H.start_index + static_cast<long>(i)), fmt(H[i]), fmt(s[i]), fmt(price[i])});
    }
    sink.finish();
    if (!cmd.out_csv.empty()) log << "wrote " << H.size() << " rows to " << cmd.out_csv << '\n';
}

// ================================================================ simulate-theory

void cmd_simulate_theory(const TheoryCommand& cmd, std::ostream& log) {
    const ModelParams p = params_or(cmd.params_file, theory_main_case);
    if (cmd.horizon < 1) throw std::invalid_argument("horizon must be >= 1");
    if (cmd.realizations < 1) throw std::invalid_argument("realizations must be >= 1");
    if (cmd.out_dir.empty()) throw std::invalid_argument("simulate-theory needs an output directory");

    SimulationOptions opt;
    opt.substeps = cmd.substeps;
    opt.mode = parse_mode(cmd.mode);
    opt.beta1_shift = cmd.beta1_shift;
    if (!cmd.theta_csv.empty()) {
        Series theta = read_series_csv(cmd.theta_csv);
        if (theta.size() < static_cast<std::size_t>(cmd.horizon)) {
            throw std::invalid_argument("theta profile '" + cmd.theta_csv + "' has " + std::to_string(theta.size()) +
                                        " days, shorter than the horizon of " + std::to_string(cmd.horizon));
        }
        opt.theta_profile = std::move(theta);
    }
    const MarketState init{cmd.s0, cmd.h0, p.a1 * cmd.s0 + p.a4};
    const EnsembleResult ens =
        ensemble(p, init, cmd.horizon, cmd.realizations, cmd.seed, opt, static_cast<unsigned>(std::max(0, cmd.workers)),
                 cmd.write_runs);

    namespace fs = std::filesystem;
    fs::create_directories(cmd.out_dir);
    const std::vector<std::string> common = {
        source_line("params source", cmd.params_file),
        params_line(p),
        "seed: " + std::to_string(cmd.seed),
        "realizations: " + std::to_string(cmd.realizations),
        "horizon: " + std::to_string(cmd.horizon),
        "mode: " + cmd.mode,
        "theta profile: " + (cmd.theta_csv.empty() ? std::string("none") : cmd.theta_csv),
        "beta1 shift: " + fmt(cmd.beta1_shift),
        "initial state: s=" + fmt(init.s) + " h=" + fmt(init.h) + " p=" + fmt(init.p),
    };

    if (cmd.write_runs) {
        for (std::size_t r = 0; r < ens.runs.size(); ++r) {
            const auto& run = ens.runs[r];
            Sink sink((fs::path(cmd.out_dir) / ("run_" + std::to_string(r) + ".csv")).string());
            auto& out = sink.stream();
            auto lines = common;
            lines.push_back("stream: " + std::to_string(run.stream_id));
            lines.push_back("xi: shock applied over the previous day, 0 on day 0");
            header_lines(out, "simulate-theory", lines);
            text_row(out, {"day", "xi", "s", "h", "p"});
            for (std::size_t d = 0; d < run.states.size(); ++d) {
                const double xi = d == 0 ? 0.0 : run.xi[d - 1];
                const auto& st = run.states[d];
                text_row(out, {std::to_string(d), fmt(xi), fmt(st.s), fmt(st.h), fmt(st.p)});
            }
            sink.finish();
        }
    }
    {
        Sink sink((fs::path(cmd.out_dir) / "mean.csv").string());
        auto& out = sink.stream();
        header_lines(out, "simulate-theory ensemble mean", common);
        text_row(out, {"day", "s", "h", "p"});
        for (std::size_t d = 0; d < ens.mean_s.size(); ++d) {
            text_row(out, {std::to_string(d), fmt(ens.mean_s[d]), fmt(ens.mean_h[d]), fmt(ens.mean_p[d])});
        }
        sink.finish();
    }
    {
        Sink sink((fs::path(cmd.out_dir) / "manifest.txt").string());
        auto& out = sink.stream();
        out << "version = " << NEWSMARKET_VERSION << '\n';
        out << "seed = " << cmd.seed << '\n';
        out << "realizations = " << cmd.realizations << '\n';
        out << "horizon = " << cmd.horizon << '\n';
        out << "mode = " << cmd.mode << '\n';
        out << "substeps = " << cmd.substeps << '\n';
        out << "theta_csv = " << (cmd.theta_csv.empty() ? "none" : cmd.theta_csv) << '\n';
        out << "beta1_shift = " << fmt(cmd.beta1_shift) << '\n';
        out << "params_source = " << (cmd.params_file.empty() ? "built-in" : cmd.params_file) << '\n';
        for (const auto& [k, v] : to_key_values(p)) out << "param." << k << " = " << fmt(v) << '\n';
        sink.finish();
    }
    log << "wrote " << (cmd.write_runs ? ens.runs.size() : 0) << " runs and the ensemble mean to " << cmd.out_dir
        << '\n';
}

// ================================================================ analyze

namespace {

Cells eigen_cells(const EquilibriumPoint& e, double w_s) {
    return {fmt(e.lambda_plus.real()), fmt(e.lambda_plus.imag()), fmt(e.lambda_minus.real()),
            fmt(e.lambda_minus.imag()), fmt(e.period_days(w_s))};
}

void analyze_equilibria(const ModelParams& p, std::ostream& out, std::ostream& log) {
    const auto eq = find_equilibria(p);
    text_row(out, {"branch", "s", "h", "class", "re_lambda_plus", "im_lambda_plus", "re_lambda_minus",
                   "im_lambda_minus", "period_days"});
    for (const auto& e : eq) {
        Cells row = {to_string(e.branch), fmt(e.s), fmt(e.h), to_string(e.cls)};
        for (auto& c : eigen_cells(e, p.w_s)) row.push_back(c);
        text_row(out, row);
        log << to_string(e.branch) << ": s=" << fmt(e.s) << " " << to_string(e.cls) << '\n';
    }
}

void analyze_thresholds(const ModelParams& p, std::ostream& out) {
    text_row(out, {"branch", "s", "gamma_node_focus", "gamma_focus_unstable", "gamma_unstable_node",
                   "gamma_bar_node_focus", "gamma_bar_focus_unstable", "gamma_bar_unstable_node"});
    for (const auto& e : find_equilibria(p)) {
        if (p.beta1 * (1.0 - e.s * e.s) >= 1.0) continue;
        const auto g = gamma_thresholds(e.s, p);
        text_row(out, {to_string(e.branch), fmt(e.s), fmt(g.node_focus), fmt(g.focus_unstable), fmt(g.unstable_node),
                       fmt(p.w_s * g.node_focus), fmt(p.w_s * g.focus_unstable), fmt(p.w_s * g.unstable_node)});
    }
}

SweepParameter parse_sweep(const std::string& name) {
    if (name == "gamma") return SweepParameter::Gamma;
    if (name == "beta2") return SweepParameter::Beta2;
    if (name == "delta") return SweepParameter::Delta;
    throw std::invalid_argument("unknown sweep parameter '" + name + "' (expected gamma, beta2 or delta)");
}

void cell_lines(std::ostream& out, const std::vector<std::string>& lines) {
    for (const auto& l : lines) out << "# " << l << '\n';
}

}  // namespace

void cmd_analyze(const AnalyzeCommand& cmd, std::ostream& log) {
    static const char* const kTasks[] = {"equilibria", "thresholds", "sweep", "limit-cycle", "heatmap", "potential"};
    bool known = false;
    for (const char* t : kTasks) known = known || cmd.task == t;
    if (!known) {
        throw std::invalid_argument("unknown analyze task '" + cmd.task +
                                    "' (expected equilibria, thresholds, sweep, limit-cycle, heatmap or potential)");
    }
    ModelParams p = params_or(cmd.params_file, theory_main_case);
    const unsigned workers = static_cast<unsigned>(std::max(0, cmd.workers));

    // Compute before opening the sink so a failure leaves no partial file.
    std::ostringstream body;
    std::vector<std::string> notes = {source_line("params source", cmd.params_file), params_line(p),
                                      "seed: none (deterministic)"};

    if (cmd.task == "equilibria") {
        analyze_equilibria(p, body, log);
    } else if (cmd.task == "thresholds") {
        notes.push_back("gamma in inverse sentiment-velocity units per day, gamma_bar = w_s gamma");
        analyze_thresholds(p, body);
    } else if (cmd.task == "sweep") {
        if (!(cmd.hi > cmd.lo)) throw std::invalid_argument("sweep needs --lo < --hi");
        const auto table = bifurcation_sweep(p, parse_sweep(cmd.sweep_parameter), cmd.lo, cmd.hi, cmd.steps, workers);
        notes.push_back("sweep: " + cmd.sweep_parameter + " from " + fmt(cmd.lo) + " to " + fmt(cmd.hi) + " in " +
                        std::to_string(cmd.steps) + " steps");
        for (const auto& b : table.boundaries) {
            notes.push_back("boundary " + std::string(to_string(b.branch)) + ": " + b.from + " -> " + b.to +
                            " between " + fmt(b.lo) + " and " + fmt(b.hi));
            log << "boundary " << to_string(b.branch) << ": " << b.from << " -> " << b.to << " in [" << fmt(b.lo)
                << ", " << fmt(b.hi) << "]\n";
        }
        text_row(body, {cmd.sweep_parameter, "branch", "s", "h", "class", "re_lambda_plus", "im_lambda_plus",
                        "re_lambda_minus", "im_lambda_minus", "period_days"});
        for (const auto& row : table.rows) {
            for (const auto& e : row.points) {
                Cells c = {fmt(row.value), to_string(e.branch), fmt(e.s), fmt(e.h), to_string(e.cls)};
                for (auto& x : eigen_cells(e, p.w_s)) c.push_back(x);
                text_row(body, c);
            }
        }
    } else if (cmd.task == "limit-cycle") {
        const auto pair = locate_cycle_pair(p, cmd.max_days);
        notes.push_back("section: h = tanh(delta) crossed with h decreasing; max days " + fmt(cmd.max_days));
        text_row(body, {"cycle", "exists", "stable", "period_days", "s_min", "s_max", "section_s", "iterations"});
        auto emit = [&](const char* name, const LimitCycleReport& r) {
            text_row(body, {name, r.exists ? "true" : "false", r.stable ? "true" : "false", fmt(r.period_days),
                            fmt(r.s_min), fmt(r.s_max), fmt(r.section_s), std::to_string(r.convergence_iterations)});
            log << name << " cycle: exists=" << (r.exists ? "true" : "false");
            if (r.exists) log << " period_days=" << fmt(r.period_days);
            log << '\n';
        };
        emit("stable", pair.stable);
        emit("unstable", pair.unstable);
    } else if (cmd.task == "heatmap") {
        if (cmd.grid < 2) throw std::invalid_argument("heatmap grid must be >= 2");
        std::vector<double> g(static_cast<std::size_t>(cmd.grid));
        for (int i = 0; i < cmd.grid; ++i) g[static_cast<std::size_t>(i)] = -1.0 + 2.0 * i / (cmd.grid - 1);
        const GridMap map = noise_dominance_map(p, g, g);
        notes.push_back("value: gamma |ds/dt| / kappa");
        text_row(body, {"s", "h", "value"});
        for (std::size_t i = 0; i < map.s_grid.size(); ++i) {
            for (std::size_t j = 0; j < map.h_grid.size(); ++j) {
                text_row(body, {fmt(map.s_grid[i]), fmt(map.h_grid[j]), fmt(map.at(i, j))});
            }
        }
    } else {
        const PotentialCurve curve = potential_uc(p, cmd.c, cmd.grid);
        notes.push_back("shift c: " + fmt(cmd.c));
        for (const auto& e : curve.extrema) {
            notes.push_back(std::string("extremum: s=") + fmt(e.s) + (e.kind == ExtremumKind::Min ? " min" : " max"));
        }
        log << curve.extrema.size() << " extrema\n";
        text_row(body, {"s", "U"});
        for (std::size_t i = 0; i < curve.s_grid.size(); ++i) text_row(body, {fmt(curve.s_grid[i]), fmt(curve.u_values[i])});
    }

    Sink sink(cmd.out);
    header_lines(sink.stream(), "analyze " + cmd.task, {});
    cell_lines(sink.stream(), notes);
    sink.stream() << body.str();
    sink.finish();
}

// ================================================================ glauber

void cmd_glauber(const GlauberCommand& cmd, std::ostream& log) {
    if (cmd.task != "trajectory" && cmd.task != "meanfield-compare" && cmd.task != "histogram") {
        throw std::invalid_argument("unknown glauber task '" + cmd.task +
                                    "' (expected trajectory, meanfield-compare or histogram)");
    }
    if (cmd.config_file.empty()) throw std::invalid_argument("glauber needs a config file");
    if (cmd.realizations < 1) throw std::invalid_argument("realizations must be >= 1");
    const GlauberSetup g = load_glauber_config(cmd.config_file);
    const auto& c = g.config;
    const std::vector<std::string> notes = {
        "config: " + cmd.config_file, "system: " + describe(c), "s0: " + fmt(g.s0) + " h0: " + fmt(g.h0),
        "seed: " + std::to_string(cmd.seed), "realizations: " + std::to_string(cmd.realizations),
        "horizon: " + fmt(cmd.horizon), "sample_dt: " + fmt(cmd.sample_dt)};
    const SpinMacroState init = macrostate_from(g.s0, g.h0, c);

    std::ostringstream body;
    std::vector<std::string> extra = notes;
    if (cmd.task == "trajectory") {
        text_row(body, {"realization", "t", "s", "h"});
        for (int r = 0; r < cmd.realizations; ++r) {
            RandomSource rng(cmd.seed, static_cast<std::uint64_t>(r));
            const auto traj = simulate_glauber(c, init, cmd.horizon, rng, cmd.sample_dt);
            for (const auto& smp : traj.samples) {
                text_row(body, {std::to_string(r), fmt(smp.t), fmt(smp.s), fmt(smp.h)});
            }
        }
    } else if (cmd.task == "meanfield-compare") {
        const MeanFieldReport rep = meanfield_compare(c, g.s0, g.h0, cmd.horizon, cmd.realizations, cmd.seed,
                                                      static_cast<unsigned>(std::max(0, cmd.workers)), cmd.sample_dt);
        std::istringstream kv(to_key_values(rep));
        for (std::string line; std::getline(kv, line);) extra.push_back("report: " + line);
        text_row(body, {"t", "ode_s", "ode_h", "mean_s", "mean_h", "dev_s", "dev_h"});
        for (std::size_t i = 0; i < rep.ode.size(); ++i) {
            const auto& o = rep.ode[i];
            const auto& m = rep.ensemble_mean[i];
            text_row(body, {fmt(o.t), fmt(o.s), fmt(o.h), fmt(m.s), fmt(m.h), fmt(m.s - o.s), fmt(m.h - o.h)});
        }
        log << "max deviation " << fmt(rep.max_deviation) << " over " << rep.realizations << " realizations\n";
    } else {
        if (!c.b_s.is_static() || !c.b_h.is_static()) {
            throw std::invalid_argument("histogram needs static fields (no amplitudes)");
        }
        RandomSource rng(cmd.seed, 0);
        const auto traj = simulate_glauber(c, init, cmd.horizon, rng, cmd.sample_dt);
        std::map<std::pair<long, long>, std::size_t> counts;
        std::size_t total = 0;
        for (const auto& smp : traj.samples) {
            if (smp.t < cmd.burn_in) continue;
            const long S = std::lround(smp.s * static_cast<double>(c.N_s));
            const long Hm = std::lround(smp.h * static_cast<double>(c.N_h));
            ++counts[{S, Hm}];
            ++total;
        }
        if (total == 0) throw std::invalid_argument("no samples after burn-in");
        extra.push_back("burn_in: " + fmt(cmd.burn_in));
        extra.push_back("samples: " + std::to_string(total) + " events: " + std::to_string(traj.events));
        text_row(body, {"S", "H", "s", "h", "count", "empirical", "p0"});
        for (const auto& mp : equilibrium_distribution(c)) {
            const auto it = counts.find({mp.state.S, mp.state.H});
            const std::size_t n = it == counts.end() ? 0 : it->second;
            text_row(body, {std::to_string(mp.state.S), std::to_string(mp.state.H),
                            fmt(static_cast<double>(mp.state.S) / static_cast<double>(c.N_s)),
                            fmt(static_cast<double>(mp.state.H) / static_cast<double>(c.N_h)), std::to_string(n),
                            fmt(static_cast<double>(n) / static_cast<double>(total)), fmt(mp.probability)});
        }
    }
    Sink sink(cmd.out);
    header_lines(sink.stream(), "glauber " + cmd.task, extra);
    sink.stream() << body.str();
    sink.finish();
}

// ================================================================ stats

void cmd_stats(const StatsCommand& cmd, std::ostream& log) {
    static const char* const kTasks[] = {"returns", "moments", "histogram", "acf", "volatility", "lowpass", "mssa", "xcorr"};
    bool known = false;
    for (const char* t : kTasks) known = known || cmd.task == t;
    if (!known) {
        throw std::invalid_argument("unknown stats task '" + cmd.task +
                                    "' (expected returns, moments, histogram, acf, volatility, lowpass, mssa or xcorr)");
    }
    Series x = load_input(cmd.input_csv, cmd.column);
    std::vector<std::string> notes = {"input: " + cmd.input_csv + (cmd.column.empty() ? "" : " column " + cmd.column),
                                      "seed: none (deterministic)"};

    auto to_returns = [&](const Series& in, int horizon) {
        const Series r = log_returns(in, horizon);
        return cmd.overlapping ? r : every_nth(r, static_cast<std::size_t>(horizon));
    };
    if (cmd.task == "returns") {
        const int horizon = cmd.returns > 0 ? cmd.returns : 21;
        x = to_returns(x, horizon);
        notes.push_back("returns: " + std::to_string(horizon) + "-day log returns, " +
                        (cmd.overlapping ? "overlapping" : "non-overlapping"));
    } else if (cmd.returns > 0) {
        x = to_returns(x, cmd.returns);
        notes.push_back("input replaced by " + std::to_string(cmd.returns) + "-day log returns, " +
                        (cmd.overlapping ? "overlapping" : "non-overlapping"));
    }

    std::ostringstream body;
    if (cmd.task == "returns") {
        text_row(body, {"date_index", "return"});
        for (std::size_t i = 0; i < x.size(); ++i) text_row(body, {fmt(x.time(i)), fmt(x[i])});
    } else if (cmd.task == "moments") {
        const Moments m = distribution_stats(x, cmd.normalize);
        text_row(body, {"n", "mean", "variance", "skewness", "excess_kurtosis"});
        text_row(body, {std::to_string(m.n), fmt(m.mean), fmt(m.variance), fmt(m.skewness), fmt(m.excess_kurtosis)});
        log << "skewness " << fmt(m.skewness) << " excess kurtosis " << fmt(m.excess_kurtosis) << '\n';
    } else if (cmd.task == "histogram") {
        const Histogram h = histogram(x, cmd.bins, cmd.normalize);
        notes.push_back(cmd.normalize ? "sample z-scored before binning" : "raw sample");
        text_row(body, {"lo", "hi", "count", "density"});
        for (std::size_t b = 0; b < h.counts.size(); ++b) {
            text_row(body, {fmt(h.edges[b]), fmt(h.edges[b + 1]), std::to_string(h.counts[b]), fmt(h.density[b])});
        }
    } else if (cmd.task == "acf") {
        text_row(body, {"lag", "acf", "band_lo", "band_hi"});
        for (const auto& a : autocorrelation(x, cmd.max_lag)) {
            text_row(body, {std::to_string(a.lag), fmt(a.acf), fmt(-a.band), fmt(a.band)});
        }
    } else if (cmd.task == "volatility") {
        const Series v = rolling_volatility(x, cmd.increment, cmd.window,
                                            cmd.overlapping ? IncrementMode::Overlapping : IncrementMode::NonOverlapping);
        notes.push_back("increment " + std::to_string(cmd.increment) + " days, window " + std::to_string(cmd.window) +
                        " days, " + (cmd.overlapping ? "overlapping" : "non-overlapping") + " increments");
        text_row(body, {"date_index", "volatility"});
        for (std::size_t i = 0; i < v.size(); ++i) text_row(body, {fmt(v.time(i)), fmt(v[i])});
    } else if (cmd.task == "lowpass") {
        const Series f = fourier_lowpass(x, cmd.min_period);
        notes.push_back("components with period below " + fmt(cmd.min_period) + " days removed");
        text_row(body, {"date_index", "value", "lowpass"});
        for (std::size_t i = 0; i < f.size(); ++i) text_row(body, {fmt(x.time(i)), fmt(x[i]), fmt(f[i])});
    } else {
        if (cmd.second_csv.empty()) throw std::invalid_argument(cmd.task + " needs a second series");
        Series y = load_input(cmd.second_csv, cmd.second_column);
        if (cmd.returns > 0) y = to_returns(y, cmd.returns);
        notes.push_back("second input: " + cmd.second_csv +
                        (cmd.second_column.empty() ? "" : " column " + cmd.second_column));
        if (y.start_index != x.start_index || y.size() != x.size()) {
            throw std::invalid_argument("the two series must share the same day grid");
        }
        if (cmd.task == "mssa") {
            const MssaResult r = mssa_leading(x, y, cmd.window, cmd.components);
            notes.push_back("window " + std::to_string(cmd.window) + ", leading " + std::to_string(cmd.components) +
                            " components, explained share " + fmt(r.explained));
            text_row(body, {"date_index", "x", "y", "x_rec", "y_rec"});
            for (std::size_t i = 0; i < x.size(); ++i) {
                text_row(body, {fmt(x.time(i)), fmt(x[i]), fmt(y[i]), fmt(r.x_rec[i]), fmt(r.y_rec[i])});
            }
            log << "explained share " << fmt(r.explained) << '\n';
        } else {
            notes.push_back("corr(x_t, y_{t+lag})");
            text_row(body, {"lag", "correlation"});
            for (const auto& [lag, v] : cross_correlation(x, y, cmd.lag_min, cmd.lag_max)) {
                text_row(body, {std::to_string(lag), fmt(v)});
            }
        }
    }
    Sink sink(cmd.out);
    header_lines(sink.stream(), "stats " + cmd.task, notes);
    sink.stream() << body.str();
    sink.finish();
}

}  // namespace newsmarket
