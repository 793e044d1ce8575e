#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

namespace newsmarket {

// Command layer behind the `newsmarket` executable. Each command reads its
// inputs, writes CSV artifacts that open with `#` comment lines recording
// the version, parameters and seed, prints a short summary to `log` and
// throws on any error. An empty output path means stdout; an empty params
// path means the built-in defaults.

struct EmpiricalCommand {
    std::string h_csv;
    std::string params_file;
    std::string out_csv;
    double s0 = 0.0;
    int substeps = 8;
};
// Columns: day, H, s, p.
void cmd_simulate_empirical(const EmpiricalCommand& cmd, std::ostream& log);

struct TheoryCommand {
    std::string params_file;  // empty: main theoretical case
    int horizon = 15000;
    int realizations = 1;
    std::uint64_t seed = 1;
    std::string theta_csv;  // optional daily temperature
    double beta1_shift = 0.0;
    std::string out_dir;
    std::string mode = "simplified";  // or "full"
    double s0 = 0.0;
    double h0 = 0.0;
    int substeps = 8;
    int workers = 0;
    bool write_runs = true;
};
// Writes run_<i>.csv (day, xi, s, h, p) per realization, mean.csv and
// manifest.txt into out_dir.
void cmd_simulate_theory(const TheoryCommand& cmd, std::ostream& log);

struct AnalyzeCommand {
    std::string params_file;  // empty: main theoretical case
    std::string task;         // equilibria | thresholds | sweep | limit-cycle | heatmap | potential
    std::string out;
    std::string sweep_parameter = "gamma";  // gamma | beta2 | delta
    double lo = 0.0;
    double hi = 0.0;
    int steps = 100;
    double max_days = 20000.0;
    double c = 0.0;  // potential shift beta2 * H
    int grid = 201;
    int workers = 0;
};
void cmd_analyze(const AnalyzeCommand& cmd, std::ostream& log);

struct GlauberCommand {
    std::string config_file;
    std::string task = "trajectory";  // trajectory | meanfield-compare | histogram
    double horizon = 500.0;
    int realizations = 1;
    std::uint64_t seed = 1;
    double sample_dt = 1.0;
    double burn_in = 0.0;  // histogram only
    std::string out;
    int workers = 0;
};
void cmd_glauber(const GlauberCommand& cmd, std::ostream& log);

struct StatsCommand {
    std::string input_csv;
    std::string column;  // empty: two-column series file
    std::string task;    // returns | moments | histogram | acf | volatility | lowpass | mssa | xcorr
    std::string out;
    int returns = 0;  // >0: first replace the input by non-overlapping returns of this horizon
    bool normalize = false;
    int bins = 40;
    int max_lag = 60;
    int increment = 21;
    int window = 250;
    bool overlapping = false;
    double min_period = 250.0;
    int components = 2;
    std::string second_csv;  // mssa / xcorr partner
    std::string second_column;
    int lag_min = -20;
    int lag_max = 20;
};
void cmd_stats(const StatsCommand& cmd, std::ostream& log);

}  // namespace newsmarket
