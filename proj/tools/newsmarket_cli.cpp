#include "newsmarket/commands.hpp"

#include "CLI11.hpp"

#include <exception>
#include <iostream>

namespace nm = newsmarket;

int main(int argc, char** argv) {
    CLI::App app{"News-driven sentiment and market price model: simulation, phase analysis and statistics.\n"
                 "Worker threads: --workers, else NEWSMARKET_WORKERS, else all cores."};
    app.set_version_flag("--version", std::string(NEWSMARKET_VERSION));
    app.require_subcommand(1);

    // simulate-empirical
    nm::EmpiricalCommand emp;
    auto* se = app.add_subcommand("simulate-empirical",
                                  "Sentiment and price driven by a daily news-flow CSV. Output: day,H,s,p.");
    se->add_option("--news", emp.h_csv, "news-flow CSV (date_index,value)")->required();
    se->add_option("--params", emp.params_file, "key = value parameter file (default: calibrated values)");
    se->add_option("--out", emp.out_csv, "output CSV (default: stdout)");
    se->add_option("--s0", emp.s0, "initial sentiment");
    se->add_option("--substeps", emp.substeps, "RK4 substeps per day")->check(CLI::PositiveNumber);

    // simulate-theory
    nm::TheoryCommand th;
    auto* st = app.add_subcommand("simulate-theory",
                                  "Stochastic two-component model. Writes run_<i>.csv (day,xi,s,h,p), mean.csv and "
                                  "manifest.txt.");
    st->add_option("--params", th.params_file, "parameter file (default: main theoretical case)");
    st->add_option("--horizon", th.horizon, "business days")->check(CLI::PositiveNumber);
    st->add_option("--realizations", th.realizations, "ensemble size")->check(CLI::PositiveNumber);
    st->add_option("--seed", th.seed, "random seed");
    st->add_option("--theta", th.theta_csv, "daily temperature CSV covering the horizon");
    st->add_option("--beta1-shift", th.beta1_shift, "added to 1/theta");
    st->add_option("--mode", th.mode, "simplified or full")->check(CLI::IsMember({"simplified", "full"}));
    st->add_option("--s0", th.s0, "initial sentiment");
    st->add_option("--h0", th.h0, "initial analyst sentiment");
    st->add_option("--substeps", th.substeps, "RK4 substeps per day")->check(CLI::PositiveNumber);
    st->add_option("--out", th.out_dir, "output directory")->required();
    st->add_flag("!--no-runs", th.write_runs, "only write the ensemble mean");
    st->add_option("--workers", th.workers, "worker threads");

    // analyze
    nm::AnalyzeCommand an;
    auto* az = app.add_subcommand(
        "analyze",
        "Phase-space analysis of the noise-free model.\n"
        "  equilibria   branch,s,h,class,eigenvalues (per rescaled time),period_days\n"
        "  thresholds   feedback gains separating node/focus/unstable classes per branch\n"
        "  sweep        classification along --sweep gamma|beta2|delta over [--lo, --hi]\n"
        "  limit-cycle  stable and unstable cycle: exists,stable,period_days,s range,section crossing\n"
        "  heatmap      gamma |ds/dt| / kappa on a --grid x --grid lattice of (s, h)\n"
        "  potential    U(s) with shift --c; extrema listed in the header");
    az->add_option("task", an.task, "analysis task")->required();
    az->add_option("--params", an.params_file, "parameter file (default: main theoretical case)");
    az->add_option("--out", an.out, "output CSV (default: stdout)");
    az->add_option("--sweep", an.sweep_parameter, "swept parameter")->check(CLI::IsMember({"gamma", "beta2", "delta"}));
    az->add_option("--lo", an.lo, "sweep start");
    az->add_option("--hi", an.hi, "sweep end");
    az->add_option("--steps", an.steps, "sweep grid points")->check(CLI::PositiveNumber);
    az->add_option("--horizon", an.max_days, "day budget for cycle detection");
    az->add_option("--c", an.c, "potential shift");
    az->add_option("--grid", an.grid, "grid points for potential and heatmap");
    az->add_option("--workers", an.workers, "worker threads");

    // glauber
    nm::GlauberCommand gl;
    auto* gb = app.add_subcommand(
        "glauber",
        "Microscopic spin kinetics.\n"
        "  trajectory         realization,t,s,h\n"
        "  meanfield-compare  ensemble mean against the mean-field ODE\n"
        "  histogram          long-run macrostate frequencies against the equilibrium law\n"
        "Config keys: N_s N_h J11 J12 J21 J22 mu_s mu_h theta w_s w_h b_s b_s_amplitude b_s_period b_h "
        "b_h_amplitude b_h_period s0 h0");
    gb->add_option("task", gl.task, "glauber task")->required();
    gb->add_option("--params", gl.config_file, "spin-system config file")->required();
    gb->add_option("--horizon", gl.horizon, "time horizon");
    gb->add_option("--realizations", gl.realizations, "ensemble size")->check(CLI::PositiveNumber);
    gb->add_option("--seed", gl.seed, "random seed");
    gb->add_option("--sample-dt", gl.sample_dt, "sampling interval");
    gb->add_option("--burn-in", gl.burn_in, "discarded initial time (histogram)");
    gb->add_option("--out", gl.out, "output CSV (default: stdout)");
    gb->add_option("--workers", gl.workers, "worker threads");

    // stats
    nm::StatsCommand sc;
    auto* ss = app.add_subcommand(
        "stats",
        "Time-series statistics on a CSV.\n"
        "  returns     h-day log returns (--returns, default 21)\n"
        "  moments     n,mean,variance,skewness,excess_kurtosis\n"
        "  histogram   lo,hi,count,density (--normalize for zero mean, unit variance)\n"
        "  acf         lag,acf,band_lo,band_hi\n"
        "  volatility  rolling standard deviation of --increment-day changes over --window days\n"
        "  lowpass     Fourier filter removing periods below --min-period\n"
        "  mssa        leading-pair reconstruction of the input and --with\n"
        "  xcorr       corr(x_t, y_{t+lag}) for --with");
    ss->add_option("task", sc.task, "statistics task")->required();
    ss->add_option("--in", sc.input_csv, "input CSV")->required();
    ss->add_option("--column", sc.column, "column of a multi-column CSV (first column is the day index)");
    ss->add_option("--with", sc.second_csv, "second input for mssa and xcorr");
    ss->add_option("--with-column", sc.second_column, "column of the second input");
    ss->add_option("--out", sc.out, "output CSV (default: stdout)");
    ss->add_option("--returns", sc.returns, "replace inputs by h-day log returns first");
    ss->add_flag("--overlapping", sc.overlapping, "overlapping returns and increments");
    ss->add_flag("--normalize", sc.normalize, "z-score before moments/histogram");
    ss->add_option("--bins", sc.bins, "histogram bins")->check(CLI::PositiveNumber);
    ss->add_option("--max-lag", sc.max_lag, "largest ACF lag");
    ss->add_option("--increment", sc.increment, "volatility increment in days");
    ss->add_option("--window", sc.window, "volatility or MSSA window in days");
    ss->add_option("--min-period", sc.min_period, "low-pass cutoff period in days");
    ss->add_option("--components", sc.components, "MSSA components kept");
    ss->add_option("--lag-min", sc.lag_min, "smallest xcorr lag");
    ss->add_option("--lag-max", sc.lag_max, "largest xcorr lag");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (*se) nm::cmd_simulate_empirical(emp, std::cerr);
        if (*st) nm::cmd_simulate_theory(th, std::cerr);
        if (*az) nm::cmd_analyze(an, std::cerr);
        if (*gb) nm::cmd_glauber(gl, std::cerr);
        if (*ss) nm::cmd_stats(sc, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
