#include "newsmarket/market.hpp"

#include "newsmarket/parallel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace newsmarket {

namespace {

constexpr double kBoundSlack = 1e-9;

Series column(const std::vector<MarketState>& states, double MarketState::*field) {
    Series out;
    out.values.reserve(states.size());
    for (const auto& st : states) out.values.push_back(st.*field);
    return out;
}

void check_bounds(const MarketState& st, long day) {
    if (!(std::abs(st.s) <= 1.0 + kBoundSlack) || !(std::abs(st.h) <= 1.0 + kBoundSlack)) {
        throw IntegratorFailure("state left the unit box on day " + std::to_string(day) + " (s=" +
                                std::to_string(st.s) + ", h=" + std::to_string(st.h) + ")");
    }
}

}  // namespace

Drift drift(const MarketState& st, const ModelParams& p, DriftMode mode, double xi) {
    Drift d;
    d.ds = -p.w_s * st.s + p.w_s * std::tanh(p.beta1 * st.s + p.beta2 * st.h);
    double arg;
    if (mode == DriftMode::Simplified) {
        arg = p.gamma * d.ds + p.delta;
    } else {
        const double kappa1 = p.gamma / p.a1;
        arg = p.beta3 * st.s + p.beta4 * st.h + kappa1 * (p.a1 * d.ds + p.a2 * (st.s - p.s_star));
    }
    d.dh = -p.w_h * st.h + p.w_h * std::tanh(arg + p.kappa * xi);
    return d;
}

MarketState advance_day(const MarketState& state, const ModelParams& p, DriftMode mode, double xi, int substeps) {
    if (substeps < 1) throw std::invalid_argument("substeps must be >= 1");
    const double dt = 1.0 / substeps;
    MarketState st = state;
    for (int k = 0; k < substeps; ++k) {
        const Drift k1 = drift(st, p, mode, xi);
        const Drift k2 = drift({st.s + 0.5 * dt * k1.ds, st.h + 0.5 * dt * k1.dh, 0.0}, p, mode, xi);
        const Drift k3 = drift({st.s + 0.5 * dt * k2.ds, st.h + 0.5 * dt * k2.dh, 0.0}, p, mode, xi);
        const Drift k4 = drift({st.s + dt * k3.ds, st.h + dt * k3.dh, 0.0}, p, mode, xi);
        const double s_next = st.s + dt / 6.0 * (k1.ds + 2.0 * k2.ds + 2.0 * k3.ds + k4.ds);
        const double h_next = st.h + dt / 6.0 * (k1.dh + 2.0 * k2.dh + 2.0 * k3.dh + k4.dh);
        st.p += p.a1 * (s_next - st.s) + p.a2 * dt * (0.5 * (st.s + s_next) - p.s_star);
        st.s = s_next;
        st.h = h_next;
    }
    return st;
}

Series SimulationRun::s_series() const { return column(states, &MarketState::s); }
Series SimulationRun::h_series() const { return column(states, &MarketState::h); }
Series SimulationRun::p_series() const { return column(states, &MarketState::p); }

SimulationRun simulate(const ModelParams& params, const MarketState& init, int horizon_days, RandomSource& rng,
                       const SimulationOptions& opt) {
    if (horizon_days < 1) throw std::invalid_argument("horizon must be >= 1 day");
    if (opt.substeps < 1) throw std::invalid_argument("substeps must be >= 1");
    if (opt.theta_profile && opt.theta_profile->size() < static_cast<std::size_t>(horizon_days)) {
        throw std::invalid_argument("theta profile has " + std::to_string(opt.theta_profile->size()) +
                                    " samples, horizon needs " + std::to_string(horizon_days));
    }
    check_bounds(init, 0);
    SimulationRun run;
    run.params = params;
    run.seed = rng.seed();
    run.stream_id = rng.stream_id();
    run.states.reserve(static_cast<std::size_t>(horizon_days) + 1);
    run.xi.reserve(static_cast<std::size_t>(horizon_days));
    run.states.push_back(init);
    ModelParams day_params = params;
    MarketState st = init;
    for (int d = 0; d < horizon_days; ++d) {
        if (opt.theta_profile) {
            const double theta = (*opt.theta_profile)[static_cast<std::size_t>(d)];
            if (!(theta > 0.0)) throw std::invalid_argument("theta profile must be positive (day " + std::to_string(d) + ")");
            day_params.beta1 = 1.0 / theta + opt.beta1_shift;
        }
        const double xi = params.kappa > 0.0 ? rng.normal() : 0.0;
        st = advance_day(st, day_params, opt.mode, xi, opt.substeps);
        check_bounds(st, d + 1);
        run.xi.push_back(xi);
        run.states.push_back(st);
    }
    return run;
}

EnsembleResult ensemble(const ModelParams& params, const MarketState& init, int horizon_days, int n_realizations,
                        std::uint64_t seed, const SimulationOptions& options, unsigned workers, bool keep_runs) {
    if (n_realizations < 1) throw std::invalid_argument("need at least one realization");
    const auto n = static_cast<std::size_t>(n_realizations);
    std::vector<SimulationRun> runs(n);
    parallel_for(n, worker_count(static_cast<int>(workers)), [&](std::size_t i) {
        RandomSource rng(seed, i);
        runs[i] = simulate(params, init, horizon_days, rng, options);
    });
    const std::size_t len = runs[0].states.size();
    EnsembleResult out;
    out.mean_s.values.assign(len, 0.0);
    out.mean_h.values.assign(len, 0.0);
    out.mean_p.values.assign(len, 0.0);
    // Fixed summation order keeps the mean independent of scheduling.
    for (const auto& r : runs) {
        for (std::size_t d = 0; d < len; ++d) {
            out.mean_s[d] += r.states[d].s;
            out.mean_h[d] += r.states[d].h;
            out.mean_p[d] += r.states[d].p;
        }
    }
    for (std::size_t d = 0; d < len; ++d) {
        out.mean_s[d] /= static_cast<double>(n);
        out.mean_h[d] /= static_cast<double>(n);
        out.mean_p[d] /= static_cast<double>(n);
    }
    if (keep_runs) out.runs = std::move(runs);
    return out;
}

GridMap noise_dominance_map(const ModelParams& params, const std::vector<double>& s_grid,
                            const std::vector<double>& h_grid) {
    if (!(params.kappa > 0.0)) throw std::invalid_argument("noise dominance map needs kappa > 0");
    GridMap m;
    m.s_grid = s_grid;
    m.h_grid = h_grid;
    m.values.reserve(s_grid.size() * h_grid.size());
    for (double s : s_grid) {
        for (double h : h_grid) {
            const double ds = -params.w_s * s + params.w_s * std::tanh(params.beta1 * s + params.beta2 * h);
            m.values.push_back(params.gamma * std::abs(ds) / params.kappa);
        }
    }
    return m;
}

}  // namespace newsmarket
