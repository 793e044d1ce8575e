#pragma once

#include "newsmarket/params.hpp"
#include "newsmarket/random.hpp"
#include "newsmarket/series.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace newsmarket {

struct MarketState {
    double s = 0.0;
    double h = 0.0;
    double p = 0.0;
};

enum class DriftMode {
    Simplified,  // h forced by tanh(gamma ds/dt + delta + kappa xi)
    Full,        // h forced by tanh(beta3 s + beta4 h + (gamma/a1)(a1 ds/dt + a2 (s - s*)) + kappa xi)
};

struct Drift {
    double ds = 0.0;
    double dh = 0.0;
};

// `xi` is the current daily news shock; it enters as kappa * xi inside the
// analyst tanh. ds/dt inside that tanh is the analytic sentiment drift at
// the same state.
Drift drift(const MarketState& state, const ModelParams& params, DriftMode mode, double xi = 0.0);

struct SimulationOptions {
    int substeps = 8;
    DriftMode mode = DriftMode::Simplified;
    // Daily temperature; beta1 on day d becomes 1/theta[d] + beta1_shift.
    // Must cover the horizon. beta2 is left unchanged.
    std::optional<Series> theta_profile;
    double beta1_shift = 0.0;
};

struct SimulationRun {
    std::vector<MarketState> states;  // days 0..horizon, states[0] is the initial state
    std::vector<double> xi;           // shock applied on day d, d < horizon
    ModelParams params;
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;

    Series s_series() const;
    Series h_series() const;
    Series p_series() const;
};

class IntegratorFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// One business day with the shock frozen, `substeps` RK4 steps for (s, h)
// and the trapezoidal price update per substep.
MarketState advance_day(const MarketState& state, const ModelParams& params, DriftMode mode, double xi,
                        int substeps);

// One standard-normal draw per day from `rng` (skipped when kappa = 0, so
// noiseless runs do not consume the stream).
SimulationRun simulate(const ModelParams& params, const MarketState& init, int horizon_days, RandomSource& rng,
                       const SimulationOptions& options = {});

struct EnsembleResult {
    Series mean_s;
    Series mean_h;
    Series mean_p;
    std::vector<SimulationRun> runs;
};

// Realization i draws from RandomSource(seed, i). The result does not
// depend on the worker count.
EnsembleResult ensemble(const ModelParams& params, const MarketState& init, int horizon_days, int n_realizations,
                        std::uint64_t seed, const SimulationOptions& options = {}, unsigned workers = 0,
                        bool keep_runs = true);

struct GridMap {
    std::vector<double> s_grid;
    std::vector<double> h_grid;
    std::vector<double> values;  // row-major, values[i * h_grid.size() + j] at (s_grid[i], h_grid[j])

    double at(std::size_t i, std::size_t j) const { return values[i * h_grid.size() + j]; }
};

// gamma |ds/dt| / kappa with ds/dt the sentiment drift; requires kappa > 0.
GridMap noise_dominance_map(const ModelParams& params, const std::vector<double>& s_grid,
                            const std::vector<double>& h_grid);

}  // namespace newsmarket
