#pragma once

#include "newsmarket/random.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace newsmarket {

// External field b(t) = constant + amplitude sin(2 pi t / period + phase).
// A non-empty `daily` table overrides the formula: value daily[floor(t)],
// the last entry held beyond the end.
struct FieldProfile {
    double constant = 0.0;
    double amplitude = 0.0;
    double period = 1.0;
    double phase = 0.0;
    std::vector<double> daily;

    double operator()(double t) const;
    bool is_static() const { return daily.empty() && amplitude == 0.0; }
};

// All-to-all two-species Ising system. Couplings follow the thermodynamic
// convention: per-pair strengths are J11/N_s, J22/N_h and J12/N_h = J21/N_s.
struct SpinSystemConfig {
    long N_s = 100;
    long N_h = 100;
    double J11 = 0.0;
    double J12 = 0.0;
    double J21 = 0.0;
    double J22 = 0.0;
    double mu_s = 1.0;
    double mu_h = 1.0;
    double theta = 1.0;
    double w_s = 1.0;
    double w_h = 1.0;
    FieldProfile b_s;
    FieldProfile b_h;
};

// Throws std::invalid_argument on N < 1, theta <= 0, non-positive rates or
// J21/J12 != N_s/N_h (relative 1e-12).
void validate(const SpinSystemConfig& config);

struct SpinMacroState {
    long S = 0;
    long H = 0;
};

// Rates for S -> S+2, S -> S-2, H -> H+2, H -> H-2 at time t.
std::array<double, 4> transition_rates(const SpinMacroState& state, const SpinSystemConfig& config, double t = 0.0);

// log of the unnormalized equilibrium weight g(S) g(H) exp(-E/theta) with
// g the binomial multiplicities and fields taken at time t.
double log_equilibrium_weight(const SpinMacroState& state, const SpinSystemConfig& config, double t = 0.0);

struct MacrostateProbability {
    SpinMacroState state;
    double probability;
};
// Normalized equilibrium distribution over all (N_s+1)(N_h+1) macrostates.
std::vector<MacrostateProbability> equilibrium_distribution(const SpinSystemConfig& config);

// Macrostate nearest to magnetizations (s, h) with the right parities.
SpinMacroState macrostate_from(double s, double h, const SpinSystemConfig& config);

struct GlauberSample {
    double t;
    double s;
    double h;
};

struct GlauberTrajectory {
    std::vector<GlauberSample> samples;  // at t = 0, dt, 2 dt, ..., horizon
    SpinMacroState final_state;
    std::uint64_t events = 0;
};

// Gillespie evolution of the macrostate birth-death chain. Time-dependent
// fields are frozen between events, which is accurate while the event rate
// is much faster than the field variation.
GlauberTrajectory simulate_glauber(const SpinSystemConfig& config, const SpinMacroState& init, double horizon,
                                   RandomSource& rng, double sample_dt = 1.0);

struct MeanFieldSample {
    double t;
    double s;
    double h;
};
// ds/dt = w_s [tanh((J11 s + J12 h + mu_s b_s)/theta) - s], likewise for h; RK4.
std::vector<MeanFieldSample> meanfield_trajectory(const SpinSystemConfig& config, double s0, double h0,
                                                  double horizon, double sample_dt = 1.0, int substeps = 20);

struct MeanFieldReport {
    double max_dev_s = 0.0;
    double max_dev_h = 0.0;
    double rms_dev_s = 0.0;
    double rms_dev_h = 0.0;
    double max_deviation = 0.0;
    int realizations = 0;
    std::uint64_t events = 0;
    std::vector<MeanFieldSample> ode;
    std::vector<MeanFieldSample> ensemble_mean;
};

// Ensemble-averaged Glauber magnetizations against the mean-field ODE from
// the same initial macrostate. Realization i uses RandomSource(seed, i).
MeanFieldReport meanfield_compare(const SpinSystemConfig& config, double s0, double h0, double horizon,
                                  int n_realizations, std::uint64_t seed, unsigned workers = 0,
                                  double sample_dt = 1.0);

std::string to_key_values(const MeanFieldReport& report);

}  // namespace newsmarket
