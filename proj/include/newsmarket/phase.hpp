#pragma once

#include "newsmarket/market.hpp"
#include "newsmarket/params.hpp"

#include <complex>
#include <string>
#include <vector>

namespace newsmarket {

// Analysis of the autonomous (kappa = 0) simplified two-component system in
// rescaled time tau = w_s t:
//   s' = -s + tanh(beta1 s + beta2 h)
//   h' = -eta h + eta tanh(gamma_bar s' + delta),  eta = w_h/w_s, gamma_bar = w_s gamma.

enum class EquilibriumClass { StableNode, StableFocus, UnstableFocus, UnstableNode, Saddle };
enum class Branch { SMinus, SZero, SPlus, Paramagnetic };

const char* to_string(EquilibriumClass c);
const char* to_string(Branch b);

struct EquilibriumPoint {
    double s = 0.0;
    double h = 0.0;
    std::complex<double> lambda_plus;   // rescaled-time eigenvalues
    std::complex<double> lambda_minus;
    EquilibriumClass cls = EquilibriumClass::Saddle;
    Branch branch = Branch::Paramagnetic;
    double psi = 0.0;
    double chi = 0.0;
    double phi = 0.0;

    // Eigenvalues per business day.
    std::complex<double> lambda_plus_days(double w_s) const { return lambda_plus * w_s; }
    // Oscillation period in business days for foci, 0 otherwise.
    double period_days(double w_s) const;
};

// h* = tanh(delta) and every root of artanh(s) - beta1 s = beta2 tanh(delta)
// on (-1 + 1e-9, 1 - 1e-9), ascending in s, each classified.
std::vector<EquilibriumPoint> find_equilibria(const ModelParams& params);

// Largest delta with three equilibria. Requires beta1 > 1, beta2 > 0; throws
// std::domain_error when the artanh argument leaves (-1, 1).
double delta_critical(double beta1, double beta2);
// Small (beta1 - 1) form: (2 / (3 beta2 beta1^{3/2})) (beta1 - 1)^{3/2}.
double delta_critical_asymptotic(double beta1, double beta2);

// Linearization at (s, h). Throws if the point is not an equilibrium to 1e-8.
EquilibriumPoint classify(double s, double h, const ModelParams& params, Branch branch = Branch::Paramagnetic);

struct GammaThresholds {
    double node_focus = 0.0;      // stable node -> stable focus
    double focus_unstable = 0.0;  // stable focus -> unstable focus
    double unstable_node = 0.0;   // unstable focus -> unstable node
};

// Feedback gains (gamma, per business day units of the params) bounding the
// four classes at an equilibrium with beta1 (1 - s^2) < 1. Throws
// std::domain_error("saddle branch") otherwise.
GammaThresholds gamma_thresholds(double s, const ModelParams& params);

// Closed-form condition under which the node -> focus transition happens at
// s+ before s- as gamma grows.
bool node_focus_first_at_splus(double s_plus, double s_minus, const ModelParams& params);

struct OscillatorTerms {
    double G = 0.0;
    double dU_ds = 0.0;
    double U = 0.0;
};

// Damped-oscillator form s'' + G(s) s' + dU/ds = 0 (rescaled time).
OscillatorTerms oscillator_reduction(double s, double s_dot, const ModelParams& params);

struct OscillatorSample {
    double tau;
    double s;
    double v;
};
// RK4 on the reduced oscillator.
std::vector<OscillatorSample> integrate_oscillator(const ModelParams& params, double s0, double v0, double tau_end,
                                                   double dtau);

struct TrajectoryPoint {
    double t;  // business days
    double s;
    double h;
};
// Noise-free daily trajectory using the same stepper as the stochastic simulator.
std::vector<TrajectoryPoint> integrate_autonomous(const ModelParams& params, const MarketState& init, int days,
                                                  int substeps = 8);

struct LimitCycleReport {
    bool exists = false;
    bool stable = true;
    double period_days = 0.0;
    double s_min = 0.0;
    double s_max = 0.0;
    int convergence_iterations = 0;
    double section_s = 0.0;  // crossing of h = tanh(delta) with h decreasing
};

struct LimitCycleOptions {
    int substeps = 16;
    double tolerance = 1e-6;
};

struct SectionReturn {
    bool returned = false;
    double s = 0.0;
    double time_days = 0.0;
    double s_min = 0.0;
    double s_max = 0.0;
};

// Next downward crossing of h = tanh(delta) starting from (s, tanh(delta)).
SectionReturn poincare_return(const ModelParams& params, double s_on_section, double max_days,
                              int substeps = 16);

// Iterates the flow from `init` and watches the section crossings. A cycle
// is reported once two successive crossings agree within the tolerance, a
// fixed point of the return map is bracketed next to them, and the orbit is
// neither an equilibrium nor of vanishing amplitude.
LimitCycleReport detect_limit_cycle(const ModelParams& params, const MarketState& init, double max_days,
                                    const LimitCycleOptions& options = {});

// Unstable cycle between the stable focus at s+ and a stable cycle crossing
// the section at `stable_section_s`: the sign change of P(x) - x on that
// segment, refined by bisection (a basin boundary on the section).
LimitCycleReport locate_unstable_cycle(const ModelParams& params, double stable_section_s, double max_days,
                                       const LimitCycleOptions& options = {});

struct CyclePair {
    LimitCycleReport stable;
    LimitCycleReport unstable;
    bool present() const { return stable.exists && unstable.exists; }
};

// Stable cycle reached from a start far outside both wells, then the
// unstable cycle nested inside it.
CyclePair locate_cycle_pair(const ModelParams& params, double max_days, const LimitCycleOptions& options = {});

// Smallest gamma_bar in [lo, hi] with a stable large-amplitude cycle
// reachable from outside, by bisection to `tol`.
double limit_cycle_birth(const ModelParams& params, double gamma_bar_lo, double gamma_bar_hi, double tol,
                         double max_days, const LimitCycleOptions& options = {});

enum class SweepParameter { Gamma, Beta2, Delta };

struct SweepRow {
    double value = 0.0;
    std::vector<EquilibriumPoint> points;
};

struct SweepBoundary {
    double lo = 0.0;  // last value before the change
    double hi = 0.0;  // first value after it
    Branch branch = Branch::Paramagnetic;
    std::string from;  // class name or "absent"
    std::string to;
};

struct SweepTable {
    SweepParameter parameter = SweepParameter::Gamma;
    std::vector<SweepRow> rows;
    std::vector<SweepBoundary> boundaries;
};

SweepTable bifurcation_sweep(const ModelParams& params, SweepParameter parameter, double lo, double hi, int steps,
                             unsigned workers = 0);

const char* to_string(SweepParameter p);

}  // namespace newsmarket
