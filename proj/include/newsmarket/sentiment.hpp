#pragma once

#include "newsmarket/params.hpp"
#include "newsmarket/series.hpp"

#include <vector>

namespace newsmarket {

enum class ExtremumKind { Min, Max };
enum class Stability { Stable, Unstable };

struct Extremum {
    double s;
    ExtremumKind kind;
};

struct PotentialCurve {
    std::vector<double> s_grid;
    std::vector<double> u_values;
    std::vector<Extremum> extrema;
};

struct Root1D {
    double s;
    Stability stability;
};

// ds/dt = -w_s s + w_s tanh(beta1 s + beta2 H)
double sentiment_rhs(double s, double H, const ModelParams& params);

// Advances s across one sample interval of length `dt_day` with H frozen,
// using `substeps` classical Runge-Kutta steps.
double sentiment_step(double s, double H, const ModelParams& params, int substeps, double dt_day = 1.0);

// s[0] = s0 and s[k+1] follows from s[k] with H[k] held over the interval.
// Throws if H has a non-finite sample or |s| exceeds 1 + 1e-9.
Series integrate_sentiment(const Series& H, double s0, const ModelParams& params, int substeps = 8);

// U0(s) = w_s (s^2/2 - ln cosh(beta1 s)/beta1), sampled on [-1, 1].
PotentialCurve potential_u0(const ModelParams& params, int grid_size);

// Uc(s) = w_s (s^2/2 - ln cosh(beta1 s + c)/beta1).
PotentialCurve potential_uc(const ModelParams& params, double c, int grid_size);

// Roots of s = tanh(beta1 s + c) on [-1, 1], ascending.
std::vector<Root1D> equilibria_1d(double beta1, double c);

}  // namespace newsmarket
