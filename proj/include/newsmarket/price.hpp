#pragma once

#include "newsmarket/params.hpp"
#include "newsmarket/series.hpp"

#include <string>
#include <vector>

namespace newsmarket {

// p = a1 s + integral of a2 (s - s*) dt + a4, trapezoidal, p[0] = a1 s[0] + a4.
Series price_from_sentiment(const Series& s, const ModelParams& params);

struct PriceComponents {
    Series fast;  // a1 s
    Series slow;  // a4 + running integral of a2 (s - s*)
};

// fast + slow reproduces price_from_sentiment bit for bit.
PriceComponents decompose_price(const Series& s, const ModelParams& params);

struct PriceFit {
    double a1 = 0.0;
    double a2 = 0.0;
    double a4 = 0.0;
    double s_star = 0.0;
    double residual_rms = 0.0;
    double correlation = 0.0;
    // OLS standard errors; the s* error uses the delta method. Zero when s*
    // was held fixed or the fit is exact.
    double se_a1 = 0.0;
    double se_a2 = 0.0;
    double se_a4 = 0.0;
    double se_s_star = 0.0;
    std::size_t n = 0;
};

// Least squares on p = a1 s + a2 I(t) + c t + a4 with I the trapezoidal
// integral of s and t in days from the first sample; s* = -c / a2.
// Throws "degenerate sentiment series" on a rank-deficient design and
// std::runtime_error if a1 or a2 comes out non-positive.
PriceFit calibrate_price(const Series& s, const Series& p_obs);

// Same, with s* given: p = a1 s + a2 (I(t) - s* t) + a4.
PriceFit calibrate_price_fixed_sstar(const Series& s, const Series& p_obs, double s_star);

struct ThetaWindow {
    std::size_t begin = 0;
    std::size_t length = 0;
    double beta1 = 0.0;
    double s_star = 0.0;
    double residual_rms = 0.0;
    PriceFit fit;
};

struct ThetaFit {
    Series theta;  // 1/beta1 per day, in units of the coupling J
    Series p_fit;
    std::vector<ThetaWindow> windows;
};

// Piecewise-constant beta1 on consecutive non-overlapping windows. In each
// window every beta1 on the grid 1.000, 1.005, ..., 1.300 is tried: s* from
// solve_sbar(beta1, sigma), sentiment re-integrated across the window from
// the state carried over from the previous window, then (a1, a2, a4) refit
// with s* fixed. The smallest residual wins. A trailing remainder shorter
// than `window` joins the last window. The first window starts from s0.
ThetaFit iterative_theta_fit(const Series& H, const Series& p_obs, const ModelParams& params, int window = 250,
                             double sigma = 0.3, double s0 = 0.0, int substeps = 8);

// Interior samples where the discrete sentiment velocity changes sign with
// s > s* (resp. s < s*) and the centred price velocity (p[i+1]-p[i-1])/2 is
// not strictly positive (resp. negative).
struct TurningPointReport {
    std::size_t checked = 0;
    std::vector<std::size_t> violations;
};
TurningPointReport turning_point_check(const Series& s, const Series& p, double s_star);

std::string to_key_values(const PriceFit& fit);

}  // namespace newsmarket
