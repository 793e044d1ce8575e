#include "newsmarket/sentiment.hpp"

#include "newsmarket/roots.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace newsmarket {

namespace {

constexpr double kBoundSlack = 1e-9;

// ln cosh(x) without overflow for large |x|.
double log_cosh(double x) {
    const double a = std::abs(x);
    return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
}

// A root of tanh(beta1 s + c) = s attracts when the map's slope is below one.
// A marginal root (slope exactly one, e.g. beta1 = 1 at the origin) is
// judged by the sign change of the force around it instead.
bool stable_root(double beta1, double c, double s) {
    const double t = std::tanh(beta1 * s + c);
    const double slope = beta1 * (1.0 - t * t) - 1.0;
    if (std::abs(slope) > 1e-12) return slope < 0.0;
    constexpr double h = 1e-5;
    const double left = std::tanh(beta1 * (s - h) + c) - (s - h);
    const double right = std::tanh(beta1 * (s + h) + c) - (s + h);
    return left > 0.0 && right < 0.0;
}

// Potential with the constant chosen so that Uc(0) = 0.
double potential_value(double s, double beta1, double c, double w_s) {
    if (beta1 == 0.0) return w_s * (0.5 * s * s - s * std::tanh(c));
    return w_s * (0.5 * s * s - (log_cosh(beta1 * s + c) - log_cosh(c)) / beta1);
}

PotentialCurve sample_potential(const ModelParams& params, double c, int grid_size) {
    if (grid_size < 3) throw std::invalid_argument("potential grid needs at least 3 points");
    PotentialCurve curve;
    curve.s_grid.resize(static_cast<std::size_t>(grid_size));
    curve.u_values.resize(curve.s_grid.size());
    const int n = grid_size - 1;
    for (int i = 0; i <= n; ++i) {
        const double s = static_cast<double>(2 * i - n) / static_cast<double>(n);
        curve.s_grid[static_cast<std::size_t>(i)] = s;
        curve.u_values[static_cast<std::size_t>(i)] = potential_value(s, params.beta1, c, params.w_s);
    }
    // Stationary points of the sampled curve, located from the analytic
    // slope dU/ds = w_s (s - tanh(beta1 s + c)) and refined by bisection.
    auto slope = [&](double s) { return s - std::tanh(params.beta1 * s + c); };
    for (double s : scan_roots(slope, -1.0, 1.0, n)) {
        if (s <= -1.0 || s >= 1.0) continue;
        curve.extrema.push_back({s, stable_root(params.beta1, c, s) ? ExtremumKind::Min : ExtremumKind::Max});
    }
    return curve;
}

}  // namespace

double sentiment_rhs(double s, double H, const ModelParams& p) {
    return -p.w_s * s + p.w_s * std::tanh(p.beta1 * s + p.beta2 * H);
}

double sentiment_step(double s, double H, const ModelParams& p, int substeps, double dt_day) {
    if (substeps < 1) throw std::invalid_argument("substeps must be >= 1");
    const double dt = dt_day / substeps;
    for (int k = 0; k < substeps; ++k) {
        const double k1 = sentiment_rhs(s, H, p);
        const double k2 = sentiment_rhs(s + 0.5 * dt * k1, H, p);
        const double k3 = sentiment_rhs(s + 0.5 * dt * k2, H, p);
        const double k4 = sentiment_rhs(s + dt * k3, H, p);
        s += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return s;
}

Series integrate_sentiment(const Series& H, double s0, const ModelParams& params, int substeps) {
    if (substeps < 1) throw std::invalid_argument("substeps must be >= 1");
    if (H.empty()) throw std::invalid_argument("H series is empty");
    if (!(std::abs(s0) <= 1.0)) throw std::invalid_argument("s0 must lie in [-1, 1]");
    for (std::size_t i = 0; i < H.size(); ++i) {
        if (!std::isfinite(H[i])) throw std::invalid_argument("H has a non-finite sample at index " + std::to_string(i));
    }
    Series s;
    s.start_index = H.start_index;
    s.step = H.step;
    s.values.resize(H.size());
    s.values[0] = s0;
    for (std::size_t i = 0; i + 1 < H.size(); ++i) {
        const double next = sentiment_step(s.values[i], H[i], params, substeps, H.step);
        if (!(std::abs(next) <= 1.0 + kBoundSlack)) {
            throw std::runtime_error("sentiment left [-1, 1] at index " + std::to_string(i + 1));
        }
        s.values[i + 1] = next;
    }
    return s;
}

PotentialCurve potential_u0(const ModelParams& params, int grid_size) { return sample_potential(params, 0.0, grid_size); }

PotentialCurve potential_uc(const ModelParams& params, double c, int grid_size) {
    return sample_potential(params, c, grid_size);
}

std::vector<Root1D> equilibria_1d(double beta1, double c) {
    if (!(beta1 >= 0.0)) throw std::invalid_argument("beta1 must be non-negative");
    auto g = [&](double s) { return std::tanh(beta1 * s + c) - s; };
    std::vector<Root1D> out;
    for (double s : scan_roots(g, -1.0, 1.0, 10000, 1e-12)) {
        out.push_back({s, stable_root(beta1, c, s) ? Stability::Stable : Stability::Unstable});
    }
    return out;
}

}  // namespace newsmarket
