#include "newsmarket/reference_level.hpp"

#include "newsmarket/roots.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace newsmarket {

namespace {

constexpr double kBracketLo = 1e-6;
constexpr double kBeta1Lo = 1.0 + 1e-9;
constexpr double kBeta1Hi = 2.0;

double reference_level(double beta1, double sigma, ReferenceForm form) {
    return form == ReferenceForm::Exact ? solve_sbar(beta1, sigma).value : s_star_corrected(beta1, sigma);
}

}  // namespace

SbarSolution solve_sbar(double beta1, double sigma) {
    if (!(beta1 >= 0.0 && beta1 <= 2.0)) throw std::invalid_argument("solve_sbar: beta1 must lie in [0, 2]");
    if (!(sigma >= 0.0 && sigma < 1.0)) throw std::invalid_argument("solve_sbar: sigma must lie in [0, 1)");
    if (beta1 <= 1.0) return {0.0, true};
    auto g = [&](double s) {
        const double t = std::tanh(beta1 * s);
        return t * (1.0 + sigma * sigma * (t * t - 1.0)) - s;
    };
    if (!(g(kBracketLo) > 0.0 && g(1.0) < 0.0)) return {0.0, true};
    return {bisect_root(g, kBracketLo, 1.0), false};
}

double s_star_leading(double beta1) {
    if (beta1 <= 1.0) return 0.0;
    auto g = [&](double s) { return std::tanh(beta1 * s) - s; };
    // g > 0 just right of the origin when beta1 > 1; start where that holds
    // numerically so the bracket never straddles the origin root.
    double lo = 1e-3;
    while (lo > 1e-12 && !(g(lo) > 0.0)) lo *= 0.1;
    if (!(g(lo) > 0.0)) return 0.0;
    return bisect_root(g, lo, 1.0);
}

double s_star_corrected(double beta1, double sigma) {
    if (beta1 <= 1.0) return 0.0;
    const double sp = s_star_leading(beta1);
    const double q = 1.0 - sp * sp;
    return sp * (1.0 + sigma * sigma * q / (beta1 * q - 1.0));
}

double beta1_from_sstar(double s_star, double sigma, ReferenceForm form) {
    if (!(s_star > 0.0 && s_star < 1.0)) throw std::domain_error("beta1_from_sstar: s_star must lie in (0, 1)");
    auto f = [&](double b) { return reference_level(b, sigma, form) - s_star; };
    const double f_lo = f(kBeta1Lo);
    const double f_hi = f(kBeta1Hi);
    if (!(f_lo < 0.0 && f_hi >= 0.0)) {
        throw std::domain_error("beta1_from_sstar: s* = " + std::to_string(s_star) +
                                " is not attained for beta1 in (1, 2] (range up to " +
                                std::to_string(f_hi + s_star) + ")");
    }
    return bisect_root(f, kBeta1Lo, kBeta1Hi, 1e-13);
}

}  // namespace newsmarket
