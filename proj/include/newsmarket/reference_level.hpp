#pragma once

namespace newsmarket {

struct SbarSolution {
    double value = 0.0;
    // True when no positive root exists and 0 is returned.
    bool paramagnetic = false;
};

// Time-averaged sentiment of the noisy well: positive root of
//   s = tanh(beta1 s) (1 + sigma^2 (tanh^2(beta1 s) - 1)),
// bracketed on [1e-6, 1]. sigma is the spread of beta1 s + beta2 H.
SbarSolution solve_sbar(double beta1, double sigma);

// Positive root of s = tanh(beta1 s); 0 for beta1 <= 1.
double s_star_leading(double beta1);

// First-order noise correction of s_star_leading:
//   s+ (1 + sigma^2 (1 - s+^2) / (beta1 (1 - s+^2) - 1)), 0 for beta1 <= 1.
double s_star_corrected(double beta1, double sigma);

enum class ReferenceForm {
    Exact,         // solve_sbar
    Perturbative,  // s_star_corrected
};

// Inverts the chosen reference-level relation for beta1 on (1, 2] by
// bisection. Throws std::domain_error if s_star is not attained there.
double beta1_from_sstar(double s_star, double sigma, ReferenceForm form = ReferenceForm::Exact);

}  // namespace newsmarket
