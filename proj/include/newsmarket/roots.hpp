#pragma once

#include <functional>
#include <vector>

namespace newsmarket {

// Bisection on a sign-changing bracket until the bracket is below `tol`.
double bisect_root(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-14);

// All roots of f on [lo, hi]: sign changes over an (n+1)-point grid whose
// node i sits at lo + (hi - lo) * i / n, each refined by bisection. Grid
// nodes where f is exactly zero are reported as roots directly.
std::vector<double> scan_roots(const std::function<double(double)>& f, double lo, double hi, int n,
                               double tol = 1e-14);

}  // namespace newsmarket
