#include "newsmarket/roots.hpp"

#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <stdexcept>

namespace newsmarket {

double bisect_root(const std::function<double(double)>& f, double lo, double hi, double tol) {
    const double flo = f(lo);
    const double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo < 0.0) == (fhi < 0.0)) throw std::invalid_argument("bisect_root: bracket has no sign change");
    auto done = [tol](double a, double b) { return std::abs(b - a) <= tol; };
    const auto r = boost::math::tools::bisect(f, lo, hi, done);
    return 0.5 * (r.first + r.second);
}

std::vector<double> scan_roots(const std::function<double(double)>& f, double lo, double hi, int n, double tol) {
    if (n < 1) throw std::invalid_argument("scan_roots: need at least one interval");
    std::vector<double> roots;
    // Symmetric node placement keeps odd problems exactly odd on symmetric ranges.
    auto node = [&](int i) {
        const double mid = 0.5 * (lo + hi);
        const double half = 0.5 * (hi - lo);
        return mid + half * static_cast<double>(2 * i - n) / static_cast<double>(n);
    };
    double x_prev = node(0);
    double f_prev = f(x_prev);
    if (f_prev == 0.0) roots.push_back(x_prev);
    for (int i = 1; i <= n; ++i) {
        const double x = node(i);
        const double fx = f(x);
        if (fx == 0.0) {
            roots.push_back(x);
        } else if (f_prev != 0.0 && ((f_prev < 0.0) != (fx < 0.0))) {
            roots.push_back(bisect_root(f, x_prev, x, tol));
        }
        x_prev = x;
        f_prev = fx;
    }
    return roots;
}

}  // namespace newsmarket
