#include "newsmarket/phase.hpp"

#include "newsmarket/parallel.hpp"
#include "newsmarket/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace newsmarket {

namespace {

constexpr double kEdge = 1e-9;
constexpr double kTwoPi = 6.283185307179586476925286766559;

double sech2(double x) {
    const double c = std::cosh(x);
    return 1.0 / (c * c);
}

struct PlaneState {
    double s;
    double h;
};

PlaneState rk4(const ModelParams& p, PlaneState y, double dt) {
    auto f = [&](double s, double h) { return drift({s, h, 0.0}, p, DriftMode::Simplified, 0.0); };
    const Drift k1 = f(y.s, y.h);
    const Drift k2 = f(y.s + 0.5 * dt * k1.ds, y.h + 0.5 * dt * k1.dh);
    const Drift k3 = f(y.s + 0.5 * dt * k2.ds, y.h + 0.5 * dt * k2.dh);
    const Drift k4 = f(y.s + dt * k3.ds, y.h + dt * k3.dh);
    return {y.s + dt / 6.0 * (k1.ds + 2.0 * k2.ds + 2.0 * k3.ds + k4.ds),
            y.h + dt / 6.0 * (k1.dh + 2.0 * k2.dh + 2.0 * k3.dh + k4.dh)};
}

// Walks the flow and reports downward crossings of h = h_star. The crossing
// instant inside a step is found by bisecting the length of a single RK4
// step from the step's start, which keeps the located point on the same
// discrete flow.
class SectionWalker {
public:
    SectionWalker(const ModelParams& p, PlaneState start, int substeps)
        : p_(p), y_(start), dt_(1.0 / substeps), h_star_(std::tanh(p.delta)), s_min_(start.s), s_max_(start.s) {}

    struct Crossing {
        bool found = false;
        double s = 0.0;
        double t = 0.0;
        double s_min = 0.0;  // range since the previous crossing
        double s_max = 0.0;
    };

    Crossing next(double t_limit) {
        Crossing c;
        while (t_ < t_limit) {
            const PlaneState y_new = rk4(p_, y_, dt_);
            if (!std::isfinite(y_new.s) || !std::isfinite(y_new.h)) throw IntegratorFailure("non-finite state in autonomous flow");
            if (y_.h > h_star_ && y_new.h <= h_star_) {
                double lo = 0.0, hi = dt_;
                for (int it = 0; it < 60 && hi - lo > 1e-13; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    (rk4(p_, y_, mid).h > h_star_ ? lo : hi) = mid;
                }
                const double tau = 0.5 * (lo + hi);
                const PlaneState yc = rk4(p_, y_, tau);
                s_min_ = std::min(s_min_, yc.s);
                s_max_ = std::max(s_max_, yc.s);
                c = {true, yc.s, t_ + tau, s_min_, s_max_};
                s_min_ = s_max_ = yc.s;
                advance(y_new);
                return c;
            }
            advance(y_new);
            const Drift d = drift({y_.s, y_.h, 0.0}, p_, DriftMode::Simplified, 0.0);
            if (std::abs(d.ds) < 1e-15 && std::abs(d.dh) < 1e-15) break;  // resting on an equilibrium
        }
        return c;
    }

    double time() const { return t_; }

private:
    void advance(const PlaneState& y) {
        y_ = y;
        t_ += dt_;
        s_min_ = std::min(s_min_, y_.s);
        s_max_ = std::max(s_max_, y_.s);
    }

    const ModelParams& p_;
    PlaneState y_;
    double dt_;
    double h_star_;
    double t_ = 0.0;
    double s_min_;
    double s_max_;
};

double return_gap(const ModelParams& p, double x, double max_days, int substeps) {
    const SectionReturn r = poincare_return(p, x, max_days, substeps);
    if (!r.returned) return std::numeric_limits<double>::quiet_NaN();
    return r.s - x;
}

LimitCycleReport report_from_section(const ModelParams& p, double x, double max_days, int substeps, bool stable,
                                     int iterations) {
    const SectionReturn r = poincare_return(p, x, max_days, substeps);
    LimitCycleReport rep;
    if (!r.returned) return rep;
    rep.exists = true;
    rep.stable = stable;
    rep.period_days = r.time_days;
    rep.s_min = r.s_min;
    rep.s_max = r.s_max;
    rep.section_s = x;
    rep.convergence_iterations = iterations;
    return rep;
}

double s_plus_of(const std::vector<EquilibriumPoint>& eqs) {
    for (const auto& e : eqs)
        if (e.branch == Branch::SPlus || e.branch == Branch::Paramagnetic) return e.s;
    return eqs.empty() ? 0.0 : eqs.back().s;
}

}  // namespace

const char* to_string(EquilibriumClass c) {
    switch (c) {
        case EquilibriumClass::StableNode: return "StableNode";
        case EquilibriumClass::StableFocus: return "StableFocus";
        case EquilibriumClass::UnstableFocus: return "UnstableFocus";
        case EquilibriumClass::UnstableNode: return "UnstableNode";
        case EquilibriumClass::Saddle: return "Saddle";
    }
    return "?";
}

const char* to_string(Branch b) {
    switch (b) {
        case Branch::SMinus: return "s_minus";
        case Branch::SZero: return "s_zero";
        case Branch::SPlus: return "s_plus";
        case Branch::Paramagnetic: return "paramagnetic";
    }
    return "?";
}

const char* to_string(SweepParameter p) {
    switch (p) {
        case SweepParameter::Gamma: return "gamma";
        case SweepParameter::Beta2: return "beta2";
        case SweepParameter::Delta: return "delta";
    }
    return "?";
}

double EquilibriumPoint::period_days(double w_s) const {
    const double im = std::abs(lambda_plus.imag());
    if (im == 0.0) return 0.0;
    return kTwoPi / (im * w_s);
}

std::vector<EquilibriumPoint> find_equilibria(const ModelParams& params) {
    const double h_star = std::tanh(params.delta);
    const double rhs = params.beta2 * h_star;
    auto f = [&](double s) { return std::atanh(s) - params.beta1 * s - rhs; };
    const auto roots = scan_roots(f, -1.0 + kEdge, 1.0 - kEdge, 10000);
    std::vector<EquilibriumPoint> out;
    for (std::size_t i = 0; i < roots.size(); ++i) {
        Branch b = Branch::Paramagnetic;
        if (roots.size() == 3) {
            b = i == 0 ? Branch::SMinus : (i == 1 ? Branch::SZero : Branch::SPlus);
        } else if (params.beta1 > 1.0) {
            // One surviving root (or a tangency pair): label by well.
            const double slope = 1.0 / (1.0 - roots[i] * roots[i]) - params.beta1;
            if (slope <= 0.0) b = Branch::SZero;
            else b = roots[i] > 0.0 || (roots[i] == 0.0 && rhs >= 0.0) ? Branch::SPlus : Branch::SMinus;
        }
        out.push_back(classify(roots[i], h_star, params, b));
    }
    return out;
}

double delta_critical(double beta1, double beta2) {
    if (!(beta1 > 1.0)) throw std::domain_error("delta_critical requires beta1 > 1");
    if (!(beta2 > 0.0)) throw std::domain_error("delta_critical requires beta2 > 0");
    const double q = std::sqrt((beta1 - 1.0) / beta1);
    const double arg = (0.5 * std::log((1.0 - q) / (1.0 + q)) + std::sqrt(beta1 * (beta1 - 1.0))) / beta2;
    if (!(std::abs(arg) < 1.0)) throw std::domain_error("delta_critical: artanh argument outside (-1, 1)");
    return std::atanh(arg);
}

double delta_critical_asymptotic(double beta1, double beta2) {
    return 2.0 / (3.0 * beta2 * std::pow(beta1, 1.5)) * std::pow(beta1 - 1.0, 1.5);
}

EquilibriumPoint classify(double s, double h, const ModelParams& p, Branch branch) {
    const double r1 = s - std::tanh(p.beta1 * s + p.beta2 * h);
    const double r2 = h - std::tanh(p.delta);
    if (!(std::abs(r1) <= 1e-8 && std::abs(r2) <= 1e-8)) {
        throw std::invalid_argument("classify: (" + std::to_string(s) + ", " + std::to_string(h) + ") is not an equilibrium");
    }
    const double eta = p.eta();
    const double q = 1.0 - s * s;
    EquilibriumPoint e;
    e.s = s;
    e.h = h;
    e.branch = branch;
    e.psi = 1.0 - p.beta1 * q;
    e.chi = p.w_h * p.gamma * sech2(p.delta);
    e.phi = p.beta2 * p.w_h * p.gamma * q * sech2(p.delta) - eta;
    const double trace = e.phi - e.psi;
    const double disc = trace * trace - 4.0 * e.psi * eta;
    const std::complex<double> root = std::sqrt(std::complex<double>(disc, 0.0));
    e.lambda_plus = 0.5 * (trace + root);
    e.lambda_minus = 0.5 * (trace - root);
    if (e.psi < 0.0) {
        e.cls = EquilibriumClass::Saddle;
    } else if (disc >= 0.0) {
        e.cls = trace < 0.0 ? EquilibriumClass::StableNode : EquilibriumClass::UnstableNode;
    } else {
        e.cls = trace < 0.0 ? EquilibriumClass::StableFocus : EquilibriumClass::UnstableFocus;
    }
    return e;
}

GammaThresholds gamma_thresholds(double s, const ModelParams& p) {
    const double q = 1.0 - s * s;
    if (!(p.beta1 * q < 1.0)) throw std::domain_error("saddle branch");
    const double x = (p.w_s / p.w_h) * (1.0 - p.beta1 * q);
    const double denom = p.w_s * p.beta2 * q * sech2(p.delta);
    const double rx = std::sqrt(x);
    return {(1.0 - rx) * (1.0 - rx) / denom, (1.0 + x) / denom, (1.0 + rx) * (1.0 + rx) / denom};
}

bool node_focus_first_at_splus(double s_plus, double s_minus, const ModelParams& p) {
    const double qp = 1.0 - s_plus * s_plus;
    const double qm = 1.0 - s_minus * s_minus;
    const double r = std::sqrt(qp / qm);
    const double a = std::sqrt(1.0 - p.beta1 * qp);
    const double b = std::sqrt((qp / qm) * (1.0 - p.beta1 * qm));
    const double target = std::sqrt(p.w_h / p.w_s);
    const double lower = (a + b) / (1.0 + r);
    const double upper = (a - b) / (1.0 - r);
    return lower < target && target < upper;
}

OscillatorTerms oscillator_reduction(double s, double /*s_dot*/, const ModelParams& p) {
    const double eta = p.eta();
    const double gb = p.gamma_bar();
    OscillatorTerms t;
    t.G = (1.0 - p.beta1 - p.beta2 * eta * gb + eta) + 2.0 * p.beta2 * eta * p.delta * s +
          (p.beta1 + p.beta2 * eta * gb + 2.0 * p.beta1 * eta - 2.0 * eta) * s * s;
    t.U = -eta * ((p.beta1 - 1.0) * s * s / 2.0 - (p.beta1 - 2.0 / 3.0) * s * s * s * s / 4.0 + p.beta2 * p.delta * s);
    t.dU_ds = -eta * ((p.beta1 - 1.0) * s - (p.beta1 - 2.0 / 3.0) * s * s * s + p.beta2 * p.delta);
    return t;
}

std::vector<OscillatorSample> integrate_oscillator(const ModelParams& p, double s0, double v0, double tau_end,
                                                   double dtau) {
    if (!(dtau > 0.0) || !(tau_end >= 0.0)) throw std::invalid_argument("integrate_oscillator: bad time grid");
    auto acc = [&](double s, double v) {
        const auto t = oscillator_reduction(s, v, p);
        return -t.G * v - t.dU_ds;
    };
    std::vector<OscillatorSample> out;
    const auto steps = static_cast<long>(std::llround(tau_end / dtau));
    out.reserve(static_cast<std::size_t>(steps) + 1);
    double s = s0, v = v0;
    out.push_back({0.0, s, v});
    for (long k = 0; k < steps; ++k) {
        const double k1s = v, k1v = acc(s, v);
        const double k2s = v + 0.5 * dtau * k1v, k2v = acc(s + 0.5 * dtau * k1s, v + 0.5 * dtau * k1v);
        const double k3s = v + 0.5 * dtau * k2v, k3v = acc(s + 0.5 * dtau * k2s, v + 0.5 * dtau * k2v);
        const double k4s = v + dtau * k3v, k4v = acc(s + dtau * k3s, v + dtau * k3v);
        s += dtau / 6.0 * (k1s + 2.0 * k2s + 2.0 * k3s + k4s);
        v += dtau / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        out.push_back({static_cast<double>(k + 1) * dtau, s, v});
    }
    return out;
}

std::vector<TrajectoryPoint> integrate_autonomous(const ModelParams& params, const MarketState& init, int days,
                                                  int substeps) {
    ModelParams p = params;
    p.kappa = 0.0;
    std::vector<TrajectoryPoint> out;
    out.reserve(static_cast<std::size_t>(days) + 1);
    MarketState st = init;
    out.push_back({0.0, st.s, st.h});
    for (int d = 0; d < days; ++d) {
        st = advance_day(st, p, DriftMode::Simplified, 0.0, substeps);
        out.push_back({static_cast<double>(d + 1), st.s, st.h});
    }
    return out;
}

SectionReturn poincare_return(const ModelParams& params, double x, double max_days, int substeps) {
    SectionWalker walker(params, {x, std::tanh(params.delta)}, substeps);
    const auto c = walker.next(max_days);
    SectionReturn r;
    if (!c.found) return r;
    r.returned = true;
    r.s = c.s;
    r.time_days = c.t;
    r.s_min = c.s_min;
    r.s_max = c.s_max;
    return r;
}

LimitCycleReport detect_limit_cycle(const ModelParams& params, const MarketState& init, double max_days,
                                    const LimitCycleOptions& opt) {
    const auto eqs = find_equilibria(params);
    SectionWalker walker(params, {init.s, init.h}, opt.substeps);
    LimitCycleReport none;
    double prev_s = std::numeric_limits<double>::quiet_NaN();
    double prev_t = 0.0;
    double rejected_at = std::numeric_limits<double>::quiet_NaN();
    int iterations = 0;
    for (;;) {
        const auto c = walker.next(max_days);
        if (!c.found) return none;
        ++iterations;
        none.convergence_iterations = iterations;
        if (std::isfinite(prev_s) && std::abs(c.s - prev_s) < opt.tolerance) {
            const bool near_equilibrium = std::any_of(eqs.begin(), eqs.end(), [&](const EquilibriumPoint& e) {
                return std::abs(c.s - e.s) < 1e-4;
            });
            // Spiralling into a focus: the crossings converge onto the equilibrium.
            if (near_equilibrium || c.s_max - c.s_min < 1e-3) return none;
            if (!(std::abs(c.s - rejected_at) < 1e-4)) {
                // Confirm with a sign change of P(x) - x around the candidate;
                // a slow passage near a vanished cycle has no such root.
                const double horizon = 4.0 * (c.t - prev_t) + 100.0;
                auto g = [&](double x) { return return_gap(params, x, horizon, opt.substeps); };
                const double g0 = g(c.s);
                for (double d = 1e-7; d < 0.2 && std::isfinite(g0); d *= 2.0) {
                    const double x_other = g0 > 0.0 ? c.s + d : c.s - d;
                    const double g1 = g(x_other);
                    if (!std::isfinite(g1)) break;
                    if ((g0 > 0.0) != (g1 > 0.0) || g1 == 0.0) {
                        const double x_fp = bisect_root(g, std::min(c.s, x_other), std::max(c.s, x_other), 1e-12);
                        auto rep = report_from_section(params, x_fp, horizon, opt.substeps, true, iterations);
                        if (rep.exists) return rep;
                        break;
                    }
                }
                rejected_at = c.s;
            }
        }
        prev_s = c.s;
        prev_t = c.t;
    }
}

LimitCycleReport locate_unstable_cycle(const ModelParams& params, double x_c, double max_days,
                                       const LimitCycleOptions& opt) {
    const double s_plus = s_plus_of(find_equilibria(params));
    LimitCycleReport none;
    if (!(x_c > s_plus)) return none;
    const double span = x_c - s_plus;
    std::vector<double> xs;
    for (int j = 1; j < 40; ++j) xs.push_back(s_plus + span * j / 40.0);
    for (int m = 6; m <= 30; ++m) xs.push_back(x_c - span * std::ldexp(1.0, -m));
    std::sort(xs.begin(), xs.end());
    auto g = [&](double x) { return return_gap(params, x, max_days, opt.substeps); };
    std::vector<double> gs(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) gs[i] = g(xs[i]);
    // Rightmost inward-to-outward sign change below the stable cycle.
    for (std::size_t i = xs.size() - 1; i > 0; --i) {
        if (std::isfinite(gs[i - 1]) && std::isfinite(gs[i]) && gs[i - 1] < 0.0 && gs[i] > 0.0) {
            const double x_u = bisect_root(g, xs[i - 1], xs[i], 1e-12);
            return report_from_section(params, x_u, max_days, opt.substeps, false, 0);
        }
    }
    return none;
}

CyclePair locate_cycle_pair(const ModelParams& params, double max_days, const LimitCycleOptions& opt) {
    CyclePair pair;
    const MarketState outside{0.95, std::tanh(params.delta), 0.0};
    pair.stable = detect_limit_cycle(params, outside, max_days, opt);
    if (pair.stable.exists) {
        pair.unstable = locate_unstable_cycle(params, pair.stable.section_s, 4.0 * pair.stable.period_days + 100.0, opt);
    }
    return pair;
}

double limit_cycle_birth(const ModelParams& params, double lo, double hi, double tol, double max_days,
                         const LimitCycleOptions& opt) {
    auto has_cycle = [&](double gb) {
        ModelParams p = params;
        p.gamma = gb / p.w_s;
        const MarketState outside{0.95, std::tanh(p.delta), 0.0};
        return detect_limit_cycle(p, outside, max_days, opt).exists;
    };
    if (has_cycle(lo)) throw std::domain_error("limit_cycle_birth: cycle already present at the lower bound");
    if (!has_cycle(hi)) throw std::domain_error("limit_cycle_birth: no cycle at the upper bound");
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        (has_cycle(mid) ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

SweepTable bifurcation_sweep(const ModelParams& params, SweepParameter parameter, double lo, double hi, int steps,
                             unsigned workers) {
    if (steps < 2) throw std::invalid_argument("sweep needs at least 2 steps");
    SweepTable table;
    table.parameter = parameter;
    table.rows.resize(static_cast<std::size_t>(steps));
    parallel_for(table.rows.size(), worker_count(static_cast<int>(workers)), [&](std::size_t i) {
        const double v = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1);
        ModelParams p = params;
        switch (parameter) {
            case SweepParameter::Gamma: p.gamma = v; break;
            case SweepParameter::Beta2: p.beta2 = v; break;
            case SweepParameter::Delta: p.delta = v; break;
        }
        table.rows[i] = {v, find_equilibria(p)};
    });
    auto by_branch = [](const SweepRow& r) {
        std::map<Branch, std::string> m;
        for (const auto& e : r.points) m[e.branch] = to_string(e.cls);
        return m;
    };
    for (std::size_t i = 1; i < table.rows.size(); ++i) {
        const auto a = by_branch(table.rows[i - 1]);
        const auto b = by_branch(table.rows[i]);
        for (Branch br : {Branch::SMinus, Branch::SZero, Branch::SPlus, Branch::Paramagnetic}) {
            const std::string from = a.count(br) ? a.at(br) : "absent";
            const std::string to = b.count(br) ? b.at(br) : "absent";
            if (from != to) table.boundaries.push_back({table.rows[i - 1].value, table.rows[i].value, br, from, to});
        }
    }
    return table;
}

}  // namespace newsmarket
