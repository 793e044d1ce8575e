#include "newsmarket/glauber.hpp"

#include "newsmarket/io.hpp"
#include "newsmarket/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace newsmarket {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// 1 / (1 + exp(x)) without overflow.
double logistic_down(double x) {
    if (x > 0.0) {
        const double e = std::exp(-x);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(x));
}

double log_binomial(long n, long k) {
    return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
           std::lgamma(static_cast<double>(n - k) + 1.0);
}

}  // namespace

double FieldProfile::operator()(double t) const {
    if (!daily.empty()) {
        const auto idx = static_cast<std::size_t>(std::clamp(std::floor(t), 0.0, static_cast<double>(daily.size() - 1)));
        return daily[idx];
    }
    if (amplitude == 0.0) return constant;
    return constant + amplitude * std::sin(kTwoPi * t / period + phase);
}

void validate(const SpinSystemConfig& c) {
    if (c.N_s < 1 || c.N_h < 1) throw std::invalid_argument("spin counts must be >= 1");
    if (!(c.theta > 0.0)) throw std::invalid_argument("theta must be positive");
    if (!(c.w_s > 0.0) || !(c.w_h > 0.0)) throw std::invalid_argument("flip rates must be positive");
    if (c.b_s.amplitude != 0.0 && !(c.b_s.period > 0.0)) throw std::invalid_argument("b_s period must be positive");
    if (c.b_h.amplitude != 0.0 && !(c.b_h.period > 0.0)) throw std::invalid_argument("b_h period must be positive");
    // J21/J12 = N_s/N_h, written without division so J12 = J21 = 0 passes.
    const double lhs = c.J21 * static_cast<double>(c.N_h);
    const double rhs = c.J12 * static_cast<double>(c.N_s);
    if (std::abs(lhs - rhs) > 1e-12 * std::max(std::abs(lhs), std::abs(rhs))) {
        throw std::invalid_argument("inconsistent cross couplings: need J21/J12 = N_s/N_h");
    }
}

std::array<double, 4> transition_rates(const SpinMacroState& st, const SpinSystemConfig& c, double t) {
    const double beta = 1.0 / c.theta;
    const double Ns = static_cast<double>(c.N_s), Nh = static_cast<double>(c.N_h);
    const double J_s = c.J11 / Ns, J_h = c.J22 / Nh;
    const double J_sh_s = c.J12 / Nh;  // acting on investors
    const double J_sh_h = c.J21 / Ns;  // acting on analysts
    const double S = static_cast<double>(st.S), H = static_cast<double>(st.H);
    const double fs = J_sh_s * H + c.mu_s * c.b_s(t);
    const double fh = J_sh_h * S + c.mu_h * c.b_h(t);
    std::array<double, 4> r{};
    r[0] = 0.5 * (Ns - S) * c.w_s * logistic_down(-2.0 * beta * (J_s * (S + 1.0) + fs));
    r[1] = 0.5 * (Ns + S) * c.w_s * logistic_down(2.0 * beta * (J_s * (S - 1.0) + fs));
    r[2] = 0.5 * (Nh - H) * c.w_h * logistic_down(-2.0 * beta * (J_h * (H + 1.0) + fh));
    r[3] = 0.5 * (Nh + H) * c.w_h * logistic_down(2.0 * beta * (J_h * (H - 1.0) + fh));
    return r;
}

double log_equilibrium_weight(const SpinMacroState& st, const SpinSystemConfig& c, double t) {
    const double Ns = static_cast<double>(c.N_s), Nh = static_cast<double>(c.N_h);
    const double S = static_cast<double>(st.S), H = static_cast<double>(st.H);
    const double energy = -(0.5 * c.J11 / Ns * (S * S - Ns) + 0.5 * c.J22 / Nh * (H * H - Nh) + c.J12 / Nh * S * H +
                            c.mu_s * c.b_s(t) * S + c.mu_h * c.b_h(t) * H);
    return log_binomial(c.N_s, (c.N_s + st.S) / 2) + log_binomial(c.N_h, (c.N_h + st.H) / 2) - energy / c.theta;
}

std::vector<MacrostateProbability> equilibrium_distribution(const SpinSystemConfig& c) {
    validate(c);
    std::vector<MacrostateProbability> out;
    std::vector<double> logs;
    for (long S = -c.N_s; S <= c.N_s; S += 2) {
        for (long H = -c.N_h; H <= c.N_h; H += 2) {
            out.push_back({{S, H}, 0.0});
            logs.push_back(log_equilibrium_weight({S, H}, c, 0.0));
        }
    }
    const double peak = *std::max_element(logs.begin(), logs.end());
    double total = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i].probability = std::exp(logs[i] - peak);
        total += out[i].probability;
    }
    for (auto& m : out) m.probability /= total;
    return out;
}

SpinMacroState macrostate_from(double s, double h, const SpinSystemConfig& c) {
    auto snap = [](double m, long N) {
        const long up = std::clamp(std::lround(0.5 * (m + 1.0) * static_cast<double>(N)), 0L, N);
        return 2 * up - N;
    };
    return {snap(s, c.N_s), snap(h, c.N_h)};
}

GlauberTrajectory simulate_glauber(const SpinSystemConfig& c, const SpinMacroState& init, double horizon,
                                   RandomSource& rng, double sample_dt) {
    validate(c);
    if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
    if (!(sample_dt > 0.0)) throw std::invalid_argument("sample interval must be positive");
    if (std::abs(init.S) > c.N_s || std::abs(init.H) > c.N_h || (init.S + c.N_s) % 2 != 0 || (init.H + c.N_h) % 2 != 0) {
        throw std::invalid_argument("initial macrostate violates bounds or parity");
    }
    GlauberTrajectory traj;
    const auto n_samples = static_cast<std::size_t>(std::floor(horizon / sample_dt + 1e-9)) + 1;
    traj.samples.reserve(n_samples);
    SpinMacroState st = init;
    double t = 0.0;
    std::size_t next_sample = 0;
    const double Ns = static_cast<double>(c.N_s), Nh = static_cast<double>(c.N_h);
    auto record_until = [&](double t_event) {
        while (next_sample < n_samples && static_cast<double>(next_sample) * sample_dt <= t_event) {
            traj.samples.push_back({static_cast<double>(next_sample) * sample_dt, static_cast<double>(st.S) / Ns,
                                    static_cast<double>(st.H) / Nh});
            ++next_sample;
        }
    };
    for (;;) {
        const auto r = transition_rates(st, c, t);
        const double total = r[0] + r[1] + r[2] + r[3];
        const double t_next = total > 0.0 ? t + rng.exponential(total) : horizon + 1.0;
        record_until(std::min(t_next, horizon));
        if (t_next > horizon) break;
        t = t_next;
        double u = rng.uniform() * total;
        int k = 0;
        while (k < 3 && u >= r[static_cast<std::size_t>(k)]) {
            u -= r[static_cast<std::size_t>(k)];
            ++k;
        }
        // Guard against landing on a zero-rate channel through rounding.
        while (r[static_cast<std::size_t>(k)] == 0.0) k = (k + 3) % 4;
        switch (k) {
            case 0: st.S += 2; break;
            case 1: st.S -= 2; break;
            case 2: st.H += 2; break;
            default: st.H -= 2; break;
        }
        ++traj.events;
    }
    traj.final_state = st;
    return traj;
}

std::vector<MeanFieldSample> meanfield_trajectory(const SpinSystemConfig& c, double s0, double h0, double horizon,
                                                  double sample_dt, int substeps) {
    validate(c);
    auto f = [&](double t, double s, double h) {
        const double ds = c.w_s * (std::tanh((c.J11 * s + c.J12 * h + c.mu_s * c.b_s(t)) / c.theta) - s);
        const double dh = c.w_h * (std::tanh((c.J21 * s + c.J22 * h + c.mu_h * c.b_h(t)) / c.theta) - h);
        return std::pair{ds, dh};
    };
    const auto n = static_cast<std::size_t>(std::floor(horizon / sample_dt + 1e-9));
    std::vector<MeanFieldSample> out;
    out.reserve(n + 1);
    double s = s0, h = h0;
    out.push_back({0.0, s, h});
    const double dt = sample_dt / substeps;
    for (std::size_t k = 0; k < n; ++k) {
        for (int j = 0; j < substeps; ++j) {
            const double t = static_cast<double>(k) * sample_dt + j * dt;
            const auto [a1, b1] = f(t, s, h);
            const auto [a2, b2] = f(t + 0.5 * dt, s + 0.5 * dt * a1, h + 0.5 * dt * b1);
            const auto [a3, b3] = f(t + 0.5 * dt, s + 0.5 * dt * a2, h + 0.5 * dt * b2);
            const auto [a4, b4] = f(t + dt, s + dt * a3, h + dt * b3);
            s += dt / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
            h += dt / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4);
        }
        out.push_back({static_cast<double>(k + 1) * sample_dt, s, h});
    }
    return out;
}

MeanFieldReport meanfield_compare(const SpinSystemConfig& c, double s0, double h0, double horizon, int n_realizations,
                                  std::uint64_t seed, unsigned workers, double sample_dt) {
    validate(c);
    if (n_realizations < 1) throw std::invalid_argument("need at least one realization");
    const SpinMacroState init = macrostate_from(s0, h0, c);
    const double s_init = static_cast<double>(init.S) / static_cast<double>(c.N_s);
    const double h_init = static_cast<double>(init.H) / static_cast<double>(c.N_h);
    const auto n = static_cast<std::size_t>(n_realizations);
    std::vector<GlauberTrajectory> runs(n);
    parallel_for(n, worker_count(static_cast<int>(workers)), [&](std::size_t i) {
        RandomSource rng(seed, i);
        runs[i] = simulate_glauber(c, init, horizon, rng, sample_dt);
    });
    MeanFieldReport rep;
    rep.realizations = n_realizations;
    rep.ode = meanfield_trajectory(c, s_init, h_init, horizon, sample_dt);
    const std::size_t len = std::min(rep.ode.size(), runs[0].samples.size());
    rep.ensemble_mean.assign(len, {0.0, 0.0, 0.0});
    for (const auto& r : runs) {
        rep.events += r.events;
        for (std::size_t k = 0; k < len; ++k) {
            rep.ensemble_mean[k].s += r.samples[k].s;
            rep.ensemble_mean[k].h += r.samples[k].h;
        }
    }
    double ss = 0.0, sh = 0.0;
    for (std::size_t k = 0; k < len; ++k) {
        auto& m = rep.ensemble_mean[k];
        m.t = rep.ode[k].t;
        m.s /= static_cast<double>(n);
        m.h /= static_cast<double>(n);
        const double ds = std::abs(m.s - rep.ode[k].s);
        const double dh = std::abs(m.h - rep.ode[k].h);
        rep.max_dev_s = std::max(rep.max_dev_s, ds);
        rep.max_dev_h = std::max(rep.max_dev_h, dh);
        ss += ds * ds;
        sh += dh * dh;
    }
    rep.rms_dev_s = std::sqrt(ss / static_cast<double>(len));
    rep.rms_dev_h = std::sqrt(sh / static_cast<double>(len));
    rep.max_deviation = std::max(rep.max_dev_s, rep.max_dev_h);
    return rep;
}

std::string to_key_values(const MeanFieldReport& r) {
    std::ostringstream out;
    out << "realizations = " << r.realizations << "\n"
        << "events = " << r.events << "\n"
        << "max_dev_s = " << format_double(r.max_dev_s) << "\n"
        << "max_dev_h = " << format_double(r.max_dev_h) << "\n"
        << "rms_dev_s = " << format_double(r.rms_dev_s) << "\n"
        << "rms_dev_h = " << format_double(r.rms_dev_h) << "\n"
        << "max_deviation = " << format_double(r.max_deviation) << "\n";
    return out.str();
}

}  // namespace newsmarket
