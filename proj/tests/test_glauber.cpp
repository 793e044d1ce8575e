#include "doctest.h"

#include "newsmarket/glauber.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

using namespace newsmarket;

namespace {

SpinSystemConfig small_system() {
    SpinSystemConfig c;
    c.N_s = 8;
    c.N_h = 4;
    c.J11 = 1.0;
    c.J12 = 0.5;
    c.J21 = 1.0;
    c.J22 = 0.3;
    c.theta = 1.0;
    c.w_s = 1.0;
    c.w_h = 0.7;
    c.b_s.constant = 0.1;
    c.b_h.constant = -0.05;
    return c;
}

SpinSystemConfig free_spins(long N, double J11 = 0.0) {
    SpinSystemConfig c;
    c.N_s = N;
    c.N_h = 1;
    c.J11 = J11;
    c.theta = 1.0;
    c.w_s = 1.0;
    c.w_h = 1.0;
    return c;
}

// Draws a macrostate from an enumerated distribution.
SpinMacroState draw(const std::vector<MacrostateProbability>& p0, RandomSource& rng) {
    double u = rng.uniform();
    for (const auto& m : p0) {
        if (u < m.probability) return m.state;
        u -= m.probability;
    }
    return p0.back().state;
}

}  // namespace

TEST_CASE("configuration checks") {
    SpinSystemConfig c = small_system();
    CHECK_NOTHROW(validate(c));
    c.J21 = 0.9;
    CHECK_THROWS_AS(validate(c), std::invalid_argument);
    c = small_system();
    c.theta = 0.0;
    CHECK_THROWS_AS(validate(c), std::invalid_argument);
    c = small_system();
    c.N_h = 0;
    CHECK_THROWS_AS(validate(c), std::invalid_argument);
}

TEST_CASE("rates vanish at the boundaries") {
    const SpinSystemConfig c = small_system();
    const auto top = transition_rates({c.N_s, c.N_h}, c);
    CHECK(top[0] == 0.0);
    CHECK(top[2] == 0.0);
    CHECK(top[1] > 0.0);
    const auto bottom = transition_rates({-c.N_s, -c.N_h}, c);
    CHECK(bottom[1] == 0.0);
    CHECK(bottom[3] == 0.0);
}

TEST_CASE("high temperature rates approach half the multiplicity rate") {
    SpinSystemConfig c = small_system();
    c.theta = 1e12;
    const SpinMacroState st{2, 0};
    const auto r = transition_rates(st, c);
    CHECK(r[0] == doctest::Approx(0.5 * (c.N_s - 2) * c.w_s * 0.5).epsilon(1e-9));
    CHECK(r[1] == doctest::Approx(0.5 * (c.N_s + 2) * c.w_s * 0.5).epsilon(1e-9));
    CHECK(r[2] == doctest::Approx(0.5 * c.N_h * c.w_h * 0.5).epsilon(1e-9));
}

TEST_CASE("rates satisfy detailed balance with the equilibrium weights") {
    RandomSource rng(12);
    for (int trial = 0; trial < 20; ++trial) {
        SpinSystemConfig c = small_system();
        c.J11 = 2.0 * rng.uniform();
        c.J22 = 2.0 * rng.uniform() - 1.0;
        c.J12 = 1.5 * rng.uniform();
        c.J21 = c.J12 * static_cast<double>(c.N_s) / static_cast<double>(c.N_h);
        c.theta = 0.3 + rng.uniform();
        c.b_s.constant = rng.uniform() - 0.5;
        c.b_h.constant = rng.uniform() - 0.5;
        for (long S = -c.N_s; S <= c.N_s; S += 2) {
            for (long H = -c.N_h; H <= c.N_h; H += 2) {
                const auto r = transition_rates({S, H}, c);
                const double lw = log_equilibrium_weight({S, H}, c);
                if (S + 2 <= c.N_s) {
                    const double back = transition_rates({S + 2, H}, c)[1];
                    const double lhs = std::log(r[0]) + lw;
                    const double rhs = std::log(back) + log_equilibrium_weight({S + 2, H}, c);
                    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)));
                }
                if (H + 2 <= c.N_h) {
                    const double back = transition_rates({S, H + 2}, c)[3];
                    const double lhs = std::log(r[2]) + lw;
                    const double rhs = std::log(back) + log_equilibrium_weight({S, H + 2}, c);
                    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)));
                }
            }
        }
    }
}

TEST_CASE("equilibrium distribution is normalized over all macrostates") {
    const auto p0 = equilibrium_distribution(small_system());
    CHECK(p0.size() == 45);
    double total = 0.0;
    for (const auto& m : p0) total += m.probability;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("macrostate snapping keeps parity") {
    const SpinSystemConfig c = small_system();
    for (double s : {-1.0, -0.33, 0.0, 0.1, 0.77, 1.0}) {
        const auto st = macrostate_from(s, -s, c);
        CHECK((st.S + c.N_s) % 2 == 0);
        CHECK((st.H + c.N_h) % 2 == 0);
        CHECK(std::abs(static_cast<double>(st.S) / c.N_s - s) <= 1.0 / c.N_s + 1e-12);
    }
}

TEST_CASE("parity is conserved along trajectories") {
    const SpinSystemConfig c = small_system();
    RandomSource rng(3);
    const auto traj = simulate_glauber(c, {0, 0}, 200.0, rng, 0.25);
    CHECK(traj.samples.size() == 801);
    CHECK(traj.events > 100);
    for (const auto& s : traj.samples) {
        const long S = std::lround(s.s * c.N_s);
        const long H = std::lround(s.h * c.N_h);
        CHECK(S % 2 == 0);
        CHECK(H % 2 == 0);
    }
    CHECK_THROWS_AS(simulate_glauber(c, {1, 0}, 1.0, rng), std::invalid_argument);
}

TEST_CASE("independent spins relax to zero mean") {
    const SpinSystemConfig c = free_spins(1000);
    RandomSource rng(8);
    const auto traj = simulate_glauber(c, {c.N_s, 1}, 60.0, rng, 0.5);
    double m = 0.0;
    int n = 0;
    for (const auto& s : traj.samples) {
        if (s.t < 10.0) continue;
        m += s.s;
        ++n;
    }
    CHECK(std::abs(m / n) < 0.02);
}

TEST_CASE("equilibrium occupation is stationary") {
    const SpinSystemConfig c = small_system();
    const auto p0 = equilibrium_distribution(c);
    std::map<std::pair<long, long>, int> counts;
    const int n = 20000;
    RandomSource pick(99);
    for (int i = 0; i < n; ++i) {
        RandomSource rng(5, static_cast<std::uint64_t>(i));
        const auto traj = simulate_glauber(c, draw(p0, pick), 3.0, rng, 3.0);
        ++counts[{traj.final_state.S, traj.final_state.H}];
    }
    double chi2 = 0.0;
    int bins = 0;
    for (const auto& m : p0) {
        const double expected = m.probability * n;
        if (expected < 20.0) continue;
        const double obs = counts[{m.state.S, m.state.H}];
        chi2 += (obs - expected) * (obs - expected) / expected;
        ++bins;
    }
    // Loose bound: chi2 / dof near 1 under stationarity.
    CHECK(bins > 10);
    CHECK(chi2 / bins < 2.0);
}

TEST_CASE("stationary fluctuations scale like N^-1/2") {
    std::vector<double> scaled;
    for (long N : {100L, 1000L, 10000L}) {
        const SpinSystemConfig c = free_spins(N, 0.5);
        RandomSource rng(21, static_cast<std::uint64_t>(N));
        const auto traj = simulate_glauber(c, {N % 2 == 0 ? 0L : 1L, 1}, 400.0, rng, 0.5);
        double m = 0.0, m2 = 0.0;
        int n = 0;
        for (const auto& s : traj.samples) {
            if (s.t < 20.0) continue;
            m += s.s;
            m2 += s.s * s.s;
            ++n;
        }
        m /= n;
        const double sd = std::sqrt(m2 / n - m * m);
        scaled.push_back(sd * std::sqrt(static_cast<double>(N)));
    }
    // Mean-field susceptibility gives sd sqrt(N) = 1/sqrt(1 - J11/theta) = 1.414.
    for (double v : scaled) {
        CHECK(v > 1.414 / 1.5);
        CHECK(v < 1.414 * 1.5);
    }
    CHECK(scaled[0] / scaled[2] < 1.5);
    CHECK(scaled[2] / scaled[0] < 1.5);
}

TEST_CASE("mean-field tracking improves with system size") {
    auto config = [](long Ns) {
        SpinSystemConfig c;
        c.N_s = Ns;
        c.N_h = Ns / 10 > 0 ? Ns / 10 : 1;
        c.J11 = 1.1;
        c.J12 = 0.55;
        c.J21 = c.J12 * static_cast<double>(c.N_s) / static_cast<double>(c.N_h);
        c.theta = 1.0;
        c.w_s = 0.5;
        c.w_h = 2.0;
        c.b_h.amplitude = 0.3;
        c.b_h.period = 20.0;
        return c;
    };
    const auto small = meanfield_compare(config(10), 0.4, 0.0, 40.0, 20, 17, 0, 0.5);
    const auto large = meanfield_compare(config(10000), 0.4, 0.0, 40.0, 20, 17, 0, 0.5);
    CHECK(large.max_deviation < small.max_deviation);
    CHECK(large.max_deviation < 0.05);
    CHECK(small.ode.size() == 81);
    CHECK(large.rms_dev_s <= large.max_dev_s);
}

TEST_CASE("one-component kinetics follow the sentiment equation") {
    SpinSystemConfig c = free_spins(5000, 1.1);
    c.w_s = 0.2;
    c.b_s.amplitude = 0.2;
    c.b_s.period = 30.0;
    const auto rep = meanfield_compare(c, 0.3, 0.0, 60.0, 20, 4, 0, 1.0);
    CHECK(rep.max_dev_s < 0.03);
    // The ODE is the one-component sentiment equation with beta1 = J11/theta
    // and beta2 H = mu_s b_s / theta.
    const auto ode = meanfield_trajectory(c, 0.3, 0.0, 60.0, 1.0, 200);
    for (std::size_t k = 0; k < ode.size(); k += 10) {
        CHECK(rep.ode[k].s == doctest::Approx(ode[k].s).epsilon(1e-8));
    }
}

TEST_CASE("ensemble comparison is independent of the worker count") {
    SpinSystemConfig c = small_system();
    c.N_s = 200;
    c.N_h = 100;
    c.J21 = c.J12 * 2.0;
    const auto a = meanfield_compare(c, 0.2, 0.1, 20.0, 8, 3, 1);
    const auto b = meanfield_compare(c, 0.2, 0.1, 20.0, 8, 3, 4);
    CHECK(a.max_deviation == b.max_deviation);
    CHECK(a.events == b.events);
    CHECK(to_key_values(a) == to_key_values(b));
}
