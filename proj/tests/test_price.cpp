#include "doctest.h"

#include "newsmarket/price.hpp"
#include "newsmarket/random.hpp"
#include "newsmarket/reference_level.hpp"
#include "newsmarket/sentiment.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace newsmarket;

namespace {

// Smooth news: a few incommensurate tones.
Series smooth_news(std::size_t n, double scale = 1.0) {
    Series H = make_series(std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i);
        H.values[i] = scale * (0.35 * std::sin(2 * M_PI * t / 190.0) + 0.2 * std::sin(2 * M_PI * t / 67.0 + 1.0) +
                               0.1 * std::cos(2 * M_PI * t / 23.0));
    }
    return H;
}

double variance(const Series& x) {
    double m = 0.0;
    for (double v : x.values) m += v;
    m /= static_cast<double>(x.size());
    double ss = 0.0;
    for (double v : x.values) ss += (v - m) * (v - m);
    return ss / static_cast<double>(x.size());
}

}  // namespace

TEST_CASE("price at the reference level stays put") {
    ModelParams p;
    const Series s = make_series(std::vector<double>(50, p.s_star));
    ModelParams q = p;
    q.a1 = 1e-300;  // a1 -> 0 without failing validation
    const Series price = price_from_sentiment(s, q);
    for (double v : price.values) CHECK(v == doctest::Approx(p.a4).epsilon(1e-12));
}

TEST_CASE("constant offset gives a linear ramp") {
    ModelParams p;
    const Series s = make_series(std::vector<double>(40, p.s_star + 1.0 / p.a2 * 1e-3));
    const Series price = price_from_sentiment(s, p);
    for (std::size_t i = 1; i < price.size(); ++i) CHECK(price[i] - price[i - 1] == doctest::Approx(1e-3).epsilon(1e-9));
    CHECK(price[0] == doctest::Approx(p.a1 * s[0] + p.a4));
}

TEST_CASE("fast and slow parts add up bitwise") {
    ModelParams p;
    const Series s = integrate_sentiment(smooth_news(700), 0.1, p);
    const auto parts = decompose_price(s, p);
    const Series full = price_from_sentiment(s, p);
    for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(parts.fast[i] == p.a1 * s[i]);
        CHECK(parts.fast[i] + parts.slow[i] == full[i]);
    }
    ModelParams z = p;
    z.s_star = 0.0;
    const auto zero = decompose_price(make_series(std::vector<double>(10, 0.0)), z);
    for (std::size_t i = 0; i < 10; ++i) {
        CHECK(zero.fast[i] == 0.0);
        CHECK(zero.slow[i] == z.a4);
    }
}

TEST_CASE("fast/slow variance ratio follows the sinusoid integral") {
    ModelParams p;
    p.s_star = 0.0;
    for (double period : {10.0, 500.0, 2000.0}) {
        const std::size_t n = static_cast<std::size_t>(period * 20) + 1;
        const double w = 2 * M_PI / period;
        Series s = make_series(std::vector<double>(n, 0.0));
        for (std::size_t i = 0; i < n; ++i) s.values[i] = 0.3 * std::sin(w * static_cast<double>(i));
        const auto parts = decompose_price(s, p);
        const double ratio = std::sqrt(variance(parts.slow) / variance(parts.fast));
        const double analytic = p.a2 / (p.a1 * w);
        CHECK(ratio == doctest::Approx(analytic).epsilon(0.05));
        // The crossover sits at period 2 pi a1 / a2 = 1175 days.
        CHECK((ratio > 1.0) == (period > 2 * M_PI * p.a1 / p.a2));
    }
}

TEST_CASE("noiseless calibration is exact") {
    const ModelParams p;
    const Series s = integrate_sentiment(smooth_news(1000), 0.2, p);
    const Series price = price_from_sentiment(s, p);
    const PriceFit fit = calibrate_price(s, price);
    CHECK(fit.a1 == doctest::Approx(p.a1).epsilon(1e-8));
    CHECK(fit.a2 == doctest::Approx(p.a2).epsilon(1e-8));
    CHECK(fit.a4 == doctest::Approx(p.a4).epsilon(1e-8));
    CHECK(fit.s_star == doctest::Approx(p.s_star).epsilon(1e-8));
    CHECK(fit.residual_rms < 1e-10);
    CHECK(fit.correlation == doctest::Approx(1.0));
}

TEST_CASE("adding a constant to the price only moves a4") {
    const ModelParams p;
    const Series s = integrate_sentiment(smooth_news(600), 0.2, p);
    Series price = price_from_sentiment(s, p);
    RandomSource r(5);
    for (double& v : price.values) v += 0.01 * r.normal();
    const PriceFit a = calibrate_price(s, price);
    for (double& v : price.values) v += 2.5;
    const PriceFit b = calibrate_price(s, price);
    CHECK(b.a1 == doctest::Approx(a.a1).epsilon(1e-9));
    CHECK(b.a2 == doctest::Approx(a.a2).epsilon(1e-9));
    CHECK(b.s_star == doctest::Approx(a.s_star).epsilon(1e-9));
    CHECK(b.a4 - a.a4 == doctest::Approx(2.5).epsilon(1e-9));
}

TEST_CASE("noisy calibration agrees with the OLS covariance") {
    const ModelParams p;
    const Series s = integrate_sentiment(smooth_news(1000), 0.2, p);
    const Series clean = price_from_sentiment(s, p);
    const int seeds = 100;
    int within = 0, total = 0;
    double sum_a1 = 0, sum_a1_sq = 0, sum_se_a1 = 0;
    for (int k = 0; k < seeds; ++k) {
        RandomSource r(1000 + static_cast<std::uint64_t>(k));
        Series noisy = clean;
        for (double& v : noisy.values) v += 0.01 * r.normal();
        const PriceFit f = calibrate_price(s, noisy);
        const double z[] = {(f.a1 - p.a1) / f.se_a1, (f.a2 - p.a2) / f.se_a2, (f.a4 - p.a4) / f.se_a4,
                            (f.s_star - p.s_star) / f.se_s_star};
        for (double v : z) {
            ++total;
            if (std::abs(v) < 3.0) ++within;
        }
        sum_a1 += f.a1;
        sum_a1_sq += f.a1 * f.a1;
        sum_se_a1 += f.se_a1;
    }
    CHECK(static_cast<double>(within) / total >= 0.97);
    const double mean = sum_a1 / seeds;
    const double sd = std::sqrt(sum_a1_sq / seeds - mean * mean);
    CHECK(sd == doctest::Approx(sum_se_a1 / seeds).epsilon(0.25));
}

TEST_CASE("calibration input errors") {
    const Series flat = make_series(std::vector<double>(100, 0.3));
    const Series price = make_series(std::vector<double>(100, 1.0));
    CHECK_THROWS_WITH_AS(calibrate_price(flat, price), "degenerate sentiment series", std::invalid_argument);
    const Series short_s = make_series(std::vector<double>(20, 0.3));
    CHECK_THROWS_AS(calibrate_price(short_s, make_series(std::vector<double>(20, 1.0))), std::invalid_argument);
    CHECK_THROWS_AS(calibrate_price(flat, make_series(std::vector<double>(99, 1.0))), std::invalid_argument);
}

TEST_CASE("windowed temperature fit recovers a constant coupling") {
    ModelParams p;
    p.beta1 = 1.12;
    p.s_star = solve_sbar(1.12, 0.3).value;
    const Series H = smooth_news(1000, 0.3);
    const Series s = integrate_sentiment(H, 0.0, p);
    const Series price = price_from_sentiment(s, p);
    const ThetaFit fit = iterative_theta_fit(H, price, p, 250, 0.3);
    REQUIRE(fit.windows.size() == 4);
    for (const auto& w : fit.windows) {
        CHECK(w.beta1 == doctest::Approx(1.12).epsilon(1e-9));
        CHECK(std::abs(1.0 / w.beta1 - 1.0 / 1.12) < 0.02);
    }
    for (std::size_t i = 0; i < price.size(); ++i) CHECK(fit.p_fit[i] == doctest::Approx(price[i]).epsilon(1e-8));
    CHECK(fit.theta.size() == H.size());
}

TEST_CASE("windowing merges a short tail") {
    ModelParams p;
    p.beta1 = 1.15;
    p.s_star = solve_sbar(1.15, 0.3).value;
    const Series H = smooth_news(640, 0.3);
    const Series price = price_from_sentiment(integrate_sentiment(H, 0.0, p), p);
    const ThetaFit fit = iterative_theta_fit(H, price, p, 250, 0.3);
    REQUIRE(fit.windows.size() == 2);
    CHECK(fit.windows[1].length == 390);
}

TEST_CASE("zero news makes every candidate degenerate") {
    const Series H = make_series(std::vector<double>(300, 0.0));
    const Series price = make_series(std::vector<double>(300, 1.0));
    CHECK_THROWS_AS(iterative_theta_fit(H, price, ModelParams{}, 250, 0.3), std::runtime_error);
    CHECK_THROWS_AS(iterative_theta_fit(H, price, ModelParams{}, 30, 0.3), std::invalid_argument);
}

TEST_CASE("price keeps rising through sentiment peaks above the reference level") {
    ModelParams p;
    for (double scale : {0.2, 0.5, 1.0}) {
        const Series s = integrate_sentiment(smooth_news(3000, scale), 0.0, p);
        const Series price = price_from_sentiment(s, p);
        const auto rep = turning_point_check(s, price, p.s_star);
        CHECK(rep.checked > 0);
        CHECK(rep.violations.empty());
    }
}
