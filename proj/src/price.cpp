#include "newsmarket/price.hpp"

#include "newsmarket/io.hpp"
#include "newsmarket/reference_level.hpp"
#include "newsmarket/sentiment.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace newsmarket {

namespace {

// Running trapezoidal integral of (s - offset), starting at zero.
std::vector<double> trapezoid(const Series& s, double offset) {
    std::vector<double> out(s.size(), 0.0);
    for (std::size_t i = 1; i < s.size(); ++i) {
        out[i] = out[i - 1] + s.step * (0.5 * (s[i - 1] + s[i]) - offset);
    }
    return out;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

struct OlsResult {
    Eigen::VectorXd beta;
    Eigen::MatrixXd cov;
    Eigen::VectorXd fitted;
    double rss = 0.0;
};

// Columns are rescaled to unit norm before the rank-revealing QR so the rank
// decision does not depend on the units of each regressor.
OlsResult ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    const Eigen::Index k = X.cols();
    Eigen::VectorXd scale(k);
    for (Eigen::Index j = 0; j < k; ++j) {
        const double nrm = X.col(j).norm();
        scale(j) = nrm > 0.0 ? nrm : 1.0;
    }
    const Eigen::MatrixXd Xn = X * scale.cwiseInverse().asDiagonal();
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Xn);
    qr.setThreshold(1e-9);
    if (qr.rank() < k) throw std::invalid_argument("degenerate sentiment series");
    OlsResult r;
    const Eigen::VectorXd bn = qr.solve(y);
    r.beta = bn.cwiseQuotient(scale);
    r.fitted = X * r.beta;
    r.rss = (y - r.fitted).squaredNorm();
    const double dof = static_cast<double>(X.rows() - k);
    const double sigma2 = dof > 0 ? r.rss / dof : 0.0;
    const Eigen::MatrixXd inv = (Xn.transpose() * Xn).ldlt().solve(Eigen::MatrixXd::Identity(k, k));
    r.cov = sigma2 * scale.cwiseInverse().asDiagonal() * inv * scale.cwiseInverse().asDiagonal();
    return r;
}

void check_pair(const Series& s, const Series& p_obs) {
    check_series(s, "sentiment");
    check_series(p_obs, "observed price");
    if (s.size() != p_obs.size()) throw std::invalid_argument("sentiment and price lengths differ");
    if (s.size() < 30) throw std::invalid_argument("calibration needs at least 30 samples");
}

void finish_fit(PriceFit& fit, const OlsResult& r, const Eigen::VectorXd& y) {
    fit.n = static_cast<std::size_t>(y.size());
    fit.residual_rms = std::sqrt(r.rss / static_cast<double>(y.size()));
    std::vector<double> a(r.fitted.data(), r.fitted.data() + r.fitted.size());
    std::vector<double> b(y.data(), y.data() + y.size());
    fit.correlation = pearson(a, b);
    if (!(fit.a1 > 0.0) || !(fit.a2 > 0.0)) {
        throw std::runtime_error("price fit violates a1 > 0, a2 > 0 (a1=" + format_double(fit.a1) +
                                 ", a2=" + format_double(fit.a2) + ")");
    }
}

}  // namespace

Series price_from_sentiment(const Series& s, const ModelParams& params) {
    const auto parts = decompose_price(s, params);
    Series p = parts.fast;
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = parts.fast[i] + parts.slow[i];
    return p;
}

PriceComponents decompose_price(const Series& s, const ModelParams& params) {
    check_series(s, "sentiment");
    PriceComponents out;
    out.fast = s;
    out.slow = s;
    const auto integral = trapezoid(s, params.s_star);
    for (std::size_t i = 0; i < s.size(); ++i) {
        out.fast[i] = params.a1 * s[i];
        out.slow[i] = params.a4 + params.a2 * integral[i];
    }
    return out;
}

PriceFit calibrate_price(const Series& s, const Series& p_obs) {
    check_pair(s, p_obs);
    const auto n = static_cast<Eigen::Index>(s.size());
    const auto integral = trapezoid(s, 0.0);
    Eigen::MatrixXd X(n, 4);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        X(i, 0) = s[k];
        X(i, 1) = integral[k];
        X(i, 2) = static_cast<double>(i) * s.step;
        X(i, 3) = 1.0;
        y(i) = p_obs[k];
    }
    const OlsResult r = ols(X, y);
    PriceFit fit;
    fit.a1 = r.beta(0);
    fit.a2 = r.beta(1);
    fit.a4 = r.beta(3);
    fit.s_star = -r.beta(2) / r.beta(1);
    fit.se_a1 = std::sqrt(std::max(0.0, r.cov(0, 0)));
    fit.se_a2 = std::sqrt(std::max(0.0, r.cov(1, 1)));
    fit.se_a4 = std::sqrt(std::max(0.0, r.cov(3, 3)));
    // s* = -c/a2: gradient (c/a2^2, -1/a2) in (a2, c).
    const double ga2 = r.beta(2) / (r.beta(1) * r.beta(1));
    const double gc = -1.0 / r.beta(1);
    const double var_s = ga2 * ga2 * r.cov(1, 1) + 2.0 * ga2 * gc * r.cov(1, 2) + gc * gc * r.cov(2, 2);
    fit.se_s_star = std::sqrt(std::max(0.0, var_s));
    finish_fit(fit, r, y);
    return fit;
}

PriceFit calibrate_price_fixed_sstar(const Series& s, const Series& p_obs, double s_star) {
    check_pair(s, p_obs);
    const auto n = static_cast<Eigen::Index>(s.size());
    const auto integral = trapezoid(s, s_star);
    Eigen::MatrixXd X(n, 3);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        X(i, 0) = s[k];
        X(i, 1) = integral[k];
        X(i, 2) = 1.0;
        y(i) = p_obs[k];
    }
    const OlsResult r = ols(X, y);
    PriceFit fit;
    fit.a1 = r.beta(0);
    fit.a2 = r.beta(1);
    fit.a4 = r.beta(2);
    fit.s_star = s_star;
    fit.se_a1 = std::sqrt(std::max(0.0, r.cov(0, 0)));
    fit.se_a2 = std::sqrt(std::max(0.0, r.cov(1, 1)));
    fit.se_a4 = std::sqrt(std::max(0.0, r.cov(2, 2)));
    finish_fit(fit, r, y);
    return fit;
}

ThetaFit iterative_theta_fit(const Series& H, const Series& p_obs, const ModelParams& params, int window,
                             double sigma, double s0, int substeps) {
    if (window < 60) throw std::invalid_argument("theta fit window must be at least 60 days");
    if (!(sigma > 0.0 && sigma < 1.0)) throw std::invalid_argument("sigma must lie in (0, 1)");
    check_series(H, "H");
    check_series(p_obs, "observed price");
    if (H.size() != p_obs.size()) throw std::invalid_argument("H and price lengths differ");
    const std::size_t n = H.size();
    const auto w = static_cast<std::size_t>(window);

    std::vector<std::pair<std::size_t, std::size_t>> spans;
    for (std::size_t b = 0; b < n; b += w) spans.emplace_back(b, std::min(w, n - b));
    if (spans.size() > 1 && spans.back().second < w) {
        spans[spans.size() - 2].second += spans.back().second;
        spans.pop_back();
    }

    ThetaFit out;
    out.theta = make_series(std::vector<double>(n, 0.0), H.start_index, H.step);
    out.p_fit = out.theta;
    double s_start = s0;

    for (const auto& [begin, length] : spans) {
        const Series h_win = slice(H, begin, length);
        const Series p_win = slice(p_obs, begin, length);
        ThetaWindow best;
        best.residual_rms = std::numeric_limits<double>::infinity();
        Series best_s;
        std::string last_error;
        for (int k = 0; k <= 60; ++k) {
            const double beta1 = 1.0 + 0.005 * k;
            ModelParams trial = params;
            trial.beta1 = beta1;
            const double s_star = solve_sbar(beta1, sigma).value;
            const Series s_win = integrate_sentiment(h_win, s_start, trial, substeps);
            try {
                const PriceFit fit = calibrate_price_fixed_sstar(s_win, p_win, s_star);
                if (fit.residual_rms < best.residual_rms) {
                    best = {begin, length, beta1, s_star, fit.residual_rms, fit};
                    best_s = s_win;
                }
            } catch (const std::exception& e) {
                last_error = e.what();
            }
        }
        if (!std::isfinite(best.residual_rms)) {
            throw std::runtime_error("theta fit failed in window starting at index " + std::to_string(begin) + ": " +
                                     last_error);
        }
        ModelParams winner = params;
        winner.beta1 = best.beta1;
        winner.a1 = best.fit.a1;
        winner.a2 = best.fit.a2;
        winner.a4 = best.fit.a4;
        winner.s_star = best.s_star;
        const Series p_model = price_from_sentiment(best_s, winner);
        for (std::size_t i = 0; i < length; ++i) {
            out.theta[begin + i] = 1.0 / best.beta1;
            out.p_fit[begin + i] = p_model[i];
        }
        out.windows.push_back(best);
        // Carry the sentiment across the window boundary.
        s_start = sentiment_step(best_s.values.back(), h_win.values.back(), winner, substeps, H.step);
    }
    return out;
}

TurningPointReport turning_point_check(const Series& s, const Series& p, double s_star) {
    if (s.size() != p.size()) throw std::invalid_argument("turning_point_check: length mismatch");
    TurningPointReport rep;
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
        const double before = s[i] - s[i - 1];
        const double after = s[i + 1] - s[i];
        if (!(before * after < 0.0) || s[i] == s_star) continue;
        ++rep.checked;
        const double dp = 0.5 * (p[i + 1] - p[i - 1]);
        const bool ok = s[i] > s_star ? dp > 0.0 : dp < 0.0;
        if (!ok) rep.violations.push_back(i);
    }
    return rep;
}

std::string to_key_values(const PriceFit& f) {
    std::ostringstream out;
    out << "a1 = " << format_double(f.a1) << "\n"
        << "a2 = " << format_double(f.a2) << "\n"
        << "a4 = " << format_double(f.a4) << "\n"
        << "s_star = " << format_double(f.s_star) << "\n"
        << "se_a1 = " << format_double(f.se_a1) << "\n"
        << "se_a2 = " << format_double(f.se_a2) << "\n"
        << "se_a4 = " << format_double(f.se_a4) << "\n"
        << "se_s_star = " << format_double(f.se_s_star) << "\n"
        << "residual_rms = " << format_double(f.residual_rms) << "\n"
        << "correlation = " << format_double(f.correlation) << "\n"
        << "n = " << f.n << "\n";
    return out.str();
}

}  // namespace newsmarket
