#include "newsmarket/analytics.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace newsmarket {

namespace {

double mean_of(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m += x;
    return m / static_cast<double>(v.size());
}

double pearson_range(const std::vector<double>& a, const std::vector<double>& b) {
    const double ma = mean_of(a), mb = mean_of(b);
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    if (saa == 0.0 || sbb == 0.0) throw std::invalid_argument("cross_correlation: zero variance");
    return sab / std::sqrt(saa * sbb);
}

std::pair<double, double> mean_sd(const std::vector<double>& v) {
    const double m = mean_of(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return {m, std::sqrt(ss / static_cast<double>(v.size()))};
}

}  // namespace

Series log_returns(const Series& p, int horizon) {
    if (horizon < 1) throw std::invalid_argument("return horizon must be >= 1");
    const auto h = static_cast<std::size_t>(horizon);
    if (p.size() <= h) throw std::invalid_argument("series too short for the return horizon");
    Series r;
    r.step = p.step;
    r.start_index = p.start_index + static_cast<long>(h * static_cast<std::size_t>(p.step));
    r.values.reserve(p.size() - h);
    for (std::size_t t = h; t < p.size(); ++t) r.values.push_back(p[t] - p[t - h]);
    return r;
}

Series every_nth(const Series& x, std::size_t stride, std::size_t offset) {
    if (stride == 0) throw std::invalid_argument("stride must be positive");
    Series out;
    out.step = x.step * static_cast<double>(stride);
    out.start_index = x.start_index + static_cast<long>(offset * static_cast<std::size_t>(x.step));
    for (std::size_t i = offset; i < x.size(); i += stride) out.values.push_back(x[i]);
    return out;
}

Moments distribution_stats(const Series& x, bool normalize) {
    if (x.size() < 30) throw std::invalid_argument("distribution_stats needs at least 30 samples");
    std::vector<double> v = x.values;
    auto [m, sd] = mean_sd(v);
    if (!(sd > 0.0)) throw std::invalid_argument("zero variance: skewness and kurtosis undefined");
    if (normalize) {
        for (double& e : v) e = (e - m) / sd;
        std::tie(m, sd) = mean_sd(v);
    }
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double e : v) {
        const double d = e - m;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    const double n = static_cast<double>(v.size());
    m2 /= n;
    m3 /= n;
    m4 /= n;
    Moments out;
    out.n = v.size();
    out.mean = m;
    out.variance = m2;
    out.skewness = m3 / std::pow(m2, 1.5);
    out.excess_kurtosis = m4 / (m2 * m2) - 3.0;
    return out;
}

std::vector<AcfPoint> autocorrelation(const Series& x, int max_lag) {
    if (max_lag < 0) throw std::invalid_argument("max_lag must be non-negative");
    const std::size_t n = x.size();
    if (n < 2) throw std::invalid_argument("autocorrelation needs at least 2 samples");
    const double m = mean_of(x.values);
    double c0 = 0.0;
    for (double e : x.values) c0 += (e - m) * (e - m);
    if (c0 == 0.0) throw std::invalid_argument("autocorrelation of a constant series");
    const double band = 1.96 / std::sqrt(static_cast<double>(n));
    std::vector<AcfPoint> out;
    for (int k = 0; k <= max_lag && static_cast<std::size_t>(k) < n; ++k) {
        double ck = 0.0;
        for (std::size_t t = static_cast<std::size_t>(k); t < n; ++t) ck += (x[t] - m) * (x[t - static_cast<std::size_t>(k)] - m);
        out.push_back({k, k == 0 ? 1.0 : ck / c0, band});
    }
    return out;
}

std::vector<std::pair<int, double>> cross_correlation(const Series& x, const Series& y, int lag_min, int lag_max) {
    if (x.size() != y.size()) throw std::invalid_argument("cross_correlation: length mismatch");
    if (lag_min > lag_max) throw std::invalid_argument("cross_correlation: empty lag range");
    const long n = static_cast<long>(x.size());
    std::vector<std::pair<int, double>> out;
    for (int lag = lag_min; lag <= lag_max; ++lag) {
        const long t0 = std::max(0L, -static_cast<long>(lag));
        const long t1 = std::min(n, n - lag);
        if (t1 - t0 < 3) throw std::invalid_argument("cross_correlation: lag exceeds series length");
        std::vector<double> a, b;
        for (long t = t0; t < t1; ++t) {
            a.push_back(x[static_cast<std::size_t>(t)]);
            b.push_back(y[static_cast<std::size_t>(t + lag)]);
        }
        out.emplace_back(lag, pearson_range(a, b));
    }
    return out;
}

Series rolling_volatility(const Series& x, int increment, int window, IncrementMode mode) {
    if (increment < 1 || window <= increment) throw std::invalid_argument("rolling_volatility needs window > increment >= 1");
    const auto inc = static_cast<std::size_t>(increment);
    const auto win = static_cast<std::size_t>(window);
    Series out;
    out.step = x.step;
    out.start_index = x.start_index + static_cast<long>(win * static_cast<std::size_t>(x.step));
    for (std::size_t t = win; t < x.size(); ++t) {
        std::vector<double> d;
        if (mode == IncrementMode::NonOverlapping) {
            for (std::size_t e = t; e >= inc && e - inc >= t - win; e -= inc) d.push_back(x[e] - x[e - inc]);
        } else {
            for (std::size_t e = t - win + inc; e <= t; ++e) d.push_back(x[e] - x[e - inc]);
        }
        if (d.size() < 2) throw std::invalid_argument("rolling_volatility: window holds fewer than two increments");
        const double m = mean_of(d);
        double ss = 0.0;
        for (double v : d) ss += (v - m) * (v - m);
        out.values.push_back(std::sqrt(ss / static_cast<double>(d.size() - 1)));
    }
    return out;
}

Series fourier_lowpass(const Series& x, double min_period) {
    const std::size_t n = x.size();
    if (n < 2) throw std::invalid_argument("fourier_lowpass needs at least 2 samples");
    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> spec;
    fft.fwd(spec, x.values);
    for (std::size_t k = 1; k < n; ++k) {
        const std::size_t m = std::min(k, n - k);
        const double period = static_cast<double>(n) * x.step / static_cast<double>(m);
        if (period < min_period) spec[k] = 0.0;
    }
    std::vector<double> back;
    fft.inv(back, spec);
    Series out = x;
    out.values = std::move(back);
    return out;
}

MssaResult mssa_leading(const Series& x, const Series& y, int window, int n_components) {
    if (x.size() != y.size()) throw std::invalid_argument("mssa: length mismatch");
    const auto N = static_cast<Eigen::Index>(x.size());
    const auto L = static_cast<Eigen::Index>(window);
    if (L < 2 || 2 * L > N) throw std::invalid_argument("mssa: window must lie in [2, length/2]");
    if (n_components < 1 || n_components > 2 * L) throw std::invalid_argument("mssa: bad component count");
    const auto [mx, sx] = mean_sd(x.values);
    const auto [my, sy] = mean_sd(y.values);
    if (!(sx > 0.0) || !(sy > 0.0)) throw std::invalid_argument("mssa: constant input");
    const Eigen::Index K = N - L + 1;
    Eigen::MatrixXd Z(K, 2 * L);
    for (Eigen::Index i = 0; i < K; ++i) {
        for (Eigen::Index j = 0; j < L; ++j) {
            Z(i, j) = (x[static_cast<std::size_t>(i + j)] - mx) / sx;
            Z(i, L + j) = (y[static_cast<std::size_t>(i + j)] - my) / sy;
        }
    }
    const Eigen::MatrixXd C = (Z.transpose() * Z) / static_cast<double>(K);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C);
    if (es.info() != Eigen::Success) throw std::runtime_error("mssa: eigendecomposition failed");
    const Eigen::Index m = n_components;
    // Eigen sorts ascending; the leading components sit at the end.
    const Eigen::MatrixXd E = es.eigenvectors().rightCols(m).rowwise().reverse();
    const Eigen::MatrixXd R = (Z * E) * E.transpose();

    MssaResult out;
    const Eigen::VectorXd ev = es.eigenvalues().reverse();
    out.eigenvalues.assign(ev.data(), ev.data() + ev.size());
    out.explained = ev.head(m).sum() / ev.sum();
    auto diagonal_average = [&](Eigen::Index col0, double mean, double sd, const Series& like) {
        Series s = like;
        std::vector<double> acc(static_cast<std::size_t>(N), 0.0), cnt(static_cast<std::size_t>(N), 0.0);
        for (Eigen::Index i = 0; i < K; ++i) {
            for (Eigen::Index j = 0; j < L; ++j) {
                acc[static_cast<std::size_t>(i + j)] += R(i, col0 + j);
                cnt[static_cast<std::size_t>(i + j)] += 1.0;
            }
        }
        for (std::size_t t = 0; t < acc.size(); ++t) s.values[t] = mean + sd * acc[t] / cnt[t];
        return s;
    };
    out.x_rec = diagonal_average(0, mx, sx, x);
    out.y_rec = diagonal_average(L, my, sy, y);
    return out;
}

Histogram histogram(const Series& x, int bins, bool normalize, double lo, double hi) {
    if (bins < 1) throw std::invalid_argument("histogram needs at least one bin");
    if (x.empty()) throw std::invalid_argument("histogram of an empty series");
    std::vector<double> v = x.values;
    if (normalize) {
        const auto [m, sd] = mean_sd(v);
        if (!(sd > 0.0)) throw std::invalid_argument("histogram: zero variance");
        for (double& e : v) e = (e - m) / sd;
    }
    if (lo == hi) {
        lo = *std::min_element(v.begin(), v.end());
        hi = *std::max_element(v.begin(), v.end());
        if (lo == hi) {
            lo -= 0.5;
            hi += 0.5;
        }
    }
    if (!(hi > lo)) throw std::invalid_argument("histogram: empty range");
    Histogram h;
    const double width = (hi - lo) / bins;
    for (int b = 0; b <= bins; ++b) h.edges.push_back(lo + width * b);
    h.counts.assign(static_cast<std::size_t>(bins), 0);
    std::size_t inside = 0;
    for (double e : v) {
        if (e < lo || e > hi) continue;
        auto b = static_cast<std::size_t>((e - lo) / width);
        if (b >= h.counts.size()) b = h.counts.size() - 1;
        ++h.counts[b];
        ++inside;
    }
    h.density.resize(h.counts.size());
    for (std::size_t b = 0; b < h.counts.size(); ++b) {
        h.density[b] = inside ? static_cast<double>(h.counts[b]) / (static_cast<double>(inside) * width) : 0.0;
    }
    return h;
}

}  // namespace newsmarket
