#pragma once

#include "newsmarket/series.hpp"

#include <utility>
#include <vector>

namespace newsmarket {

// r_t = p_t - p_{t-horizon} for every t >= horizon (overlapping windows).
Series log_returns(const Series& p, int horizon_days);

// Every `stride`-th sample starting at `offset`; used to build
// non-overlapping return samples from log_returns.
Series every_nth(const Series& x, std::size_t stride, std::size_t offset = 0);

struct Moments {
    double mean = 0.0;
    double variance = 0.0;  // population (divide by n)
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
    std::size_t n = 0;
};

// Population moments. With `normalize` the sample is first shifted and
// scaled to zero mean, unit variance. Throws on fewer than 30 samples or
// zero variance.
Moments distribution_stats(const Series& x, bool normalize);

struct AcfPoint {
    int lag;
    double acf;
    double band;  // 1.96 / sqrt(n)
};
// Sample autocorrelation with the biased (1/n) normalization, lags 0..max_lag.
std::vector<AcfPoint> autocorrelation(const Series& x, int max_lag);

// Pearson correlation of x_t with y_{t+lag} over the overlapping range.
std::vector<std::pair<int, double>> cross_correlation(const Series& x, const Series& y, int lag_min, int lag_max);

enum class IncrementMode { NonOverlapping, Overlapping };

// Standard deviation (n - 1 normalization) of increment-day differences in
// the trailing window ending at each anchor. The first anchor is sample
// `window_days`; the output starts there (start_index shifted accordingly).
Series rolling_volatility(const Series& x, int increment_days, int window_days,
                          IncrementMode mode = IncrementMode::NonOverlapping);

// Removes every Fourier component whose period N*step/k is shorter than
// `min_period_days`. The series is treated as periodic, so both ends carry
// wrap-around artefacts.
Series fourier_lowpass(const Series& x, double min_period_days);

struct MssaResult {
    Series x_rec;
    Series y_rec;
    std::vector<double> eigenvalues;  // descending
    double explained = 0.0;           // share of lag-covariance trace in the kept components
};

// Multichannel singular spectrum analysis of two standardized series:
// stacked trajectory matrix, joint lag-covariance eigendecomposition,
// reconstruction from the leading components by diagonal averaging, then
// back to the original scale.
MssaResult mssa_leading(const Series& x, const Series& y, int window = 250, int n_components = 2);

struct Histogram {
    std::vector<double> edges;    // bins + 1
    std::vector<double> density;  // integrates to 1
    std::vector<std::size_t> counts;
};
// Equal-width bins over [lo, hi]; lo == hi means the sample range.
// With `normalize` the sample is z-scored first.
Histogram histogram(const Series& x, int bins, bool normalize, double lo = 0.0, double hi = 0.0);

}  // namespace newsmarket
