#pragma once

#include <cstddef>
#include <vector>

namespace newsmarket {

// Uniformly sampled series on the business-day axis.
struct Series {
    long start_index = 0;
    double step = 1.0;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    bool empty() const { return values.empty(); }
    double operator[](std::size_t i) const { return values[i]; }
    double& operator[](std::size_t i) { return values[i]; }
    double time(std::size_t i) const { return static_cast<double>(start_index) + static_cast<double>(i) * step; }
};

Series make_series(std::vector<double> values, long start_index = 0, double step = 1.0);

// Throws std::invalid_argument on empty, non-positive step or non-finite samples.
void check_series(const Series& s, const char* what = "series");

// Sub-range [begin, begin + count), keeping the time axis consistent.
Series slice(const Series& s, std::size_t begin, std::size_t count);

}  // namespace newsmarket
