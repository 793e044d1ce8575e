#include "newsmarket/series.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace newsmarket {

Series make_series(std::vector<double> values, long start_index, double step) {
    Series s;
    s.start_index = start_index;
    s.step = step;
    s.values = std::move(values);
    return s;
}

void check_series(const Series& s, const char* what) {
    if (s.values.empty()) throw std::invalid_argument(std::string(what) + " is empty");
    if (!(s.step > 0.0) || !std::isfinite(s.step)) throw std::invalid_argument(std::string(what) + " has a non-positive step");
    for (std::size_t i = 0; i < s.values.size(); ++i) {
        if (!std::isfinite(s.values[i])) {
            throw std::invalid_argument(std::string(what) + " has a non-finite sample at index " + std::to_string(i));
        }
    }
}

Series slice(const Series& s, std::size_t begin, std::size_t count) {
    if (begin + count > s.values.size()) throw std::out_of_range("slice exceeds series length");
    if (std::floor(s.step) != s.step) throw std::invalid_argument("slice requires an integral step");
    Series out;
    out.step = s.step;
    out.start_index = s.start_index + static_cast<long>(begin) * static_cast<long>(s.step);
    out.values.assign(s.values.begin() + static_cast<long>(begin), s.values.begin() + static_cast<long>(begin + count));
    return out;
}

}  // namespace newsmarket
