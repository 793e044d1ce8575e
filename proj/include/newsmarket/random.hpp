#pragma once

#include <cstdint>
#include <random>

namespace newsmarket {

// Deterministic random stream keyed by (seed, stream_id).
//
// The engine is std::mt19937_64 seeded through std::seed_seq with the four
// 32-bit halves of seed and stream_id. Variates use fixed algorithms rather
// than the standard-library distributions, whose output is implementation
// defined:
//   uniform      top 53 bits of one engine word, scaled to [0, 1)
//   normal       Marsaglia polar method, second variate cached
//   exponential  -log(1 - u) / rate
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed, std::uint64_t stream_id = 0);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    // Independent stream with the same seed and a different stream id.
    RandomSource substream(std::uint64_t stream_id) const { return RandomSource(seed_, stream_id); }

    std::uint64_t next_u64() { return engine_(); }
    double uniform();
    double normal();
    double exponential(double rate);

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace newsmarket
