#pragma once

#include <cstdint>
#include <random>

namespace volrelax {

/// Seeded generator with platform-independent output. The standard
/// distributions are implementation-defined, so the variates are derived
/// here directly from the mt19937_64 stream.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    /// Uniform integer on [0, bound) without modulo bias.
    std::uint64_t below(std::uint64_t bound);
    /// Standard normal (Marsaglia polar method).
    double normal();
    /// Fair coin: +1 or -1.
    double sign();

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace volrelax
