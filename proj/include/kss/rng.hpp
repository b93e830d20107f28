#pragma once

#include <cstdint>
#include <random>

namespace kss {

/// mt19937_64 with a platform-independent mapping to doubles (the standard
/// distributions are implementation-defined, which would break seeded
/// reproducibility across toolchains).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Uniform integer in [lo, hi].
    int integer(int lo, int hi) {
        return lo + static_cast<int>(uniform() * (hi - lo + 1));
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace kss
