#pragma once

#include <cstdint>
#include <random>

#include "sidelink/errors.hpp"

namespace sidelink {

// Deterministic random source. std::mt19937_64 is fully specified by
// the standard, so the raw stream is identical on every platform; the
// derived draws below are hand-rolled because std::uniform_*_distribution
// is implementation-defined and would break cross-platform
// reproducibility of seeded runs.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform double in [lo, hi). Uses the top 53 bits of one engine
    // draw, the usual way to fill a double mantissa.
    double uniform_real(double lo, double hi) {
        const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
        return lo + (hi - lo) * u;
    }

    // Uniform integer in [0, n). Rejection sampling keeps the draw
    // exactly uniform for every n.
    std::uint64_t uniform_index(std::uint64_t n) {
        if (n == 0) throw Error("uniform_index: n must be positive");
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v;
        do {
            v = engine_();
        } while (v >= limit);
        return v % n;
    }

    std::uint64_t raw() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

} // namespace sidelink
