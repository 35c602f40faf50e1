#pragma once

#include <cstdint>
#include <random>

#include "ftmm/hypercube.hpp"

namespace ftmm {

// Portable draws on top of std::mt19937_64, whose output sequence is fixed by
// the standard. The <random> distributions are not, so files generated from a
// seed would otherwise differ between standard libraries.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

    // Uniform in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
    // Uniform integer in [lo, hi].
    std::int64_t integer(std::int64_t lo, std::int64_t hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(engine_() % span);
    }
    Point point_in(const Hypercube& box) {
        Point x(box.dimension());
        for (std::size_t t = 0; t < x.size(); ++t) x[t] = uniform(box.lower()[t], box.upper()[t]);
        return x;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace ftmm
