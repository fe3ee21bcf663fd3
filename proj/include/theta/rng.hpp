#pragma once

// Counter-based splittable RNG. Every experiment records its seed; parallel
// samples derive disjoint streams from (seed, sample_id) so results do not
// depend on scheduling.

#include <cstdint>

namespace theta {

class SplitRng {
public:
    explicit SplitRng(std::uint64_t seed) : state_(seed) {}

    static SplitRng for_sample(std::uint64_t seed, std::uint64_t sample_id) {
        SplitRng base(seed ^ (0x9e3779b97f4a7c15ULL * (sample_id + 1)));
        base.next();
        return base;
    }

    std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // [0, 1)
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // (-1/2, 1/2]
    double uniform_half_box() { return 0.5 - uniform(); }

    std::uint64_t below(std::uint64_t bound) { return next() % bound; }

private:
    std::uint64_t state_;
};

} // namespace theta
