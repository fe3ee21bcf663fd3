#include "theta/kernels.hpp"

#include "doctest.h"
#include "helpers.hpp"

#include <complex>
#include <vector>

using namespace theta;
using namespace theta::testing;

namespace {

#if defined(__SIZEOF_FLOAT128__)
using wide_real = __float128;
#else
using wide_real = long double;
#endif

// reference with 113-bit phase accumulation; c2 k^2 is held exactly before
// the fractional part is taken
double reference_phase(const PhasePoly& p, long long k) {
    const double kd = static_cast<double>(k);
    wide_real ph = static_cast<wide_real>(p.c2) * (kd * kd) +
                   (static_cast<wide_real>(p.c1_hi) + static_cast<wide_real>(p.c1_lo)) * kd +
                   static_cast<wide_real>(p.c0);
    const long long ip = static_cast<long long>(ph);
    return static_cast<double>(ph - static_cast<wide_real>(ip));
}

std::complex<double> reference_sum(const PhasePoly& p, long long count, const std::vector<double>* w) {
    long double re = 0, im = 0;
    for (long long k = 0; k < count; ++k) {
        const long double a = 2.0L * 3.14159265358979323846264338327950288L * reference_phase(p, k);
        const long double wt = w ? static_cast<long double>((*w)[static_cast<size_t>(k)]) : 1.0L;
        re += wt * std::cos(a);
        im += wt * std::sin(a);
    }
    return {static_cast<double>(re), static_cast<double>(im)};
}

PhasePoly random_poly(Rng& rng) {
    PhasePoly p;
    p.c0 = uniform(rng, -0.5, 0.5);
    p.c1_hi = uniform(rng, -0.5, 0.5);
    p.c1_lo = uniform(rng, -1e-17, 1e-17);
    p.c2 = uniform(rng, -0.5, 0.5);
    return p;
}

} // namespace

TEST_CASE("phase evaluation stays exact at large index") {
    Rng rng(70);
    for (int trial = 0; trial < 200; ++trial) {
        const PhasePoly p = random_poly(rng);
        const long long k = uniform_int(rng, 0, 1 << 24);
        double d = std::abs(phase_eval(p, k) - reference_phase(p, k));
        d = std::min(d, 1.0 - d); // both sides are phases mod 1
        CHECK(d < 1e-14);
    }
}

TEST_CASE("all kernels agree with the reference") {
    Rng rng(71);
    std::vector<KernelKind> kinds = {KernelKind::naive, KernelKind::rotor};
    if (simd_available()) kinds.push_back(KernelKind::simd);
    for (int trial = 0; trial < 50; ++trial) {
        const PhasePoly p = random_poly(rng);
        const long long count = uniform_int(rng, 0, 20000);
        const auto ref = reference_sum(p, count, nullptr);
        const double scale = std::max(1.0, std::abs(ref));
        for (auto kind : kinds) {
            const auto got = row_kernel(kind).sum(p, count);
            CHECK(std::abs(got - ref) < 1e-10 * scale);
        }
    }
}

TEST_CASE("weighted kernels agree with the reference") {
    Rng rng(72);
    std::vector<KernelKind> kinds = {KernelKind::naive, KernelKind::rotor};
    if (simd_available()) kinds.push_back(KernelKind::simd);
    for (int trial = 0; trial < 30; ++trial) {
        const PhasePoly p = random_poly(rng);
        const long long count = uniform_int(rng, 1, 9000);
        std::vector<double> w(static_cast<size_t>(count));
        for (auto& v : w) v = uniform(rng, 0.0, 1.0);
        const auto ref = reference_sum(p, count, &w);
        const double scale = std::max(1.0, std::abs(ref));
        for (auto kind : kinds) {
            const auto got = row_kernel(kind).sum_weighted(p, w);
            CHECK(std::abs(got - ref) < 1e-10 * scale);
        }
    }
}

TEST_CASE("rotor drift stays within the resync cap") {
    Rng rng(73);
    for (int trial = 0; trial < 10; ++trial) {
        const PhasePoly p = random_poly(rng);
        // a full resync block, worst case for accumulated drift
        const long long count = kRotorResyncInterval;
        const auto naive = row_kernel(KernelKind::naive).sum(p, count);
        const auto rotor = row_kernel(KernelKind::rotor).sum(p, count);
        CHECK(std::abs(naive - rotor) < 1e-11 * std::max(1.0, std::abs(naive)));
    }
}

TEST_CASE("kernel names round trip") {
    for (auto k : {KernelKind::naive, KernelKind::rotor, KernelKind::simd, KernelKind::parallel})
        CHECK(kernel_from_name(kernel_name(k)) == k);
    CHECK_THROWS_AS(kernel_from_name("fft"), std::invalid_argument);
}
