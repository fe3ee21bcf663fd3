#pragma once

// Row kernels for quadratic-phase lattice sums: sum_k w_k e(c0 + c1 k + c2 k^2)
// over one lattice axis. A scalar reference kernel, a rotor-recurrence kernel
// (two complex multiplications per step, resynchronized against direct trig
// evaluation), and SIMD variants selected at runtime. All variants are
// equivalence-tested.
//
// The resync interval caps the rotor drift below 1e-12: the step-rotor chain
// drifts linearly, so the value chain drifts like L^2 eps / 2 over a block of
// length L, which stays under 1e-12 for L = 64.
//
// Phases can reach 1e8 cycles, far beyond where a plain double evaluation
// keeps the fractional part. Coefficients are therefore carried mod 1 with a
// compensation limb, and every direct evaluation reduces products to the
// fractional part through fma splits before taking sin/cos.

#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <string>

namespace theta {

inline constexpr int kRotorResyncInterval = 64;

enum class KernelKind { naive, rotor, simd, parallel };

KernelKind kernel_from_name(const std::string& name);
std::string kernel_name(KernelKind k);

// phase(k) = c0 + (c1_hi + c1_lo) k + c2 k^2  (mod 1), with |c0| <= 1/2 and
// c1_hi reduced mod 1; c2 is a raw datum (|c2| bounded by the caller)
struct PhasePoly {
    double c0 = 0.0;
    double c1_hi = 0.0;
    double c1_lo = 0.0;
    double c2 = 0.0;
};

// x - nearest integer; exact for |x| < 2^52
inline double frac1(double x) { return x - std::nearbyint(x); }

// two-sum accumulator whose value is only ever needed mod 1
struct PhaseAcc {
    double s = 0.0, c = 0.0;

    void add(double x) {
        const double t = s + x;
        if (std::abs(s) >= std::abs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    // contributes a*b mod 1 at full precision
    void add_product(double a, double b) {
        const double h = a * b;
        const double l = std::fma(a, b, -h);
        add(frac1(h));
        add(l);
    }
    double hi() const { return frac1(s); }
    double lo() const { return c; }
    double value() const { return frac1(frac1(s) + c); }
};

// phase(k) mod 1, in [-1/2, 1/2]
inline double phase_eval(const PhasePoly& p, long long k) {
    const double kd = static_cast<double>(k);
    const double k2 = kd * kd;
    const double h2 = p.c2 * k2;
    const double l2 = std::fma(p.c2, k2, -h2);
    const double h1 = p.c1_hi * kd;
    const double l1 = std::fma(p.c1_hi, kd, -h1);
    double s = frac1(h2) + frac1(h1);
    s += l2 + l1 + p.c1_lo * kd + p.c0;
    return frac1(s);
}

// phase(k + stride) - phase(k) mod 1
inline double phase_step(const PhasePoly& p, long long k, long long stride) {
    const double sd = static_cast<double>(stride);
    const double m = static_cast<double>(2 * k * stride + stride * stride);
    const double h2 = p.c2 * m;
    const double l2 = std::fma(p.c2, m, -h2);
    const double h1 = p.c1_hi * sd;
    const double l1 = std::fma(p.c1_hi, sd, -h1);
    return frac1(frac1(h2) + frac1(h1) + l2 + l1 + p.c1_lo * sd);
}

inline std::complex<double> e2pi(double r) {
    const double a = 2.0 * M_PI * r;
    return {std::cos(a), std::sin(a)};
}

class RowKernel {
public:
    virtual ~RowKernel() = default;
    virtual std::complex<double> sum(const PhasePoly& p, long long count) const = 0;
    virtual std::complex<double> sum_weighted(const PhasePoly& p, std::span<const double> w) const = 0;
    virtual const char* name() const = 0;
};

// resolves `simd` to the best instruction set the CPU offers (falling back to
// the rotor kernel), and `parallel` to the row kernel used inside chunks
const RowKernel& row_kernel(KernelKind kind);

bool simd_available();

} // namespace theta
