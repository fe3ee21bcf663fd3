#include "theta/kernels.hpp"

// Second-difference rotor: e(phase(k+1)) = e(phase(k)) * r_k with
// r_{k+1} = r_k * e(2 c2). Two complex multiplications per lattice step;
// state is recomputed from reduced arguments every kRotorResyncInterval
// steps, which caps the multiplicative drift below 1e-12.

namespace theta {

namespace {

class RotorKernel final : public RowKernel {
public:
    std::complex<double> sum(const PhasePoly& p, long long count) const override {
        std::complex<double> acc{0.0, 0.0};
        const std::complex<double> rho = e2pi(frac1(2.0 * p.c2));
        std::complex<double> z, r;
        for (long long k = 0; k < count; ++k) {
            if (k % kRotorResyncInterval == 0) {
                z = e2pi(phase_eval(p, k));
                r = e2pi(phase_step(p, k, 1));
            }
            acc += z;
            z *= r;
            r *= rho;
        }
        return acc;
    }

    std::complex<double> sum_weighted(const PhasePoly& p, std::span<const double> w) const override {
        std::complex<double> acc{0.0, 0.0};
        const std::complex<double> rho = e2pi(frac1(2.0 * p.c2));
        std::complex<double> z, r;
        const long long count = static_cast<long long>(w.size());
        for (long long k = 0; k < count; ++k) {
            if (k % kRotorResyncInterval == 0) {
                z = e2pi(phase_eval(p, k));
                r = e2pi(phase_step(p, k, 1));
            }
            acc += w[static_cast<size_t>(k)] * z;
            z *= r;
            r *= rho;
        }
        return acc;
    }

    const char* name() const override { return "rotor"; }
};

} // namespace

const RowKernel& rotor_row_kernel() {
    static const RotorKernel k;
    return k;
}

} // namespace theta
