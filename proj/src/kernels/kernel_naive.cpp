#include "theta/kernels.hpp"

// Scalar reference kernel: one reduced-argument sin/cos per lattice point.

namespace theta {

namespace {

class NaiveKernel final : public RowKernel {
public:
    std::complex<double> sum(const PhasePoly& p, long long count) const override {
        std::complex<double> acc{0.0, 0.0};
        for (long long k = 0; k < count; ++k) acc += e2pi(phase_eval(p, k));
        return acc;
    }

    std::complex<double> sum_weighted(const PhasePoly& p, std::span<const double> w) const override {
        std::complex<double> acc{0.0, 0.0};
        for (long long k = 0; k < static_cast<long long>(w.size()); ++k)
            acc += w[static_cast<size_t>(k)] * e2pi(phase_eval(p, k));
        return acc;
    }

    const char* name() const override { return "naive"; }
};

} // namespace

const RowKernel& naive_row_kernel() {
    static const NaiveKernel k;
    return k;
}

} // namespace theta
