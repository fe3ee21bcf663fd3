// NEON rotor kernel: two interleaved rotor chains advancing by stride 2.
// NEON is baseline on aarch64, so no runtime feature check is needed.

#if defined(__aarch64__)

#include "theta/kernels.hpp"

#include <arm_neon.h>

namespace theta {

namespace {

inline void complex_mul(float64x2_t& ar, float64x2_t& ai, float64x2_t br, float64x2_t bi) {
    const float64x2_t re = vsubq_f64(vmulq_f64(ar, br), vmulq_f64(ai, bi));
    const float64x2_t im = vaddq_f64(vmulq_f64(ar, bi), vmulq_f64(ai, br));
    ar = re;
    ai = im;
}

class NeonKernel final : public RowKernel {
public:
    std::complex<double> sum(const PhasePoly& p, long long count) const override {
        return run(p, nullptr, count);
    }

    std::complex<double> sum_weighted(const PhasePoly& p, std::span<const double> w) const override {
        return run(p, w.data(), static_cast<long long>(w.size()));
    }

    const char* name() const override { return "neon"; }

private:
    static std::complex<double> run(const PhasePoly& p, const double* w, long long count) {
        const long long vec_end = count - count % 2;
        float64x2_t acc_re = vdupq_n_f64(0.0), acc_im = vdupq_n_f64(0.0);

        const std::complex<double> rho2 = e2pi(frac1(8.0 * p.c2));
        const float64x2_t rho_re = vdupq_n_f64(rho2.real());
        const float64x2_t rho_im = vdupq_n_f64(rho2.imag());

        float64x2_t z_re{}, z_im{}, s_re{}, s_im{};

        for (long long k = 0; k < vec_end; k += 2) {
            if (k % kRotorResyncInterval == 0) {
                double zr[2], zi[2], sr[2], si[2];
                for (int j = 0; j < 2; ++j) {
                    const std::complex<double> z = e2pi(phase_eval(p, k + j));
                    const std::complex<double> s = e2pi(phase_step(p, k + j, 2));
                    zr[j] = z.real();
                    zi[j] = z.imag();
                    sr[j] = s.real();
                    si[j] = s.imag();
                }
                z_re = vld1q_f64(zr);
                z_im = vld1q_f64(zi);
                s_re = vld1q_f64(sr);
                s_im = vld1q_f64(si);
            }
            if (w != nullptr) {
                const float64x2_t wv = vld1q_f64(w + k);
                acc_re = vfmaq_f64(acc_re, wv, z_re);
                acc_im = vfmaq_f64(acc_im, wv, z_im);
            } else {
                acc_re = vaddq_f64(acc_re, z_re);
                acc_im = vaddq_f64(acc_im, z_im);
            }
            complex_mul(z_re, z_im, s_re, s_im);
            complex_mul(s_re, s_im, rho_re, rho_im);
        }

        std::complex<double> acc{vgetq_lane_f64(acc_re, 0) + vgetq_lane_f64(acc_re, 1),
                                 vgetq_lane_f64(acc_im, 0) + vgetq_lane_f64(acc_im, 1)};
        for (long long k = vec_end; k < count; ++k) {
            const std::complex<double> z = e2pi(phase_eval(p, k));
            acc += w ? w[k] * z : z;
        }
        return acc;
    }
};

} // namespace

const RowKernel& neon_row_kernel() {
    static const NeonKernel k;
    return k;
}

} // namespace theta

#endif
