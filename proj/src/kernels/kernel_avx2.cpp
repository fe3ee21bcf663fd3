// AVX2 rotor kernel: four interleaved rotor chains, one per lane, advancing by
// stride 4. The stride-4 step rotors share the common ratio e(32 c2). Lanes
// are re-seeded from reduced arguments on the same cadence as the scalar
// rotor. Only dispatched when the CPU reports AVX2.

#if defined(__x86_64__) || defined(_M_X64)

#include "theta/kernels.hpp"

#include <immintrin.h>

namespace theta {

namespace {

inline void complex_mul(__m256d& ar, __m256d& ai, __m256d br, __m256d bi) {
    const __m256d re = _mm256_fmsub_pd(ar, br, _mm256_mul_pd(ai, bi));
    const __m256d im = _mm256_fmadd_pd(ar, bi, _mm256_mul_pd(ai, br));
    ar = re;
    ai = im;
}

class Avx2Kernel final : public RowKernel {
public:
    std::complex<double> sum(const PhasePoly& p, long long count) const override {
        return run(p, nullptr, count);
    }

    std::complex<double> sum_weighted(const PhasePoly& p, std::span<const double> w) const override {
        return run(p, w.data(), static_cast<long long>(w.size()));
    }

    const char* name() const override { return "avx2"; }

private:
    static std::complex<double> run(const PhasePoly& p, const double* w, long long count) {
        const long long vec_end = count - count % 4;
        __m256d acc_re = _mm256_setzero_pd(), acc_im = _mm256_setzero_pd();

        const std::complex<double> rho4 = e2pi(frac1(32.0 * p.c2));
        const __m256d rho_re = _mm256_set1_pd(rho4.real());
        const __m256d rho_im = _mm256_set1_pd(rho4.imag());

        __m256d z_re{}, z_im{}, s_re{}, s_im{};
        alignas(32) double buf[4];

        for (long long k = 0; k < vec_end; k += 4) {
            if (k % kRotorResyncInterval == 0) {
                alignas(32) double zr[4], zi[4], sr[4], si[4];
                for (int j = 0; j < 4; ++j) {
                    const std::complex<double> z = e2pi(phase_eval(p, k + j));
                    const std::complex<double> s = e2pi(phase_step(p, k + j, 4));
                    zr[j] = z.real();
                    zi[j] = z.imag();
                    sr[j] = s.real();
                    si[j] = s.imag();
                }
                z_re = _mm256_load_pd(zr);
                z_im = _mm256_load_pd(zi);
                s_re = _mm256_load_pd(sr);
                s_im = _mm256_load_pd(si);
            }
            if (w != nullptr) {
                const __m256d wv = _mm256_loadu_pd(w + k);
                acc_re = _mm256_fmadd_pd(wv, z_re, acc_re);
                acc_im = _mm256_fmadd_pd(wv, z_im, acc_im);
            } else {
                acc_re = _mm256_add_pd(acc_re, z_re);
                acc_im = _mm256_add_pd(acc_im, z_im);
            }
            complex_mul(z_re, z_im, s_re, s_im);
            complex_mul(s_re, s_im, rho_re, rho_im);
        }

        // fixed lane order keeps the reduction deterministic
        std::complex<double> acc{0.0, 0.0};
        _mm256_store_pd(buf, acc_re);
        double re = ((buf[0] + buf[1]) + (buf[2] + buf[3]));
        _mm256_store_pd(buf, acc_im);
        double im = ((buf[0] + buf[1]) + (buf[2] + buf[3]));
        acc = {re, im};

        for (long long k = vec_end; k < count; ++k) {
            const std::complex<double> z = e2pi(phase_eval(p, k));
            acc += w ? w[k] * z : z;
        }
        return acc;
    }
};

} // namespace

const RowKernel& avx2_row_kernel() {
    static const Avx2Kernel k;
    return k;
}

} // namespace theta

#endif
