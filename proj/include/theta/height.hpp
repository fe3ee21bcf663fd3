#pragma once

// The cusp height D on the quotient of the Jacobi group, flowed heights along
// the diagonal geodesic and dyadic directions, membership in the good sets
// G_j(psi, C), Haar sampling of the fundamental domain, and tail-exponent
// fitting.

#include "theta/cutoff.hpp"
#include "theta/group.hpp"
#include "theta/reduce.hpp"
#include "theta/rng.hpp"

#include <vector>

namespace theta {

struct HeightParams {
    double A = 1.0; // exponent; default n, exposed as config

    static HeightParams for_rank(int n) { return HeightParams{static_cast<double>(n)}; }
};

// increasing growth gauge psi(t) = (1 + t)^p with integrable psi^{-(2n+4)}
struct GrowthPsi {
    double p = 0.0;

    static GrowthPsi standard(int n, double eps = 0.01) {
        return GrowthPsi{1.0 / (2.0 * n + 4.0) + eps};
    }
    double operator()(double t) const { return std::pow(1.0 + t, p); }
    // C_psi = int_0^infty psi^{-(2n+4)}
    double tail_integral(int n) const {
        const double d = (2.0 * n + 4.0) * p - 1.0;
        if (d <= 0.0) throw std::invalid_argument("GrowthPsi: psi^{-(2n+4)} is not integrable");
        return 1.0 / d;
    }
};

struct HaarSample {
    JacobiElement j;   // reduced representative
    int attempts = 1;  // proposals consumed, for acceptance-rate reporting
};

// det Y(gamma g) (1 + x Y(gamma g) x^T)^{-A} at the reduced representative;
// when a coordinate of x sits on the +-1/2 boundary the larger of the
// representative values is taken
double height(const JacobiElement& j, const HeightParams& p);

// height of j (1, diag(e^{-s} I, e^s I)) (h_S, g_{j,S})
double height_flowed(const JacobiElement& j, double s, const DyadicIndex& idx, const HeightParams& p);

// true iff height_flowed^{1/4} <= C psi(s) for every S subset and every grid s.
// The S component of the dyadic index is ignored: membership quantifies over
// all sign sets.
bool g_script_member(const JacobiElement& j, const GrowthPsi& psi, double C, const Eigen::VectorXi& jpow,
                     const std::vector<double>& s_grid, const HeightParams& p);

// grid on [1, s_max] with spacing 1/K_j, K_j = 8 * 2^(j_1 + ... + j_n)
std::vector<double> default_s_grid(const Eigen::VectorXi& jpow, double s_max);

// Haar sampling of the fundamental domain by rejection; n in {1, 2}
HaarSample haar_sample(int n, SplitRng& rng);

struct TailFit {
    double exponent = 0.0;
    double stderr_ = 0.0;
    int points_used = 0;
};

// least-squares slope of log P(D >= R) against log R over the grid points
// with enough tail mass (>= 100 exceedances, p <= 1/2)
TailFit tail_fit(const std::vector<double>& samples, const std::vector<double>& r_grid);

// log-spaced grid between the median and the 100-exceedance quantile
std::vector<double> default_r_grid(const std::vector<double>& samples, int points = 16);

} // namespace theta
