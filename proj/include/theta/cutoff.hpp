#pragma once

// Smooth dyadic partition of unity for the open unit interval and box.
//
// The transition ramp is psi(x) = sigma((x - 1/4) / (1/2)) with sigma the
// normalized integral of the standard bump exp(-1/(t(1-t))); it satisfies
// psi(x) + psi(1-x) = 1, and f1(x) = psi(2x) - psi(x) is a smooth bump
// supported in [1/8, 3/4]. Summing f1 over dyadic rescalings telescopes to
// the indicator of (0,1).

#include "theta/group.hpp"

#include <Eigen/Dense>

#include <set>
#include <vector>

namespace theta {

// sigma: [0,1] -> [0,1], C-infinity, sigma(u) + sigma(1-u) = 1.
// Table-backed cubic Hermite with analytic derivatives; abs error < 1e-13,
// symmetric up to the rounding of the reflected argument.
double bump_sigma(double u);

double cutoff_ramp(double x); // psi
double f1(double x);
double fn(const Eigen::VectorXd& x);

// per-coordinate truncated dyadic sum
//   prod_i sum_{j <= J_max} [ f1(2^j u_i) + f1(2^j (1 - u_i)) ],  u = x B^{-1};
// equals the indicator of the open box (0,b_1) x ... x (0,b_n) once
// 2^J_max dist(u, boundary) >= 3/4.
double chi_box_decomp(const Eigen::VectorXd& x, const Eigen::VectorXd& b, int j_max);

struct DyadicIndex {
    Eigen::VectorXi j;  // nonnegative dyadic powers
    std::set<int> S;    // sign-flip coordinate set (0-based)

    int n() const { return static_cast<int>(j.size()); }
    static DyadicIndex zero(int n) { return DyadicIndex{Eigen::VectorXi::Zero(n), {}}; }
};

struct FlowElements {
    HeisenbergElement h_S;  // (x_S, 0, 0), x_S entries -1 on S
    SymplecticMatrix g_jS;  // diag(A_j E_S, A_j^{-1} E_S)
};

FlowElements flow_elements(const DyadicIndex& idx);

} // namespace theta
