#pragma once

// Reduction into fundamental domains: Grenier's domain for GL(l,Z) acting on
// positive definite forms, the box-cusp domain for Sp(n,Z)\Sp(n,R), the
// Jacobi-level domain, and the cusp-sector quantities.

#include "theta/decompose.hpp"
#include "theta/enumeration.hpp"
#include "theta/group.hpp"

#include <optional>

namespace theta {

inline constexpr int kMaxReductionRank = 4;
inline constexpr double kMembershipSlack = 1e-9;

struct GrenierResult {
    IntMat A;                 // unimodular, exact
    Eigen::MatrixXd Y_reduced; // A Y A^T
};

struct SymplecticReduction {
    IntegerSymplectic gamma;
    SymplecticMatrix reduced; // gamma * g
    IwasawaCoords coords;
};

struct JacobiReduction {
    JacobiLatticeElement word;
    JacobiElement reduced;
};

struct CuspQuantities {
    double v_l_min = 0.0;
    std::optional<double> v_lplus1_max; // absent for l = n
};

// --- integer Sp(n,Z) word builders -----------------------------------------

IntegerSymplectic int_J(int n);
IntegerSymplectic int_translation(const IntMat& R);          // [[I, R], [0, I]], R symmetric
IntegerSymplectic int_gl(const IntMat& A, const IntMat& Ainv); // diag(A, A^{-T})
// level-1 nilpotent [[1, r, t - s r^T, s], [0, I, s^T, 0], [0,0,1,0], [0,0,-r^T,I]]
IntegerSymplectic int_heis_level1(int n, const Eigen::VectorXi& r, const Eigen::VectorXi& s, long long t);
IntegerSymplectic int_sign_level1(int n); // diag(-1, I, -1, I)
IntegerSymplectic int_sp_embed(int n, int l, const IntegerSymplectic& sub);
IntegerSymplectic int_gl_embed(int n, int l, const IntMat& A, const IntMat& Ainv);

// exact determinant / inverse for small unimodular matrices
BigInt int_det(const IntMat& a);
IntMat int_inverse_unimodular(const IntMat& a);

// whether the exact matrix lies in Gamma_l = Gamma cap P_l (block-zero pattern)
bool in_parabolic(const IntegerSymplectic& gamma, int l);

// --- Grenier domain ----------------------------------------------------------

bool grenier_member(const Eigen::MatrixXd& Y);
GrenierResult grenier_reduce(const Eigen::MatrixXd& Y);

// --- Sp(n,Z) fundamental domain ----------------------------------------------

// minimizers of Q(c,d) = c Y c^T + (cX + d) Y^{-1} (cX + d)^T over primitive
// integer rows; these are the rows realizing the maximal v_1
ShortestResult v1_min_search(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y);

// exact gamma in Sp(n,Z) whose row n+1 equals the primitive vector v
IntegerSymplectic sympl_complete(const Eigen::VectorXi& v);

bool dn_member(const SymplecticMatrix& g);
SymplecticReduction dn_reduce(const SymplecticMatrix& g);

JacobiReduction jacobi_reduce(const JacobiElement& j);

CuspQuantities cusp_quantities(const SymplecticMatrix& g, int l);

// Reduction through Gamma_l when g is deep enough in the l-cusp; a_l is the
// hypothesis constant (the paper asserts existence only; default 16).
SymplecticReduction parabolic_reduce(const SymplecticMatrix& g, int l, double a_l = 16.0);

// k with x - k in (-1/2, 1/2]
long long box_round(double x);

} // namespace theta
