#pragma once

// Coordinate charts on Sp(n,R): the Iwasawa decomposition g = n(X) a(Y^{1/2}) k(Q),
// the Y = U V U^T factorization, and the level-l partial decomposition.
//
// Convention: Y^{1/2} is the upper-triangular factor with positive diagonal such
// that Y^{1/2} (Y^{1/2})^T = Y, and Y^{-1/2} always means (Y^{1/2})^{-1}.

#include "theta/group.hpp"

#include <Eigen/Dense>

#include <complex>

namespace theta {

struct IwasawaCoords {
    Eigen::MatrixXd X; // symmetric
    Eigen::MatrixXd U; // upper-triangular unipotent
    Eigen::VectorXd V; // positive diagonal entries v_1..v_n
    Eigen::MatrixXcd Q; // unitary

    int n() const { return static_cast<int>(V.size()); }
    Eigen::MatrixXd Y() const { return U * V.asDiagonal() * U.transpose(); }
    Eigen::MatrixXd Y_half() const { return U * V.cwiseSqrt().asDiagonal(); }
};

struct PartialCoords {
    int l = 0;
    Eigen::MatrixXd R; // l x (n-l)
    Eigen::MatrixXd S; // l x (n-l)
    Eigen::MatrixXd T; // l x l symmetric
    Eigen::MatrixXd U; // l x l upper-triangular unipotent
    Eigen::VectorXd V; // l positive diagonal entries
    Eigen::MatrixXd X_low; // (n-l) x (n-l) symmetric
    Eigen::MatrixXd Y_low; // (n-l) x (n-l) positive definite
    Eigen::MatrixXcd Q;

    int n() const { return static_cast<int>(Q.rows()); }
};

// Y = U V U^T with U unipotent upper-triangular, V positive diagonal.
// Throws if a pivot drops below 1e-12 times the largest diagonal entry.
void uvu_factor(const Eigen::MatrixXd& Y, Eigen::MatrixXd& U, Eigen::VectorXd& V);

// Upper-triangular square root with positive diagonal: returns R with R R^T = Y.
Eigen::MatrixXd upper_sqrt(const Eigen::MatrixXd& Y);

IwasawaCoords iwasawa(const SymplecticMatrix& g);
SymplecticMatrix recompose(const IwasawaCoords& c);

PartialCoords partial(const SymplecticMatrix& g, int l);
SymplecticMatrix recompose_partial(const PartialCoords& c);

// g_l(g) in Sp(n-l,R), built from X_l and Y_l. Requires l < n.
SymplecticMatrix sub_symplectic(const PartialCoords& c);

// Block builders.
SymplecticMatrix n_of(const Eigen::MatrixXd& X);             // [[I, X], [0, I]]
SymplecticMatrix a_of(const Eigen::MatrixXd& Ahalf);         // [[A, 0], [0, A^{-T}]]
SymplecticMatrix k_of(const Eigen::MatrixXcd& Q);            // [[Re Q, -Im Q], [Im Q, Re Q]]

// The parabolic nilpotent factor at level l:
// [[I, R, T - S R^T, S], [0, I, S^T, 0], [0, 0, I, 0], [0, 0, -R^T, I]].
SymplecticMatrix parabolic_nilpotent(int n, int l, const Eigen::MatrixXd& R, const Eigen::MatrixXd& S,
                                     const Eigen::MatrixXd& T);

} // namespace theta
