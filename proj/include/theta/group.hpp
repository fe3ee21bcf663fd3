#pragma once

// Carriers and arithmetic for the Heisenberg group H, the symplectic group
// G = Sp(n,R), its integer subgroup Sp(n,Z), and the Jacobi group H x| G.

#include "theta/bigint.hpp"

#include <Eigen/Dense>

namespace theta {

inline constexpr double kSymplTol = 1e-9;

// J = [[0, -I], [I, 0]]
Eigen::MatrixXd symplectic_form(int n);

struct HeisenbergElement {
    Eigen::VectorXd x;
    Eigen::VectorXd y;
    double t = 0.0;

    HeisenbergElement() = default;
    HeisenbergElement(Eigen::VectorXd x_, Eigen::VectorXd y_, double t_);

    int dim() const { return static_cast<int>(x.size()); }
    static HeisenbergElement zero(int n);
    HeisenbergElement inverse() const { return HeisenbergElement(-x, -y, -t); }
};

class SymplecticMatrix {
public:
    SymplecticMatrix() = default;
    // Validates even size; symplectic defect is the caller's concern (see check()).
    explicit SymplecticMatrix(Eigen::MatrixXd entries);

    static SymplecticMatrix identity(int n);

    int n() const { return static_cast<int>(m_.rows()) / 2; }
    const Eigen::MatrixXd& entries() const { return m_; }

    Eigen::MatrixXd A() const { return m_.topLeftCorner(n(), n()); }
    Eigen::MatrixXd B() const { return m_.topRightCorner(n(), n()); }
    Eigen::MatrixXd C() const { return m_.bottomLeftCorner(n(), n()); }
    Eigen::MatrixXd D() const { return m_.bottomRightCorner(n(), n()); }

    SymplecticMatrix operator*(const SymplecticMatrix& o) const { return SymplecticMatrix(m_ * o.m_); }

    // max-entry norm of gJg^T - J
    double check() const;

    // g^{-1} = J^{-1} g^T J, exact in the entries up to the input's own defect
    SymplecticMatrix inverse() const;

private:
    Eigen::MatrixXd m_;
};

class IntegerSymplectic {
public:
    IntegerSymplectic() = default;
    explicit IntegerSymplectic(IntMat entries);

    static IntegerSymplectic identity(int n);

    int n() const { return mat_.rows() / 2; }
    const IntMat& mat() const { return mat_; }

    IntegerSymplectic operator*(const IntegerSymplectic& o) const { return IntegerSymplectic(mat_ * o.mat_); }
    bool operator==(const IntegerSymplectic& o) const { return mat_ == o.mat_; }

    // true iff gJg^T = J exactly
    bool is_symplectic() const;
    IntegerSymplectic inverse() const;

    SymplecticMatrix to_real() const { return SymplecticMatrix(mat_.to_double()); }

private:
    IntMat mat_;
};

struct JacobiElement {
    HeisenbergElement h;
    SymplecticMatrix g;

    JacobiElement() = default;
    JacobiElement(HeisenbergElement h_, SymplecticMatrix g_);
    int n() const { return g.n(); }
};

// An element of the discrete group acting on H x| G: ((m, n, t) h_gamma, gamma).
struct JacobiLatticeElement {
    Eigen::VectorXi m;
    Eigen::VectorXi n_vec;
    double t = 0.0;
    IntegerSymplectic gamma;

    static JacobiLatticeElement identity(int n);
    int n() const { return gamma.n(); }

    // the full Heisenberg part (m, n, t) * h_gamma
    HeisenbergElement heisenberg_part() const;
    JacobiElement to_jacobi() const;
};

HeisenbergElement heis_mul(const HeisenbergElement& h1, const HeisenbergElement& h2);

// h^g = (xA + yC, xB + yD, t)
HeisenbergElement heis_action(const HeisenbergElement& h, const SymplecticMatrix& g);

// (h1, g1)(h2, g2) = (h1 h2^{g1^{-1}}, g1 g2)
JacobiElement jacobi_mul(const JacobiElement& j1, const JacobiElement& j2);
JacobiElement jacobi_mul(const JacobiLatticeElement& w, const JacobiElement& j);

inline SymplecticMatrix sympl_inverse(const SymplecticMatrix& g) { return g.inverse(); }
inline double sympl_check(const SymplecticMatrix& g) { return g.check(); }

// parity vector h_gamma = (r, s, 0): r_j = 1/2 iff diag(CD^T)_j odd, s_j from diag(AB^T)
HeisenbergElement h_gamma(const IntegerSymplectic& gamma);

} // namespace theta
