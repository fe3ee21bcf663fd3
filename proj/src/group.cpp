#include "theta/group.hpp"

#include <stdexcept>

namespace theta {

Eigen::MatrixXd symplectic_form(int n) {
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    j.topRightCorner(n, n) = -Eigen::MatrixXd::Identity(n, n);
    j.bottomLeftCorner(n, n) = Eigen::MatrixXd::Identity(n, n);
    return j;
}

HeisenbergElement::HeisenbergElement(Eigen::VectorXd x_, Eigen::VectorXd y_, double t_)
    : x(std::move(x_)), y(std::move(y_)), t(t_) {
    if (x.size() != y.size() || x.size() < 1)
        throw std::invalid_argument("HeisenbergElement: x and y must have equal dimension >= 1");
}

HeisenbergElement HeisenbergElement::zero(int n) {
    return HeisenbergElement(Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n), 0.0);
}

SymplecticMatrix::SymplecticMatrix(Eigen::MatrixXd entries) : m_(std::move(entries)) {
    if (m_.rows() != m_.cols() || m_.rows() < 2 || m_.rows() % 2 != 0)
        throw std::invalid_argument("SymplecticMatrix: entries must be 2n x 2n");
}

SymplecticMatrix SymplecticMatrix::identity(int n) {
    return SymplecticMatrix(Eigen::MatrixXd::Identity(2 * n, 2 * n));
}

double SymplecticMatrix::check() const {
    const Eigen::MatrixXd j = symplectic_form(n());
    return (m_ * j * m_.transpose() - j).cwiseAbs().maxCoeff();
}

SymplecticMatrix SymplecticMatrix::inverse() const {
    if (check() > kSymplTol)
        throw std::invalid_argument("SymplecticMatrix::inverse: symplectic defect above tolerance");
    const Eigen::MatrixXd j = symplectic_form(n());
    // J^{-1} = -J
    return SymplecticMatrix(-j * m_.transpose() * j);
}

IntegerSymplectic::IntegerSymplectic(IntMat entries) : mat_(std::move(entries)) {
    if (mat_.rows() != mat_.cols() || mat_.rows() < 2 || mat_.rows() % 2 != 0)
        throw std::invalid_argument("IntegerSymplectic: entries must be 2n x 2n");
}

IntegerSymplectic IntegerSymplectic::identity(int n) {
    return IntegerSymplectic(IntMat::identity(2 * n));
}

bool IntegerSymplectic::is_symplectic() const {
    const int nn = n();
    IntMat j(2 * nn, 2 * nn);
    for (int i = 0; i < nn; ++i) {
        j(i, nn + i) = -1;
        j(nn + i, i) = 1;
    }
    return (mat_ * j * mat_.transposed()) == j;
}

IntegerSymplectic IntegerSymplectic::inverse() const {
    const int nn = n();
    IntMat j(2 * nn, 2 * nn), jneg(2 * nn, 2 * nn);
    for (int i = 0; i < nn; ++i) {
        j(i, nn + i) = -1;
        j(nn + i, i) = 1;
        jneg(i, nn + i) = 1;
        jneg(nn + i, i) = -1;
    }
    return IntegerSymplectic(jneg * mat_.transposed() * j);
}

JacobiElement::JacobiElement(HeisenbergElement h_, SymplecticMatrix g_) : h(std::move(h_)), g(std::move(g_)) {
    if (h.dim() != g.n()) throw std::invalid_argument("JacobiElement: Heisenberg and symplectic dimensions differ");
}

JacobiLatticeElement JacobiLatticeElement::identity(int n) {
    JacobiLatticeElement w;
    w.m = Eigen::VectorXi::Zero(n);
    w.n_vec = Eigen::VectorXi::Zero(n);
    w.t = 0.0;
    w.gamma = IntegerSymplectic::identity(n);
    return w;
}

HeisenbergElement JacobiLatticeElement::heisenberg_part() const {
    HeisenbergElement u(m.cast<double>(), n_vec.cast<double>(), t);
    return heis_mul(u, h_gamma(gamma));
}

JacobiElement JacobiLatticeElement::to_jacobi() const {
    return JacobiElement(heisenberg_part(), gamma.to_real());
}

HeisenbergElement heis_mul(const HeisenbergElement& h1, const HeisenbergElement& h2) {
    if (h1.dim() != h2.dim()) throw std::invalid_argument("heis_mul: dimension mismatch");
    const double tw = 0.5 * (h1.y.dot(h2.x) - h1.x.dot(h2.y));
    return HeisenbergElement(h1.x + h2.x, h1.y + h2.y, h1.t + h2.t + tw);
}

HeisenbergElement heis_action(const HeisenbergElement& h, const SymplecticMatrix& g) {
    if (h.dim() != g.n()) throw std::invalid_argument("heis_action: dimension mismatch");
    Eigen::RowVectorXd xr = h.x.transpose(), yr = h.y.transpose();
    Eigen::RowVectorXd nx = xr * g.A() + yr * g.C();
    Eigen::RowVectorXd ny = xr * g.B() + yr * g.D();
    return HeisenbergElement(nx.transpose(), ny.transpose(), h.t);
}

JacobiElement jacobi_mul(const JacobiElement& j1, const JacobiElement& j2) {
    if (j1.n() != j2.n()) throw std::invalid_argument("jacobi_mul: dimension mismatch");
    return JacobiElement(heis_mul(j1.h, heis_action(j2.h, j1.g.inverse())), j1.g * j2.g);
}

JacobiElement jacobi_mul(const JacobiLatticeElement& w, const JacobiElement& j) {
    return jacobi_mul(w.to_jacobi(), j);
}

HeisenbergElement h_gamma(const IntegerSymplectic& gamma) {
    const int n = gamma.n();
    const IntMat& g = gamma.mat();
    Eigen::VectorXd r = Eigen::VectorXd::Zero(n), s = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) {
        BigInt cd = 0, ab = 0;
        for (int k = 0; k < n; ++k) {
            cd += g(n + i, k) * g(n + i, n + k); // diag(C D^T)
            ab += g(i, k) * g(i, n + k);         // diag(A B^T)
        }
        if (cd % 2 != 0) r(i) = 0.5;
        if (ab % 2 != 0) s(i) = 0.5;
    }
    return HeisenbergElement(r, s, 0.0);
}

} // namespace theta
