#include "theta/decompose.hpp"

#include <stdexcept>

namespace theta {

void uvu_factor(const Eigen::MatrixXd& Y, Eigen::MatrixXd& U, Eigen::VectorXd& V) {
    const int n = static_cast<int>(Y.rows());
    if (Y.cols() != n || n < 1) throw std::invalid_argument("uvu_factor: Y must be square");
    const double scale = Y.diagonal().maxCoeff();
    Eigen::MatrixXd W = 0.5 * (Y + Y.transpose());
    U = Eigen::MatrixXd::Identity(n, n);
    V = Eigen::VectorXd::Zero(n);
    // Pivot from the bottom-right corner: Y_kk = v_k once later columns are cleared.
    for (int k = n - 1; k >= 0; --k) {
        const double v = W(k, k);
        if (!(v > 1e-12 * scale)) throw std::invalid_argument("uvu_factor: matrix not positive definite");
        V(k) = v;
        for (int i = 0; i < k; ++i) U(i, k) = W(i, k) / v;
        for (int i = 0; i < k; ++i)
            for (int j = 0; j <= i; ++j) {
                W(j, i) -= v * U(j, k) * U(i, k);
                W(i, j) = W(j, i);
            }
    }
}

Eigen::MatrixXd upper_sqrt(const Eigen::MatrixXd& Y) {
    Eigen::MatrixXd U;
    Eigen::VectorXd V;
    uvu_factor(Y, U, V);
    return U * V.cwiseSqrt().asDiagonal();
}

SymplecticMatrix n_of(const Eigen::MatrixXd& X) {
    const int n = static_cast<int>(X.rows());
    Eigen::MatrixXd g = Eigen::MatrixXd::Identity(2 * n, 2 * n);
    g.topRightCorner(n, n) = X;
    return SymplecticMatrix(g);
}

SymplecticMatrix a_of(const Eigen::MatrixXd& Ahalf) {
    const int n = static_cast<int>(Ahalf.rows());
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    g.topLeftCorner(n, n) = Ahalf;
    g.bottomRightCorner(n, n) = Ahalf.inverse().transpose();
    return SymplecticMatrix(g);
}

SymplecticMatrix k_of(const Eigen::MatrixXcd& Q) {
    const int n = static_cast<int>(Q.rows());
    Eigen::MatrixXd g(2 * n, 2 * n);
    g.topLeftCorner(n, n) = Q.real();
    g.topRightCorner(n, n) = -Q.imag();
    g.bottomLeftCorner(n, n) = Q.imag();
    g.bottomRightCorner(n, n) = Q.real();
    return SymplecticMatrix(g);
}

IwasawaCoords iwasawa(const SymplecticMatrix& g) {
    const int n = g.n();
    const Eigen::MatrixXd C = g.C(), D = g.D();
    Eigen::MatrixXd M = C * C.transpose() + D * D.transpose();
    Eigen::LLT<Eigen::MatrixXd> llt(M);
    if (llt.info() != Eigen::Success)
        throw std::invalid_argument("iwasawa: C C^T + D D^T numerically singular; input is not symplectic");
    IwasawaCoords c;
    Eigen::MatrixXd Y = llt.solve(Eigen::MatrixXd::Identity(n, n));
    Y = 0.5 * (Y + Y.transpose());
    Eigen::MatrixXd X = (g.A() * C.transpose() + g.B() * D.transpose()) * Y;
    c.X = 0.5 * (X + X.transpose());
    uvu_factor(Y, c.U, c.V);
    const Eigen::MatrixXd yhalf = c.Y_half();
    c.Q = yhalf.transpose() * (D + std::complex<double>(0, 1) * C.cast<std::complex<double>>());
    return c;
}

SymplecticMatrix recompose(const IwasawaCoords& c) {
    return n_of(c.X) * a_of(c.Y_half()) * k_of(c.Q);
}

SymplecticMatrix parabolic_nilpotent(int n, int l, const Eigen::MatrixXd& R, const Eigen::MatrixXd& S,
                                     const Eigen::MatrixXd& T) {
    Eigen::MatrixXd g = Eigen::MatrixXd::Identity(2 * n, 2 * n);
    const int m = n - l;
    g.block(0, n, l, l) = T - S * R.transpose();
    if (m > 0) {
        g.block(0, l, l, m) = R;
        g.block(0, n + l, l, m) = S;
        g.block(l, n, m, l) = S.transpose();
        g.block(n + l, n, m, l) = -R.transpose();
    }
    return SymplecticMatrix(g);
}

namespace {

// diag(M, I, M^{-T}, I) in the (l, n-l, l, n-l) blocking
SymplecticMatrix gl_embed(int n, int l, const Eigen::MatrixXd& M) {
    Eigen::MatrixXd g = Eigen::MatrixXd::Identity(2 * n, 2 * n);
    g.block(0, 0, l, l) = M;
    g.block(n, n, l, l) = M.inverse().transpose();
    return SymplecticMatrix(g);
}

// embed Sp(n-l) into rows/columns (l..n, n+l..2n)
SymplecticMatrix sp_embed(int n, int l, const SymplecticMatrix& s) {
    const int m = n - l;
    Eigen::MatrixXd g = Eigen::MatrixXd::Identity(2 * n, 2 * n);
    g.block(l, l, m, m) = s.A();
    g.block(l, n + l, m, m) = s.B();
    g.block(n + l, l, m, m) = s.C();
    g.block(n + l, n + l, m, m) = s.D();
    return SymplecticMatrix(g);
}

} // namespace

PartialCoords partial(const SymplecticMatrix& g, int l) {
    const int n = g.n();
    if (l < 1 || l > n) throw std::invalid_argument("partial: l out of range");
    const IwasawaCoords c = iwasawa(g);
    const int m = n - l;

    PartialCoords p;
    p.l = l;
    p.U = c.U.topLeftCorner(l, l);
    p.V = c.V.head(l);
    p.Q = c.Q;
    if (m == 0) {
        p.R.resize(l, 0);
        p.S.resize(l, 0);
        p.T = c.X;
        p.X_low.resize(0, 0);
        p.Y_low.resize(0, 0);
        return p;
    }
    const Eigen::MatrixXd U2 = c.U.bottomRightCorner(m, m);
    const Eigen::MatrixXd V2 = c.V.tail(m).asDiagonal();
    p.Y_low = U2 * V2 * U2.transpose();
    p.Y_low = 0.5 * (p.Y_low + p.Y_low.transpose());
    p.R = c.U.topRightCorner(l, m) * U2.inverse();
    p.X_low = c.X.bottomRightCorner(m, m);
    p.S = c.X.topRightCorner(l, m) - p.R * p.X_low;
    Eigen::MatrixXd T = c.X.topLeftCorner(l, l) - p.R * p.X_low * p.R.transpose();
    p.T = 0.5 * (T + T.transpose());
    return p;
}

SymplecticMatrix sub_symplectic(const PartialCoords& c) {
    if (c.X_low.rows() == 0) throw std::invalid_argument("sub_symplectic: empty for l = n");
    return n_of(c.X_low) * a_of(upper_sqrt(c.Y_low));
}

SymplecticMatrix recompose_partial(const PartialCoords& c) {
    const int n = c.n();
    const int l = c.l;
    const SymplecticMatrix N = parabolic_nilpotent(n, l, c.R, c.S, c.T);
    const SymplecticMatrix G1 = gl_embed(n, l, c.U * c.V.cwiseSqrt().asDiagonal());
    if (l == n) return N * G1 * k_of(c.Q);
    return N * G1 * sp_embed(n, l, sub_symplectic(c)) * k_of(c.Q);
}

} // namespace theta
