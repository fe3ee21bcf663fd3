#include "theta/reduce.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace theta {

long long box_round(double x) { return static_cast<long long>(std::ceil(x - 0.5)); }

// --- integer word builders ---------------------------------------------------

IntegerSymplectic int_J(int n) {
    IntMat m(2 * n, 2 * n);
    for (int i = 0; i < n; ++i) {
        m(i, n + i) = -1;
        m(n + i, i) = 1;
    }
    return IntegerSymplectic(m);
}

IntegerSymplectic int_translation(const IntMat& R) {
    const int n = R.rows();
    IntMat m = IntMat::identity(2 * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, n + j) = R(i, j);
    return IntegerSymplectic(m);
}

IntegerSymplectic int_gl(const IntMat& A, const IntMat& Ainv) {
    const int n = A.rows();
    IntMat m(2 * n, 2 * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            m(i, j) = A(i, j);
            m(n + i, n + j) = Ainv(j, i); // A^{-T}
        }
    return IntegerSymplectic(m);
}

IntegerSymplectic int_heis_level1(int n, const Eigen::VectorXi& r, const Eigen::VectorXi& s, long long t) {
    IntMat m = IntMat::identity(2 * n);
    BigInt sr = 0;
    for (int i = 0; i < n - 1; ++i) sr += BigInt(s(i)) * r(i);
    m(0, n) = BigInt(t) - sr;
    for (int i = 0; i < n - 1; ++i) {
        m(0, 1 + i) = r(i);
        m(0, n + 1 + i) = s(i);
        m(1 + i, n) = s(i);
        m(n + 1 + i, n) = -BigInt(r(i));
    }
    return IntegerSymplectic(m);
}

IntegerSymplectic int_sign_level1(int n) {
    IntMat m = IntMat::identity(2 * n);
    m(0, 0) = -1;
    m(n, n) = -1;
    return IntegerSymplectic(m);
}

IntegerSymplectic int_sp_embed(int n, int l, const IntegerSymplectic& sub) {
    const int k = n - l;
    if (sub.n() != k) throw std::invalid_argument("int_sp_embed: dimension mismatch");
    IntMat m = IntMat::identity(2 * n);
    const IntMat& s = sub.mat();
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            m(l + i, l + j) = s(i, j);
            m(l + i, n + l + j) = s(i, k + j);
            m(n + l + i, l + j) = s(k + i, j);
            m(n + l + i, n + l + j) = s(k + i, k + j);
        }
    return IntegerSymplectic(m);
}

IntegerSymplectic int_gl_embed(int n, int l, const IntMat& A, const IntMat& Ainv) {
    IntMat m = IntMat::identity(2 * n);
    for (int i = 0; i < l; ++i)
        for (int j = 0; j < l; ++j) {
            m(i, j) = A(i, j);
            m(n + i, n + j) = Ainv(j, i);
        }
    return IntegerSymplectic(m);
}

BigInt int_det(const IntMat& a) {
    const int n = a.rows();
    if (n == 1) return a(0, 0);
    BigInt det = 0;
    IntMat sub(n - 1, n - 1);
    for (int p = 0; p < n; ++p) {
        if (a(0, p) == 0) continue;
        for (int i = 1; i < n; ++i) {
            int jc = 0;
            for (int j = 0; j < n; ++j) {
                if (j == p) continue;
                sub(i - 1, jc++) = a(i, j);
            }
        }
        const BigInt minor = int_det(sub);
        det += (p % 2 == 0 ? a(0, p) : -a(0, p)) * minor;
    }
    return det;
}

IntMat int_inverse_unimodular(const IntMat& a) {
    const int n = a.rows();
    const BigInt det = int_det(a);
    if (det != 1 && det != -1) throw std::invalid_argument("int_inverse_unimodular: determinant not +-1");
    IntMat inv(n, n);
    if (n == 1) {
        inv(0, 0) = det;
        return inv;
    }
    IntMat sub(n - 1, n - 1);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            for (int r = 0, rr = 0; r < n; ++r) {
                if (r == i) continue;
                for (int c = 0, cc = 0; c < n; ++c) {
                    if (c == j) continue;
                    sub(rr, cc++) = a(r, c);
                }
                ++rr;
            }
            BigInt cof = int_det(sub);
            if ((i + j) % 2 != 0) cof = -cof;
            inv(j, i) = (det == 1) ? cof : -cof;
        }
    return inv;
}

bool in_parabolic(const IntegerSymplectic& gamma, int l) {
    const int n = gamma.n();
    if (l < 1 || l > n) throw std::invalid_argument("in_parabolic: l out of range");
    const IntMat& m = gamma.mat();
    // columns 0..l-1 vanish below row l-1
    for (int i = l; i < 2 * n; ++i)
        for (int j = 0; j < l; ++j)
            if (m(i, j) != 0) return false;
    // rows n..n+l-1 supported only on columns n..n+l-1
    for (int i = n; i < n + l; ++i)
        for (int j = 0; j < 2 * n; ++j) {
            if (j >= n && j < n + l) continue;
            if (m(i, j) != 0) return false;
        }
    return true;
}

// --- unimodular row clearing --------------------------------------------------

namespace {

struct ExtGcd {
    BigInt g, p, q; // p*a + q*b = g >= 0
};

ExtGcd ext_gcd(BigInt a, BigInt b) {
    BigInt old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
    while (r != 0) {
        const BigInt q = old_r / r;
        BigInt tmp = old_r - q * r;
        old_r = r;
        r = tmp;
        tmp = old_s - q * s;
        old_s = s;
        s = tmp;
        tmp = old_t - q * t;
        old_t = t;
        t = tmp;
    }
    if (old_r < 0) {
        old_r = -old_r;
        old_s = -old_s;
        old_t = -old_t;
    }
    return {old_r, old_s, old_t};
}

// U, Uinv unimodular with (row c) * U = (g, 0, ..., 0), g = gcd > 0.
void unimodular_clear_row(std::vector<BigInt> c, IntMat& U, IntMat& Uinv) {
    const int n = static_cast<int>(c.size());
    U = IntMat::identity(n);
    Uinv = IntMat::identity(n);
    auto col_op = [&](int i, int j, const BigInt& a, const BigInt& b, const BigInt& p, const BigInt& q,
                      const BigInt& g) {
        // columns i, j of U: (col_i, col_j) <- (p col_i + q col_j, -b/g col_i + a/g col_j)
        const BigInt bi = b / g, ai = a / g;
        for (int k = 0; k < n; ++k) {
            const BigInt ui = U(k, i), uj = U(k, j);
            U(k, i) = p * ui + q * uj;
            U(k, j) = -bi * ui + ai * uj;
        }
        // inverse transform acts on rows of Uinv: E^{-1} = [[a/g, b/g], [-q, p]]
        for (int k = 0; k < n; ++k) {
            const BigInt vi = Uinv(i, k), vj = Uinv(j, k);
            Uinv(i, k) = ai * vi + bi * vj;
            Uinv(j, k) = -q * vi + p * vj;
        }
        const BigInt ci = c[i], cj = c[j];
        c[i] = p * ci + q * cj;
        c[j] = -bi * ci + ai * cj;
    };
    for (int j = 1; j < n; ++j) {
        if (c[j] == 0) continue;
        const ExtGcd e = ext_gcd(c[0], c[j]);
        col_op(0, j, c[0], c[j], e.p, e.q, e.g);
    }
    if (c[0] < 0) {
        for (int k = 0; k < n; ++k) {
            U(k, 0) = -U(k, 0);
            Uinv(0, k) = -Uinv(0, k);
        }
    }
}

std::vector<BigInt> row_times(const std::vector<BigInt>& v, const IntMat& m) {
    const int n = m.cols();
    std::vector<BigInt> r(n);
    for (int j = 0; j < n; ++j) {
        BigInt acc = 0;
        for (int i = 0; i < m.rows(); ++i) acc += v[i] * m(i, j);
        r[j] = acc;
    }
    return r;
}

bool all_zero(const std::vector<BigInt>& v) {
    return std::all_of(v.begin(), v.end(), [](const BigInt& x) { return x == 0; });
}

} // namespace

IntegerSymplectic sympl_complete(const Eigen::VectorXi& v) {
    const int n = static_cast<int>(v.size()) / 2;
    if (v.size() != 2 * n || n < 1) throw std::invalid_argument("sympl_complete: vector must have even length");
    std::vector<BigInt> c(n), d(n);
    BigInt g_all = 0;
    for (int i = 0; i < n; ++i) {
        c[i] = v(i);
        d[i] = v(n + i);
        g_all = ext_gcd(g_all, BigInt(v(i))).g;
        g_all = ext_gcd(g_all, BigInt(v(n + i))).g;
    }
    if (g_all != 1) throw std::invalid_argument("sympl_complete: vector is not primitive");

    IntegerSymplectic word = IntegerSymplectic::identity(n);
    auto apply = [&](const IntegerSymplectic& gen) {
        word = word * gen;
        std::vector<BigInt> row(2 * n);
        for (int i = 0; i < n; ++i) {
            row[i] = c[i];
            row[n + i] = d[i];
        }
        row = row_times(row, gen.mat());
        for (int i = 0; i < n; ++i) {
            c[i] = row[i];
            d[i] = row[n + i];
        }
    };

    int guard = 1000;
    while (true) {
        if (--guard <= 0) throw std::runtime_error("sympl_complete: did not terminate");
        if (all_zero(c)) {
            // d is primitive; bring it to e_1 with d * A^{-T} = e_1
            IntMat V, Vinv;
            unimodular_clear_row(d, V, Vinv);
            apply(int_gl(Vinv.transposed(), V.transposed()));
            break;
        }
        IntMat U, Uinv;
        unimodular_clear_row(c, U, Uinv);
        apply(int_gl(U, Uinv));
        const BigInt g = c[0];
        // reduce d mod g through a symmetric translation
        IntMat R(n, n);
        for (int j = 0; j < n; ++j) {
            BigInt q = d[j] / g;
            if (d[j] - q * g < 0) q -= 1; // floor division
            R(0, j) = -q;
            R(j, 0) = -q;
        }
        apply(int_translation(R));
        apply(int_J(n)); // (c, d) -> (d, -c); entries of the new c are reduced mod g
    }
    // v * word = e_{n+1}, so the completion is word^{-1}
    IntegerSymplectic gamma = word.inverse();
    for (int j = 0; j < 2 * n; ++j)
        if (gamma.mat()(n, j) != BigInt(v(j))) throw std::logic_error("sympl_complete: completion lost the row");
    return gamma;
}

// --- Grenier domain -----------------------------------------------------------

namespace {

Eigen::MatrixXd spd_inverse(const Eigen::MatrixXd& Y) {
    Eigen::LLT<Eigen::MatrixXd> llt(Y);
    if (llt.info() != Eigen::Success) throw std::invalid_argument("matrix not positive definite");
    Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(Y.rows(), Y.cols()));
    return 0.5 * (inv + inv.transpose());
}

// splits Y as [[1, r],[0, I]] diag(v1, Y1) [[1, 0],[r^T, I]]
void split_corner(const Eigen::MatrixXd& Y, double& v1, Eigen::RowVectorXd& r, Eigen::MatrixXd& Y1) {
    const int l = static_cast<int>(Y.rows());
    Y1 = Y.bottomRightCorner(l - 1, l - 1);
    r = Y.topRightCorner(1, l - 1) * spd_inverse(Y1);
    v1 = Y(0, 0) - (r * Y1 * r.transpose())(0, 0);
}

} // namespace

bool grenier_member(const Eigen::MatrixXd& Y) {
    const int l = static_cast<int>(Y.rows());
    if (l == 1) return Y(0, 0) > 0;
    const Eigen::MatrixXd Yinv = spd_inverse(Y);
    const ShortestResult sv = shortest_vectors(Yinv);
    if (Yinv(0, 0) > sv.value * (1.0 + kMembershipSlack)) return false;
    double v1;
    Eigen::RowVectorXd r;
    Eigen::MatrixXd Y1;
    split_corner(Y, v1, r, Y1);
    for (int j = 0; j < l - 1; ++j)
        if (std::abs(r(j)) > 0.5 + kMembershipSlack) return false;
    if (r(0) < -kMembershipSlack) return false;
    return grenier_member(Y1);
}

GrenierResult grenier_reduce(const Eigen::MatrixXd& Y) {
    const int l = static_cast<int>(Y.rows());
    GrenierResult res;
    res.A = IntMat::identity(l);
    res.Y_reduced = 0.5 * (Y + Y.transpose());
    if (l > kMaxReductionRank) throw std::invalid_argument("grenier_reduce: rank above the enforced maximum");
    if (l == 1) {
        if (!(Y(0, 0) > 0)) throw std::invalid_argument("grenier_reduce: not positive definite");
        return res;
    }
    auto apply = [&](const IntMat& T) {
        res.A = T * res.A;
        const Eigen::MatrixXd Td = T.to_double();
        res.Y_reduced = Td * res.Y_reduced * Td.transpose();
        res.Y_reduced = 0.5 * (res.Y_reduced + res.Y_reduced.transpose());
    };

    // (i) maximize v_1: minimize b Y^{-1} b^T over primitive b, then move the
    // minimizer into the first column of A^{-1}
    const ShortestResult sv = shortest_vectors(spd_inverse(res.Y_reduced));
    const Eigen::VectorXi b = sv.vectors.front();
    bool is_e1 = b(0) == 1;
    for (int j = 1; j < l; ++j) is_e1 = is_e1 && b(j) == 0;
    if (!is_e1) {
        std::vector<BigInt> bb(l);
        for (int j = 0; j < l; ++j) bb[j] = b(j);
        IntMat W, Winv;
        unimodular_clear_row(bb, W, Winv); // b * W = e_1, so W^{-1} e_1 = b^T
        apply(W.transposed());
    }

    // (ii) recurse on the lower block
    {
        double v1;
        Eigen::RowVectorXd r;
        Eigen::MatrixXd Y1;
        split_corner(res.Y_reduced, v1, r, Y1);
        const GrenierResult sub = grenier_reduce(Y1);
        if (!sub.A.is_identity()) {
            IntMat E = IntMat::identity(l);
            for (int i = 0; i < l - 1; ++i)
                for (int j = 0; j < l - 1; ++j) E(1 + i, 1 + j) = sub.A(i, j);
            apply(E);
        }
    }

    // (iii) translate r into the box and fix the sign of its first entry
    {
        double v1;
        Eigen::RowVectorXd r;
        Eigen::MatrixXd Y1;
        split_corner(res.Y_reduced, v1, r, Y1);
        IntMat T = IntMat::identity(l);
        bool moved = false;
        for (int j = 0; j < l - 1; ++j) {
            const long long k = box_round(r(j));
            if (k != 0) {
                T(0, 1 + j) = -k;
                moved = true;
            }
        }
        if (moved) apply(T);
        split_corner(res.Y_reduced, v1, r, Y1);
        if (r(0) < 0) {
            IntMat F = IntMat::identity(l);
            F(0, 0) = -1;
            apply(F);
        }
    }
    return res;
}

// --- Sp(n,Z) domain -----------------------------------------------------------

ShortestResult v1_min_search(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y) {
    const int n = static_cast<int>(Y.rows());
    const Eigen::MatrixXd Yinv = spd_inverse(Y);
    Eigen::MatrixXd gram(2 * n, 2 * n);
    gram.topLeftCorner(n, n) = Y + X * Yinv * X;
    gram.topRightCorner(n, n) = X * Yinv;
    gram.bottomLeftCorner(n, n) = Yinv * X;
    gram.bottomRightCorner(n, n) = Yinv;
    gram = 0.5 * (gram + gram.transpose()).eval();
    return shortest_vectors(gram);
}

namespace {

bool is_unit_row(const Eigen::VectorXi& v, int idx) {
    for (int i = 0; i < v.size(); ++i)
        if (v(i) != (i == idx ? 1 : 0)) return false;
    return true;
}

struct ReductionState {
    IntegerSymplectic gamma;
    SymplecticMatrix cur;

    void apply(const IntegerSymplectic& w) {
        gamma = w * gamma;
        cur = SymplecticMatrix(w.mat().to_double() * cur.entries());
    }
};

} // namespace

bool dn_member(const SymplecticMatrix& g) {
    const int n = g.n();
    const IwasawaCoords c = iwasawa(g);
    const Eigen::MatrixXd Y = c.Y();
    const ShortestResult sv = v1_min_search(c.X, Y);
    const double q0 = spd_inverse(Y)(0, 0); // = Q(0, e_1) = 1/v_1
    if (q0 > sv.value * (1.0 + kMembershipSlack)) return false;
    const PartialCoords p = partial(g, 1);
    const double t1 = p.T(0, 0);
    if (std::abs(t1) > 0.5 + kMembershipSlack) return false;
    if (n == 1) return true;
    for (int j = 0; j < n - 1; ++j) {
        if (std::abs(p.R(0, j)) > 0.5 + kMembershipSlack) return false;
        if (std::abs(p.S(0, j)) > 0.5 + kMembershipSlack) return false;
    }
    if (p.R(0, 0) < -kMembershipSlack) return false;
    return dn_member(sub_symplectic(p));
}

namespace {

SymplecticReduction dn_reduce_impl(const SymplecticMatrix& g);

// The domain conditions constrain only the N and A parts; the K fiber carries
// a leftover central ambiguity g ~ -g. Pin it by the sign of the entry of
// largest magnitude (row-major first) so reduction is deterministic.
bool wants_sign_flip(const SymplecticMatrix& g) {
    const Eigen::MatrixXd& m = g.entries();
    double best = -1.0;
    bool neg = false;
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            if (std::abs(m(i, j)) > best) {
                best = std::abs(m(i, j));
                neg = m(i, j) < 0;
            }
    return neg;
}

} // namespace

SymplecticReduction dn_reduce(const SymplecticMatrix& g) {
    SymplecticReduction r = dn_reduce_impl(g);
    if (wants_sign_flip(r.reduced)) {
        IntMat minus(2 * g.n(), 2 * g.n());
        for (int i = 0; i < 2 * g.n(); ++i) minus(i, i) = -1;
        const IntegerSymplectic m(minus);
        r.gamma = m * r.gamma;
        r.reduced = SymplecticMatrix(-r.reduced.entries());
        r.coords = iwasawa(r.reduced);
    }
    return r;
}

namespace {

SymplecticReduction dn_reduce_impl(const SymplecticMatrix& g) {
    const int n = g.n();
    if (n > kMaxReductionRank) throw std::invalid_argument("dn_reduce: rank above the enforced maximum");
    if (g.check() > kSymplTol) throw std::invalid_argument("dn_reduce: input is not symplectic");

    ReductionState st{IntegerSymplectic::identity(n), g};

    // maximize v_1 over Gamma
    {
        const IwasawaCoords c = iwasawa(st.cur);
        const ShortestResult sv = v1_min_search(c.X, c.Y());
        const Eigen::VectorXi& pick = sv.vectors.front();
        if (!is_unit_row(pick, n)) st.apply(sympl_complete(pick));
    }

    // reduce the lower symplectic block
    if (n > 1) {
        const PartialCoords p = partial(st.cur, 1);
        const SymplecticReduction sub = dn_reduce_impl(sub_symplectic(p));
        if (!sub.gamma.mat().is_identity()) st.apply(int_sp_embed(n, 1, sub.gamma));
    }

    // translate r_1, s_1, t_1 into the box, then fix the sign of r_1's first entry
    {
        PartialCoords p = partial(st.cur, 1);
        if (n > 1) {
            Eigen::VectorXi rho(n - 1), zero = Eigen::VectorXi::Zero(n - 1);
            bool any = false;
            for (int j = 0; j < n - 1; ++j) {
                rho(j) = static_cast<int>(-box_round(p.R(0, j)));
                any = any || rho(j) != 0;
            }
            if (any) {
                st.apply(int_heis_level1(n, rho, zero, 0));
                p = partial(st.cur, 1);
            }
            Eigen::VectorXi sig(n - 1);
            any = false;
            for (int j = 0; j < n - 1; ++j) {
                sig(j) = static_cast<int>(-box_round(p.S(0, j)));
                any = any || sig(j) != 0;
            }
            if (any) {
                st.apply(int_heis_level1(n, zero, sig, 0));
                p = partial(st.cur, 1);
            }
        }
        const long long tau = -box_round(p.T(0, 0));
        if (tau != 0) {
            st.apply(int_heis_level1(n, Eigen::VectorXi::Zero(std::max(0, n - 1)),
                                     Eigen::VectorXi::Zero(std::max(0, n - 1)), tau));
            p = partial(st.cur, 1);
        }
        if (n > 1 && p.R(0, 0) < 0) st.apply(int_sign_level1(n));
    }

    SymplecticReduction out;
    out.gamma = st.gamma;
    out.reduced = st.cur;
    out.coords = iwasawa(st.cur);
    return out;
}

} // namespace

JacobiReduction jacobi_reduce(const JacobiElement& j) {
    const int n = j.n();
    const SymplecticReduction sr = dn_reduce(j.g);

    const HeisenbergElement hg = h_gamma(sr.gamma);
    const HeisenbergElement moved = heis_mul(hg, heis_action(j.h, sr.gamma.inverse().to_real()));

    JacobiLatticeElement w;
    w.gamma = sr.gamma;
    w.m = Eigen::VectorXi(n);
    w.n_vec = Eigen::VectorXi(n);
    Eigen::VectorXd x(n), y(n);
    for (int i = 0; i < n; ++i) {
        w.m(i) = static_cast<int>(-box_round(moved.x(i)));
        w.n_vec(i) = static_cast<int>(-box_round(moved.y(i)));
        x(i) = moved.x(i) + w.m(i);
        y(i) = moved.y(i) + w.n_vec(i);
    }
    // pick the continuous t so that the reduced element has t = 0 exactly
    w.t = -(moved.t + 0.5 * (w.n_vec.cast<double>().dot(moved.x) - w.m.cast<double>().dot(moved.y)));

    JacobiReduction out;
    out.word = w;
    out.reduced = JacobiElement(HeisenbergElement(x, y, 0.0), sr.reduced);
    return out;
}

CuspQuantities cusp_quantities(const SymplecticMatrix& g, int l) {
    const int n = g.n();
    if (l < 1 || l > n) throw std::invalid_argument("cusp_quantities: l out of range");
    const PartialCoords p = partial(g, l);
    const Eigen::MatrixXd gram = p.U * p.V.asDiagonal() * p.U.transpose();
    CuspQuantities q;
    q.v_l_min = shortest_vectors(0.5 * (gram + gram.transpose())).value;
    if (l < n) {
        const SymplecticReduction sub = dn_reduce(sub_symplectic(p));
        q.v_lplus1_max = sub.coords.V(0);
    }
    return q;
}

SymplecticReduction parabolic_reduce(const SymplecticMatrix& g, int l, double a_l) {
    const int n = g.n();
    const CuspQuantities q = cusp_quantities(g, l);
    const bool hypothesis = (l < n) ? (q.v_l_min >= a_l * *q.v_lplus1_max) : (q.v_l_min >= a_l);
    if (!hypothesis) throw std::invalid_argument("parabolic_reduce: cusp hypothesis v_l >= a_l * v_{l+1} not met");

    SymplecticReduction r = dn_reduce(g);
    if (!in_parabolic(r.gamma, l))
        throw std::runtime_error("parabolic_reduce: reducing word left Gamma_l; a_l is too small for this input");
    if (l < n) {
        const double after = r.coords.V(l); // v_{l+1} of the reduced point
        if (std::abs(after - *q.v_lplus1_max) > 1e-8 * std::max(1.0, *q.v_lplus1_max))
            throw std::logic_error("parabolic_reduce: v_{l+1} was not preserved");
    }
    return r;
}

} // namespace theta
