#include "theta/enumeration.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace theta {

namespace {

// Gram-Schmidt data recomputed from the Gram matrix. Dimensions are tiny, so
// a full O(d^3) recompute after every basis operation is the simple choice.
struct Gso {
    Eigen::MatrixXd mu;
    Eigen::VectorXd B;
};

Gso compute_gso(const Eigen::MatrixXd& g) {
    const int d = static_cast<int>(g.rows());
    Gso s;
    s.mu = Eigen::MatrixXd::Zero(d, d);
    s.B = Eigen::VectorXd::Zero(d);
    // r(i,j) = <b_i, b*_j>
    Eigen::MatrixXd r = Eigen::MatrixXd::Zero(d, d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < i; ++j) {
            double v = g(i, j);
            for (int k = 0; k < j; ++k) v -= s.mu(j, k) * r(i, k);
            r(i, j) = v;
            s.mu(i, j) = v / s.B(j);
        }
        double v = g(i, i);
        for (int k = 0; k < i; ++k) v -= s.mu(i, k) * r(i, k);
        s.B(i) = v;
        if (!(v > 0)) throw std::invalid_argument("lll: Gram matrix not positive definite");
        s.mu(i, i) = 1.0;
    }
    return s;
}

void check_transform(const Eigen::MatrixXi& u) {
    if (u.cwiseAbs().maxCoeff() > (1 << 30))
        throw std::runtime_error("lll: transform entries exceed safety range");
}

// basis op b_i <- b_i + q b_j, applied to the Gram matrix and the transform
void add_row(Eigen::MatrixXd& g, Eigen::MatrixXi& u, int i, int j, long long q) {
    const int d = static_cast<int>(g.rows());
    const double qd = static_cast<double>(q);
    const double gii = g(i, i) + 2.0 * qd * g(i, j) + qd * qd * g(j, j);
    for (int k = 0; k < d; ++k) g(i, k) += qd * g(j, k);
    g(i, i) = gii;
    for (int k = 0; k < d; ++k) g(k, i) = g(i, k);
    u.row(i) += static_cast<int>(q) * u.row(j);
}

} // namespace

Eigen::MatrixXi lll_reduce_gram(Eigen::MatrixXd& gram, double delta) {
    const int d = static_cast<int>(gram.rows());
    Eigen::MatrixXi u = Eigen::MatrixXi::Identity(d, d);
    if (d <= 1) return u;
    int iter_guard = 100000;
    int k = 1;
    Gso s = compute_gso(gram);
    while (k < d) {
        if (--iter_guard <= 0) throw std::runtime_error("lll: iteration guard tripped");
        // size-reduce b_k against b_{k-1}..b_0
        for (int j = k - 1; j >= 0; --j) {
            const double m = s.mu(k, j);
            if (std::abs(m) > 0.5) {
                const long long q = std::llround(m);
                add_row(gram, u, k, j, -q);
                check_transform(u);
                s = compute_gso(gram);
            }
        }
        if (s.B(k) >= (delta - s.mu(k, k - 1) * s.mu(k, k - 1)) * s.B(k - 1)) {
            ++k;
        } else {
            gram.row(k).swap(gram.row(k - 1));
            gram.col(k).swap(gram.col(k - 1));
            u.row(k).swap(u.row(k - 1));
            s = compute_gso(gram);
            k = std::max(k - 1, 1);
        }
    }
    return u;
}

ShortestResult shortest_vectors(const Eigen::MatrixXd& gram_in) {
    const int d = static_cast<int>(gram_in.rows());
    Eigen::MatrixXd g = 0.5 * (gram_in + gram_in.transpose());
    const Eigen::MatrixXi u = lll_reduce_gram(g);
    const Gso s = compute_gso(g);

    // Q(x) = sum_i B_i (x_i + sum_{j>i} mu_{ji} x_j)^2
    const double rel = 1e-12;
    double best = g.diagonal().minCoeff();
    std::vector<std::pair<Eigen::VectorXi, double>> found; // (vector, reduced-gram value)

    Eigen::VectorXi x = Eigen::VectorXi::Zero(d);

    // depth-first over levels i = d-1 .. 0
    std::function<void(int, double)> descend = [&](int i, double acc) {
        if (i < 0) {
            if (x.isZero()) return;
            if (acc < best * (1.0 - rel)) {
                best = acc;
            }
            if (acc <= best * (1.0 + rel)) {
                Eigen::VectorXi v = (x.transpose() * u).transpose();
                // canonical sign: first nonzero entry positive
                for (int k = 0; k < d; ++k) {
                    if (v(k) != 0) {
                        if (v(k) < 0) v = -v;
                        break;
                    }
                }
                found.emplace_back(std::move(v), acc);
            }
            return;
        }
        double c = 0.0;
        for (int j = i + 1; j < d; ++j) c += s.mu(j, i) * x(j);
        const double budget = best * (1.0 + rel) - acc;
        if (budget < 0) return;
        const double half_width = std::sqrt(budget / s.B(i));
        const long long lo = static_cast<long long>(std::ceil(-c - half_width - 1e-9));
        const long long hi = static_cast<long long>(std::floor(-c + half_width + 1e-9));
        for (long long xi = lo; xi <= hi; ++xi) {
            x(i) = static_cast<int>(xi);
            const double term = s.B(i) * (xi + c) * (xi + c);
            if (acc + term <= best * (1.0 + rel)) descend(i - 1, acc + term);
        }
        x(i) = 0;
    };
    descend(d - 1, 0.0);

    // the tolerance window admitted values that may no longer be within
    // tolerance of the final minimum; filter on the recorded values (the
    // original Gram would cancel catastrophically for skewed forms), dedupe
    ShortestResult r;
    r.value = best;
    std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
        return std::lexicographical_compare(a.first.data(), a.first.data() + a.first.size(), b.first.data(),
                                            b.first.data() + b.first.size());
    });
    found.erase(std::unique(found.begin(), found.end(),
                            [](const auto& a, const auto& b) { return a.first == b.first; }),
                found.end());
    for (const auto& [v, q] : found)
        if (q <= best * (1.0 + 2 * rel)) r.vectors.push_back(v);
    if (r.vectors.empty()) throw std::logic_error("shortest_vectors: minimizer set came out empty");
    return r;
}

void for_each_lattice_point(const Eigen::MatrixXd& gram_in, const Eigen::VectorXd& center, double r2,
                            const std::function<void(const Eigen::VectorXi&)>& fn) {
    const int d = static_cast<int>(gram_in.rows());
    const Eigen::MatrixXd g = 0.5 * (gram_in + gram_in.transpose());
    const Gso s = compute_gso(g);
    Eigen::VectorXi x = Eigen::VectorXi::Zero(d);
    // Q(x + t) = sum_i B_i (x_i + t_i + sum_{j>i} mu_{ji} (x_j + t_j))^2
    std::function<void(int, double)> descend = [&](int i, double acc) {
        if (i < 0) {
            fn(x);
            return;
        }
        double c = center(i);
        for (int j = i + 1; j < d; ++j) c += s.mu(j, i) * (x(j) + center(j));
        const double budget = r2 - acc;
        if (budget < 0) return;
        const double half_width = std::sqrt(budget / s.B(i));
        const long long lo = static_cast<long long>(std::ceil(-c - half_width - 1e-12));
        const long long hi = static_cast<long long>(std::floor(-c + half_width + 1e-12));
        for (long long xi = lo; xi <= hi; ++xi) {
            x(i) = static_cast<int>(xi);
            const double v = xi + c;
            const double term = s.B(i) * v * v;
            if (acc + term <= r2) descend(i - 1, acc + term);
        }
        x(i) = 0;
    };
    descend(d - 1, 0.0);
}

} // namespace theta
