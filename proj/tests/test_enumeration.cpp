#include "theta/enumeration.hpp"
#include "theta/reduce.hpp"

#include "doctest.h"
#include "helpers.hpp"

#include <set>

using namespace theta;
using namespace theta::testing;

namespace {

// independent oracle: exhaustive search over a coefficient box
double brute_min(const Eigen::MatrixXd& g, int radius, std::set<std::vector<int>>* argmins = nullptr) {
    const int d = static_cast<int>(g.rows());
    double best = 1e300;
    std::vector<int> x(d, -radius);
    while (true) {
        bool zero = true;
        for (int v : x) zero = zero && v == 0;
        if (!zero) {
            Eigen::VectorXd xv(d);
            for (int i = 0; i < d; ++i) xv(i) = x[i];
            const double q = xv.transpose() * g * xv;
            if (q < best * (1 - 1e-12)) {
                best = q;
                if (argmins) argmins->clear();
            }
            if (argmins && q <= best * (1 + 1e-12)) {
                std::vector<int> c = x;
                for (int i = 0; i < d; ++i) {
                    if (c[i] != 0) {
                        if (c[i] < 0)
                            for (auto& e : c) e = -e;
                        break;
                    }
                }
                argmins->insert(c);
            }
        }
        int k = 0;
        while (k < d && x[k] == radius) x[k++] = -radius;
        if (k == d) break;
        ++x[k];
    }
    return best;
}

} // namespace

TEST_CASE("shortest vectors of the identity form") {
    const auto r = shortest_vectors(Eigen::MatrixXd::Identity(3, 3));
    CHECK(r.value == doctest::Approx(1.0));
    CHECK(r.vectors.size() == 3); // unit vectors, up to sign
}

TEST_CASE("shortest value survives a unimodular disguise") {
    Rng rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        const int d = uniform_int(rng, 2, 4);
        Eigen::VectorXd diag(d);
        double dmin = 1e300;
        for (int i = 0; i < d; ++i) {
            diag(i) = std::exp(uniform(rng, -2, 2));
            dmin = std::min(dmin, diag(i));
        }
        const IntMat u = random_unimodular(rng, d, 6);
        const Eigen::MatrixXd ud = u.to_double();
        const Eigen::MatrixXd gram = ud * diag.asDiagonal() * ud.transpose();
        // known minimum: the diagonal form's smallest entry (diagonal dominance
        // of the original basis guarantees no integer combination goes lower)
        const auto r = shortest_vectors(gram);
        CHECK(r.value == doctest::Approx(dmin).epsilon(1e-10));
    }
}

TEST_CASE("shortest vectors match brute force in low dimension") {
    Rng rng(32);
    for (int trial = 0; trial < 100; ++trial) {
        const int d = uniform_int(rng, 2, 3);
        const Eigen::MatrixXd g = random_spd(rng, d, 1.5);
        std::set<std::vector<int>> oracle_set;
        const double oracle = brute_min(g, 8, &oracle_set);
        const auto r = shortest_vectors(g);
        CHECK(r.value == doctest::Approx(oracle).epsilon(1e-10));
        std::set<std::vector<int>> got;
        for (const auto& v : r.vectors) {
            std::vector<int> c(v.data(), v.data() + v.size());
            got.insert(c);
        }
        CHECK(got == oracle_set);
    }
}

TEST_CASE("v1 minimizer search on the sl2 model") {
    Eigen::MatrixXd X(1, 1), Y(1, 1);

    X << 0;
    Y << 5;
    auto r = v1_min_search(X, Y);
    CHECK(r.value == doctest::Approx(0.2));
    REQUIRE(r.vectors.size() == 1);
    CHECK(r.vectors[0](0) == 0);
    CHECK(r.vectors[0](1) == 1);

    Y << 0.2;
    r = v1_min_search(X, Y);
    REQUIRE(r.vectors.size() == 1);
    CHECK(r.value == doctest::Approx(0.2));
    CHECK(r.vectors[0](0) == 1);
    CHECK(r.vectors[0](1) == 0);

    Y << 1;
    r = v1_min_search(X, Y);
    CHECK(r.value == doctest::Approx(1.0));
    CHECK(r.vectors.size() == 2); // tie between (0,1) and (1,0)
}

TEST_CASE("v1 minimizer search against brute force with shear") {
    Rng rng(33);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = uniform_int(rng, 1, 2);
        const Eigen::MatrixXd X = random_symmetric(rng, n);
        const Eigen::MatrixXd Y = random_spd(rng, n);
        const Eigen::MatrixXd Yinv = Y.llt().solve(Eigen::MatrixXd::Identity(n, n));
        // oracle: direct evaluation of Q(c, d) over a box
        double best = 1e300;
        const int radius = 6;
        Eigen::VectorXi cd(2 * n);
        std::vector<int> x(2 * n, -radius);
        while (true) {
            bool zero = true;
            for (int v : x) zero = zero && v == 0;
            if (!zero) {
                Eigen::RowVectorXd c(n), d(n);
                for (int i = 0; i < n; ++i) {
                    c(i) = x[i];
                    d(i) = x[n + i];
                }
                const Eigen::RowVectorXd cxd = c * X + d;
                const double q = (c * Y * c.transpose())(0) + (cxd * Yinv * cxd.transpose())(0);
                best = std::min(best, q);
            }
            int k = 0;
            while (k < 2 * n && x[k] == radius) x[k++] = -radius;
            if (k == 2 * n) break;
            ++x[k];
        }
        const auto r = v1_min_search(X, Y);
        CHECK(r.value == doctest::Approx(best).epsilon(1e-9));
    }
}
