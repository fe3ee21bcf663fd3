#include "theta/group.hpp"
#include "theta/reduce.hpp"

#include "doctest.h"
#include "helpers.hpp"

using namespace theta;
using namespace theta::testing;

namespace {
Eigen::VectorXd vec1(double a) {
    Eigen::VectorXd v(1);
    v << a;
    return v;
}
} // namespace

TEST_CASE("heisenberg multiplication law") {
    const HeisenbergElement h(vec1(1.3), vec1(-0.4), 0.7);
    const HeisenbergElement e = HeisenbergElement::zero(1);

    auto r = heis_mul(h, e);
    CHECK(r.x(0) == doctest::Approx(1.3));
    CHECK(r.y(0) == doctest::Approx(-0.4));
    CHECK(r.t == doctest::Approx(0.7));

    // (1,0,0)(0,1,0) = (1,1,-1/2)
    r = heis_mul(HeisenbergElement(vec1(1), vec1(0), 0), HeisenbergElement(vec1(0), vec1(1), 0));
    CHECK(r.x(0) == doctest::Approx(1.0));
    CHECK(r.y(0) == doctest::Approx(1.0));
    CHECK(r.t == doctest::Approx(-0.5));

    r = heis_mul(h, h.inverse());
    CHECK(r.x.norm() == doctest::Approx(0.0));
    CHECK(r.t == doctest::Approx(0.0));
}

TEST_CASE("heisenberg action examples") {
    const HeisenbergElement h(vec1(1), vec1(0), 0);
    auto r = heis_action(h, SymplecticMatrix::identity(1));
    CHECK(r.x(0) == doctest::Approx(1.0));

    Eigen::MatrixXd j(2, 2);
    j << 0, -1, 1, 0;
    r = heis_action(h, SymplecticMatrix(j));
    CHECK(r.x(0) == doctest::Approx(0.0));
    CHECK(r.y(0) == doctest::Approx(-1.0));
    CHECK(r.t == doctest::Approx(0.0));
}

TEST_CASE("heisenberg action is an automorphism") {
    Rng rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = uniform_int(rng, 1, 3);
        const auto h1 = random_heisenberg(rng, n);
        const auto h2 = random_heisenberg(rng, n);
        const auto g = random_symplectic(rng, n);
        const auto lhs = heis_action(heis_mul(h1, h2), g);
        const auto rhs = heis_mul(heis_action(h1, g), heis_action(h2, g));
        CHECK((lhs.x - rhs.x).cwiseAbs().maxCoeff() < 1e-10);
        CHECK((lhs.y - rhs.y).cwiseAbs().maxCoeff() < 1e-10);
        CHECK(std::abs(lhs.t - rhs.t) < 1e-10);
    }
}

TEST_CASE("jacobi product") {
    Rng rng(12);
    const auto h1 = random_heisenberg(rng, 2);
    const auto h2 = random_heisenberg(rng, 2);
    const auto id = SymplecticMatrix::identity(2);

    auto r = jacobi_mul(JacobiElement(h1, id), JacobiElement(h2, id));
    const auto direct = heis_mul(h1, h2);
    CHECK((r.h.x - direct.x).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(std::abs(r.h.t - direct.t) < 1e-14);

    const auto g = random_symplectic(rng, 2);
    r = jacobi_mul(JacobiElement(HeisenbergElement::zero(2), g),
                   JacobiElement(HeisenbergElement::zero(2), g.inverse()));
    CHECK(r.h.x.cwiseAbs().maxCoeff() < 1e-12);
    CHECK((r.g.entries() - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("jacobi product is associative") {
    Rng rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = uniform_int(rng, 1, 2);
        const JacobiElement a(random_heisenberg(rng, n), random_symplectic(rng, n));
        const JacobiElement b(random_heisenberg(rng, n), random_symplectic(rng, n));
        const JacobiElement c(random_heisenberg(rng, n), random_symplectic(rng, n));
        const auto lhs = jacobi_mul(jacobi_mul(a, b), c);
        const auto rhs = jacobi_mul(a, jacobi_mul(b, c));
        CHECK((lhs.h.x - rhs.h.x).cwiseAbs().maxCoeff() < 1e-10);
        CHECK((lhs.h.y - rhs.h.y).cwiseAbs().maxCoeff() < 1e-10);
        CHECK(std::abs(lhs.h.t - rhs.h.t) < 1e-10);
        CHECK(max_abs_diff(lhs.g.entries(), rhs.g.entries()) < 1e-10);
    }
}

TEST_CASE("symplectic inverse and defect") {
    CHECK(sympl_check(SymplecticMatrix::identity(2)) == doctest::Approx(0.0));

    Eigen::MatrixXd t(2, 2);
    t << 1, 1, 0, 1;
    CHECK(sympl_check(SymplecticMatrix(t)) == doctest::Approx(0.0));

    Eigen::MatrixXd bad(2, 2);
    bad << 2, 0, 0, 1;
    CHECK(sympl_check(SymplecticMatrix(bad)) == doctest::Approx(1.0));
    CHECK_THROWS_AS(SymplecticMatrix(bad).inverse(), std::invalid_argument);

    Eigen::MatrixXd j(2, 2);
    j << 0, -1, 1, 0;
    const auto jinv = SymplecticMatrix(j).inverse();
    CHECK(max_abs_diff(jinv.entries(), -j) < 1e-15);

    Rng rng(14);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = uniform_int(rng, 1, 3);
        const auto g = random_symplectic(rng, n);
        CHECK(max_abs_diff((g * g.inverse()).entries(), Eigen::MatrixXd::Identity(2 * n, 2 * n)) < 1e-12);
    }
}

TEST_CASE("integer carrier stays exactly symplectic at long word length") {
    Rng rng(15);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = uniform_int(rng, 1, 3);
        const auto w = random_gamma_word(rng, n, 20);
        CHECK(w.is_symplectic());
        CHECK((w * w.inverse()).mat().is_identity());
        CHECK(w.inverse().is_symplectic());
    }
}

TEST_CASE("parity rule for h_gamma") {
    auto r = h_gamma(IntegerSymplectic::identity(2));
    CHECK(r.x.cwiseAbs().maxCoeff() == 0.0);
    CHECK(r.y.cwiseAbs().maxCoeff() == 0.0);

    // [[1,1],[0,1]]: AB^T = 1 odd -> s = 1/2, CD^T = 0 -> r = 0
    IntMat t = IntMat::identity(2);
    t(0, 1) = 1;
    r = h_gamma(IntegerSymplectic(t));
    CHECK(r.x(0) == 0.0);
    CHECK(r.y(0) == 0.5);
    CHECK(r.t == 0.0);

    r = h_gamma(int_J(1));
    CHECK(r.x(0) == 0.0);
    CHECK(r.y(0) == 0.0);
}

TEST_CASE("dimension mismatches are hard errors") {
    CHECK_THROWS_AS(heis_mul(HeisenbergElement::zero(1), HeisenbergElement::zero(2)), std::invalid_argument);
    CHECK_THROWS_AS(heis_action(HeisenbergElement::zero(2), SymplecticMatrix::identity(1)), std::invalid_argument);
    CHECK_THROWS_AS(JacobiElement(HeisenbergElement::zero(2), SymplecticMatrix::identity(1)), std::invalid_argument);
}
