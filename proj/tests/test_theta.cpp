#include "theta/theta_eval.hpp"

#include "theta/decompose.hpp"
#include "theta/reduce.hpp"

#include "doctest.h"
#include "helpers.hpp"

using namespace theta;
using namespace theta::testing;

namespace {

ThetaRequest request1(double M, double X, double x, double y, double b) {
    ThetaRequest r;
    r.M = M;
    r.X = Eigen::MatrixXd::Constant(1, 1, X);
    r.x = Eigen::VectorXd::Constant(1, x);
    r.y = Eigen::VectorXd::Constant(1, y);
    r.box = Eigen::VectorXd::Constant(1, b);
    return r;
}

ThetaRequest random_request(Rng& rng, int n, double Mmax) {
    ThetaRequest r;
    r.M = uniform(rng, 4.0, Mmax);
    r.X = random_symmetric(rng, n, 0.5);
    r.x = Eigen::VectorXd(n);
    r.y = Eigen::VectorXd(n);
    r.box = Eigen::VectorXd(n);
    for (int i = 0; i < n; ++i) {
        r.x(i) = uniform(rng, -1, 1);
        r.y(i) = uniform(rng, -0.5, 0.5);
        r.box(i) = uniform(rng, 0.5, 1.5);
    }
    return r;
}

} // namespace

TEST_CASE("finite box sums") {
    // lattice count
    auto v = theta_box(request1(5, 0, 0, 0, 1));
    CHECK(v.value.real() == doctest::Approx(4.0));
    CHECK(v.value.imag() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(v.truncation_bound == 0.0);

    // alternating sum of e(m^2/2) = (-1)^m over m = 1..4
    v = theta_box(request1(5, 1, 0, 0, 1));
    CHECK(std::abs(v.value) < 1e-12);

    // classical Gauss sum: sum_{m=1..4} e(m^2/4) = 2 + 2i
    v = theta_box(request1(4, 0.5, -0.5, 0, 1));
    CHECK(v.value.real() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(v.value.imag() == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("box sum invariances") {
    Rng rng(81);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = uniform_int(rng, 1, 2);
        const auto req = random_request(rng, n, 40.0);
        const auto base = theta_box(req).value;

        // y -> y + integer vector leaves the sum unchanged term by term
        ThetaRequest shifted = req;
        for (int i = 0; i < n; ++i) shifted.y(i) += uniform_int(rng, -3, 3);
        CHECK(std::abs(theta_box(shifted).value - base) < 1e-10 * std::max(1.0, std::abs(base)));

        // conjugation: (M, -X, x, -y) gives the conjugate sum
        ThetaRequest conj = req;
        conj.X = -req.X;
        conj.y = -req.y;
        const auto cv = theta_box(conj).value;
        CHECK(std::abs(cv - std::conj(base)) < 1e-10 * std::max(1.0, std::abs(base)));
    }
}

TEST_CASE("budget is enforced") {
    auto req = request1(1e9, 0.1, 0, 0, 1);
    EvalOptions opt;
    opt.lattice_budget = 1000;
    CHECK_THROWS_AS(theta_box(req, opt), BudgetError);
}

TEST_CASE("gaussian cutoff sums") {
    ThetaRequest r = request1(1, 0, 0, 0, 1);
    r.cutoff = CutoffKind::gaussian;
    auto v = theta_schwartz(r);
    CHECK(v.value.real() == doctest::Approx(1.0864348112).epsilon(1e-9));
    CHECK(v.truncation_bound < 1e-12);

    // Riemann limit: value -> M for large M (X = y = 0)
    r = request1(50, 0, 0, 0, 1);
    r.cutoff = CutoffKind::gaussian;
    v = theta_schwartz(r);
    CHECK(std::abs(v.value.real() - 50.0) / 50.0 < 1e-3);
}

TEST_CASE("fn piece with empty support vanishes") {
    ThetaRequest r = request1(8, 0.3, 0.1, 0.2, 1);
    r.cutoff = CutoffKind::fn_piece;
    r.piece = DyadicIndex::zero(1);
    r.piece.j(0) = 25; // support collapses far below the lattice spacing
    const auto v = theta_schwartz(r);
    CHECK(v.value == std::complex<double>(0.0, 0.0));
}

TEST_CASE("dyadic decomposition reproduces the box sum") {
    // frozen examples first
    for (auto req : {request1(5, 0, 0, 0, 1), request1(5, 1, 0, 0, 1), request1(4, 0.5, -0.5, 0, 1)}) {
        const auto direct = theta_box(req).value;
        const auto dyadic = theta_box_via_dyadic(req).value;
        CHECK(std::abs(direct - dyadic) < 1e-9 * std::max(1.0, std::abs(direct)));
    }
    Rng rng(82);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = uniform_int(rng, 1, 2);
        const auto req = random_request(rng, n, n == 1 ? 200.0 : 64.0);
        const auto direct = theta_box(req).value;
        const auto dyadic = theta_box_via_dyadic(req).value;
        CHECK(std::abs(direct - dyadic) < 1e-9 * std::max(1.0, std::abs(direct)));
    }
}

TEST_CASE("big theta for the gaussian") {
    // theta constant at the identity
    const JacobiElement id(HeisenbergElement::zero(1), SymplecticMatrix::identity(1));
    auto v = big_theta_gaussian(id);
    CHECK(v.value.real() == doctest::Approx(1.0864348112).epsilon(1e-9));
    CHECK(v.phase_exact);

    // one-term dominance at y = 100
    Eigen::MatrixXd a(2, 2);
    a << 10.0, 0, 0, 0.1;
    const JacobiElement deep(HeisenbergElement::zero(1), SymplecticMatrix(a));
    v = big_theta_gaussian(deep);
    CHECK(std::abs(v.value) == doctest::Approx(std::pow(100.0, 0.25)).epsilon(1e-10));

    // t-shift rotates the phase, modulus unchanged
    Eigen::VectorXd z = Eigen::VectorXd::Zero(1);
    const JacobiElement shifted(HeisenbergElement(z, z, 0.37), SymplecticMatrix(a));
    const auto vs = big_theta_gaussian(shifted);
    CHECK(std::abs(vs.value) == doctest::Approx(std::abs(v.value)).epsilon(1e-12));
    CHECK(std::abs(vs.value - v.value * e2pi(-0.37)) < 1e-10);
}

TEST_CASE("automorphy defect") {
    Rng rng(83);
    // identity word
    const JacobiElement j0(random_heisenberg(rng, 1, 0.4), testing::random_symplectic(rng, 1));
    CHECK(automorphy_defect(j0, JacobiLatticeElement::identity(1)) == doctest::Approx(0.0));

    // inversion on a(y = 2)
    Eigen::MatrixXd ay(2, 2);
    ay << std::sqrt(2.0), 0, 0, 1 / std::sqrt(2.0);
    JacobiLatticeElement w = JacobiLatticeElement::identity(1);
    w.gamma = int_J(1);
    CHECK(automorphy_defect(JacobiElement(HeisenbergElement::zero(1), SymplecticMatrix(ay)), w) < 1e-10);

    // translation with its parity element, random base point
    IntMat t = IntMat::identity(2);
    t(0, 1) = 1;
    JacobiLatticeElement wt = JacobiLatticeElement::identity(1);
    wt.gamma = IntegerSymplectic(t);
    const JacobiElement j1(random_heisenberg(rng, 1, 0.4), testing::random_symplectic(rng, 1));
    CHECK(automorphy_defect(j1, wt) < 1e-10);
}

TEST_CASE("kernel equivalence and parallel determinism on theta sums") {
    Rng rng(84);
    std::vector<KernelKind> kinds = {KernelKind::naive, KernelKind::rotor, KernelKind::parallel};
    if (simd_available()) kinds.push_back(KernelKind::simd);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = uniform_int(rng, 1, 2);
        const auto req = random_request(rng, n, n == 1 ? 3000.0 : 80.0);
        EvalOptions opt;
        opt.kernel = kinds[0];
        const auto ref = theta_box(req, opt).value;
        for (auto kind : kinds) {
            EvalOptions o;
            o.kernel = kind;
            CHECK(std::abs(theta_box(req, o).value - ref) < 1e-10 * std::max(1.0, std::abs(ref)));
        }
        // parallel result is bit-identical across repeated runs and thread counts
        EvalOptions p1, p2;
        p1.kernel = p2.kernel = KernelKind::parallel;
        p1.threads = 1;
        p2.threads = 7;
        const auto a = theta_box(req, p1).value;
        const auto b = theta_box(req, p2).value;
        CHECK(a.real() == b.real());
        CHECK(a.imag() == b.imag());
    }
}
