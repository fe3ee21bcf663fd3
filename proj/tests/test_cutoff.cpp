#include "theta/cutoff.hpp"

#include "doctest.h"
#include "helpers.hpp"

#include <array>
#include <cmath>
#include <vector>

using namespace theta;
using namespace theta::testing;

namespace {

// high-resolution Simpson oracle for sigma, independent of the table path
double sigma_oracle(double u) {
    if (u <= 0) return 0;
    if (u >= 1) return 1;
    auto f = [](double t) { return (t <= 0 || t >= 1) ? 0.0 : std::exp(-1.0 / (t * (1 - t))); };
    const int steps = 20000;
    auto simpson = [&](double a, double b) {
        const double h = (b - a) / steps;
        double acc = f(a) + f(b);
        for (int i = 1; i < steps; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
        return acc * h / 3.0;
    };
    return simpson(0, u) / simpson(0, 1);
}

} // namespace

TEST_CASE("sigma table matches a high-resolution quadrature") {
    for (double u : {0.01, 0.1, 0.25, 0.37, 0.5, 0.61, 0.75, 0.9, 0.99}) {
        CHECK(std::abs(bump_sigma(u) - sigma_oracle(u)) < 1e-13);
    }
    CHECK(bump_sigma(0.0) == 0.0);
    CHECK(bump_sigma(1.0) == 1.0);
    // symmetry up to the rounding of the reflected argument itself
    for (double u : {0.1, 0.33, 0.48, 0.77}) CHECK(std::abs(bump_sigma(u) + bump_sigma(1 - u) - 1.0) < 1e-15);
}

TEST_CASE("f1 support and values") {
    CHECK(f1(-0.3) == 0.0);
    CHECK(f1(1.0) == 0.0);
    CHECK(f1(0.0) == 0.0);
    CHECK(f1(0.1) == 0.0);       // below 1/8
    CHECK(f1(0.76) == 0.0);      // above 3/4
    CHECK(f1(0.3) > 0.0);
    for (double x = -1.0; x <= 2.0; x += 0.001) CHECK(f1(x) >= 0.0);
}

TEST_CASE("dyadic partition of unity on the interval") {
    // spot value from the spec
    double acc = 0.0;
    for (int j = 0; j <= 6; ++j) acc += f1(std::ldexp(0.37, j)) + f1(std::ldexp(0.63, j));
    CHECK(std::abs(acc - 1.0) < 1e-12);

    Rng rng(61);
    const double delta = std::ldexp(1.0, -10);
    for (int trial = 0; trial < 10000; ++trial) {
        const double x = uniform(rng, delta, 1.0 - delta);
        double s = 0.0;
        for (int j = 0; j <= 12; ++j) s += f1(std::ldexp(x, j)) + f1(std::ldexp(1.0 - x, j));
        CHECK(std::abs(s - 1.0) < 1e-12);
    }
    // outside the closed interval the sum vanishes
    for (double x : {-0.5, -0.01, 1.01, 1.5}) {
        double s = 0.0;
        for (int j = 0; j <= 12; ++j) s += f1(std::ldexp(x, j)) + f1(std::ldexp(1.0 - x, j));
        CHECK(s == 0.0);
    }
}

TEST_CASE("box decomposition") {
    Eigen::VectorXd b(2);
    b << 1.5, 0.8;
    Eigen::VectorXd x(2);

    x << -0.2, 0.4; // outside
    CHECK(chi_box_decomp(x, b, 12) == 0.0);
    x << 0.75, 0.4; // center
    CHECK(std::abs(chi_box_decomp(x, b, 12) - 1.0) < 1e-12);
    x << 0.0, 0.4; // on a face: open box
    CHECK(chi_box_decomp(x, b, 12) == 0.0);
    x << 1.5, 0.4;
    CHECK(chi_box_decomp(x, b, 12) == 0.0);
}

TEST_CASE("fn is the coordinate product") {
    Eigen::VectorXd x(2);
    x << 0.3, 0.42;
    CHECK(fn(x) == doctest::Approx(f1(0.3) * f1(0.42)));
    x << 0.3, -1.0;
    CHECK(fn(x) == 0.0);
}

TEST_CASE("flow elements") {
    auto f = flow_elements(DyadicIndex::zero(2));
    CHECK(f.h_S.x.cwiseAbs().maxCoeff() == 0.0);
    CHECK(max_abs_diff(f.g_jS.entries(), Eigen::MatrixXd::Identity(4, 4)) == 0.0);

    DyadicIndex idx;
    idx.j = Eigen::VectorXi::Constant(1, 1);
    idx.S = {0};
    f = flow_elements(idx);
    CHECK(f.h_S.x(0) == -1.0);
    CHECK(f.g_jS.entries()(0, 0) == -2.0);
    CHECK(f.g_jS.entries()(1, 1) == -0.5);
    CHECK(sympl_check(f.g_jS) == 0.0);

    Rng rng(62);
    for (int trial = 0; trial < 50; ++trial) {
        DyadicIndex r;
        const int n = uniform_int(rng, 1, 3);
        r.j = Eigen::VectorXi(n);
        for (int i = 0; i < n; ++i) {
            r.j(i) = uniform_int(rng, 0, 6);
            if (uniform_int(rng, 0, 1)) r.S.insert(i);
        }
        CHECK(sympl_check(flow_elements(r).g_jS) == 0.0);
    }
}

TEST_CASE("smoothness proxy: finite differences up to order four stay bounded") {
    const double h = 1e-3;
    std::vector<std::array<double, 5>> grid;
    for (double x = 0.0; x <= 0.85; x += h) {
        std::array<double, 5> d{};
        d[0] = f1(x);
        for (int k = 1; k <= 4; ++k) {
            double acc = 0.0;
            for (int i = 0; i <= k; ++i) {
                const double c = std::tgamma(k + 1.0) / (std::tgamma(i + 1.0) * std::tgamma(k - i + 1.0));
                acc += ((k - i) % 2 ? -1.0 : 1.0) * c * f1(x + (i - k / 2.0) * h);
            }
            d[k] = acc / std::pow(h, k);
        }
        grid.push_back(d);
    }
    std::array<double, 5> mx{};
    for (const auto& d : grid)
        for (int k = 0; k <= 4; ++k) mx[k] = std::max(mx[k], std::abs(d[k]));
    CHECK(mx[4] < 1e6); // bounded fourth difference
    // a jump in d_k would be O(max|d_k|); smooth data moves by O(h max|d_{k+1}|)
    for (size_t i = 1; i < grid.size(); ++i)
        for (int k = 0; k <= 3; ++k)
            CHECK(std::abs(grid[i][k] - grid[i - 1][k]) < 10.0 * h * mx[k + 1] + 1e-9);
}
