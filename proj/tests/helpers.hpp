#pragma once

// Shared randomized-input builders for the test suites. All generators take an
// explicit engine so each TEST_CASE pins its own seed.

#include "theta/decompose.hpp"
#include "theta/group.hpp"
#include "theta/reduce.hpp"

#include <Eigen/Dense>

#include <random>

namespace theta::testing {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(Rng& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline Eigen::MatrixXd random_symmetric(Rng& rng, int n, double scale = 1.0) {
    Eigen::MatrixXd x(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) x(i, j) = x(j, i) = uniform(rng, -scale, scale);
    return x;
}

inline Eigen::MatrixXd random_spd(Rng& rng, int n, double spread = 1.0) {
    Eigen::MatrixXd b(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) b(i, j) = uniform(rng, -1.0, 1.0);
    return b * b.transpose() + std::exp(uniform(rng, -spread, spread)) * Eigen::MatrixXd::Identity(n, n);
}

inline Eigen::MatrixXcd random_unitary(Rng& rng, int n) {
    Eigen::MatrixXcd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = {uniform(rng, -1, 1), uniform(rng, -1, 1)};
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(m);
    return qr.householderQ();
}

// generic point of Sp(n,R) assembled from random Iwasawa coordinates
inline SymplecticMatrix random_symplectic(Rng& rng, int n, double vspread = 1.0) {
    IwasawaCoords c;
    c.X = random_symmetric(rng, n);
    c.U = Eigen::MatrixXd::Identity(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) c.U(i, j) = uniform(rng, -1.0, 1.0);
    c.V = Eigen::VectorXd(n);
    for (int i = 0; i < n; ++i) c.V(i) = std::exp(uniform(rng, -vspread, vspread));
    c.Q = random_unitary(rng, n);
    return recompose(c);
}

inline HeisenbergElement random_heisenberg(Rng& rng, int n, double scale = 1.0) {
    Eigen::VectorXd x(n), y(n);
    for (int i = 0; i < n; ++i) {
        x(i) = uniform(rng, -scale, scale);
        y(i) = uniform(rng, -scale, scale);
    }
    return HeisenbergElement(x, y, uniform(rng, -scale, scale));
}

// random word in the standard generators of Sp(n,Z)
inline IntegerSymplectic random_gamma_word(Rng& rng, int n, int length) {
    IntegerSymplectic w = IntegerSymplectic::identity(n);
    for (int step = 0; step < length; ++step) {
        const int kind = uniform_int(rng, 0, 2);
        if (kind == 0) {
            w = w * int_J(n);
        } else if (kind == 1) {
            IntMat r(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) {
                    const int v = uniform_int(rng, -2, 2);
                    r(i, j) = v;
                    r(j, i) = v;
                }
            w = w * int_translation(r);
        } else {
            // random elementary GL(n,Z) matrix
            IntMat a = IntMat::identity(n);
            if (n == 1) {
                a(0, 0) = uniform_int(rng, 0, 1) == 0 ? 1 : -1;
            } else {
                const int i = uniform_int(rng, 0, n - 1);
                int j = uniform_int(rng, 0, n - 2);
                if (j >= i) ++j;
                a(i, j) = uniform_int(rng, -2, 2);
            }
            w = w * int_gl(a, int_inverse_unimodular(a));
        }
    }
    return w;
}

inline IntMat random_unimodular(Rng& rng, int n, int ops) {
    IntMat a = IntMat::identity(n);
    for (int k = 0; k < ops; ++k) {
        IntMat e = IntMat::identity(n);
        if (n == 1) {
            e(0, 0) = uniform_int(rng, 0, 1) == 0 ? 1 : -1;
        } else {
            const int i = uniform_int(rng, 0, n - 1);
            int j = uniform_int(rng, 0, n - 2);
            if (j >= i) ++j;
            e(i, j) = uniform_int(rng, -2, 2);
        }
        a = a * e;
    }
    return a;
}

inline double max_abs_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

} // namespace theta::testing
