#pragma once

// Shortest-vector machinery for small positive definite Gram matrices
// (dimension <= 8 here). LLL preprocessing keeps the branch-and-bound
// enumeration tree small even for badly skewed forms.

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace theta {

struct ShortestResult {
    double value = 0.0;                  // minimum of x G x^T over nonzero integer x
    std::vector<Eigen::VectorXi> vectors; // all minimizers up to global sign, lex-sorted,
                                          // first nonzero entry positive
};

// All nonzero integer vectors attaining the minimum of the form, within
// relative tolerance 1e-12 of each other.
ShortestResult shortest_vectors(const Eigen::MatrixXd& gram);

// Enumerates x in Z^d with (x + center) G (x + center)^T <= r2.
void for_each_lattice_point(const Eigen::MatrixXd& gram, const Eigen::VectorXd& center, double r2,
                            const std::function<void(const Eigen::VectorXi&)>& fn);

// LLL on a Gram matrix; returns the unimodular transform U with
// G_reduced = U G U^T. Throws if transform entries leave the int64 safety range.
Eigen::MatrixXi lll_reduce_gram(Eigen::MatrixXd& gram, double delta = 0.99);

} // namespace theta
