#pragma once

// Theta-sum evaluation: the finite box sum, Schwartz-cutoff sums (Gaussian and
// dyadic pieces), the theta function on the Jacobi group for the Gaussian, and
// the automorphy-defect oracle.
//
// Phase convention throughout: e(z) = exp(2 pi i z).

#include "theta/cutoff.hpp"
#include "theta/group.hpp"
#include "theta/kernels.hpp"

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>

namespace theta {

struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class CutoffKind { box, gaussian, fn_piece };

struct ThetaRequest {
    double M = 1.0;
    Eigen::MatrixXd X;   // symmetric n x n
    Eigen::VectorXd x;
    Eigen::VectorXd y;
    Eigen::VectorXd box; // b entries > 0; used by box and fn_piece cutoffs
    CutoffKind cutoff = CutoffKind::box;
    DyadicIndex piece;   // for fn_piece

    int n() const { return static_cast<int>(x.size()); }
};

struct ThetaValue {
    std::complex<double> value{0.0, 0.0};
    double truncation_bound = 0.0; // absolute; 0 for exact finite sums
};

struct EvalOptions {
    KernelKind kernel = KernelKind::rotor;
    long long lattice_budget = 1LL << 27; // total points per request
    int threads = 0;                      // 0: THETATOOL_THREADS or hardware count
    long long chunk_rows = 64;            // fixed chunk size keeps parallel sums reproducible
    double gauss_tail = 1e-15;            // Schwartz-tail target in sum units
};

// finite sum over the open box, exact up to per-term rounding
ThetaValue theta_box(const ThetaRequest& req, const EvalOptions& opt = {});

// gaussian or fn_piece cutoff
ThetaValue theta_schwartz(const ThetaRequest& req, const EvalOptions& opt = {});

// the box sum assembled from its dyadic pieces; cross-validation oracle for
// theta_box
ThetaValue theta_box_via_dyadic(const ThetaRequest& req, const EvalOptions& opt = {});

struct BigThetaValue {
    std::complex<double> value{0.0, 0.0};
    double truncation_bound = 0.0;
    bool phase_exact = true; // the k(Q) factor only contributes a unimodular
                             // scalar for the Gaussian; phase is pinned when Q = I
};

BigThetaValue big_theta_gaussian(const JacobiElement& j, double tail_target = 1e-15);

// | |Theta(word j)| - |Theta(j)| | / |Theta(j)|
double automorphy_defect(const JacobiElement& j, const JacobiLatticeElement& word);

int resolve_thread_count(int requested);

// phase polynomial of one lattice row: phase(k) = 1/2 m X m^T + m y^T with
// m = (outer, a + k); exposed for incremental grid evaluation
PhasePoly theta_row_phase(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                          const std::vector<long long>& outer, long long a);

} // namespace theta
