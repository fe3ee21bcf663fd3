#include "theta/cutoff.hpp"

#include <array>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace theta {

namespace {

double bump_integrand(double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    return std::exp(-1.0 / (t * (1.0 - t)));
}

// 64-point Gauss-Legendre nodes/weights on [-1, 1], generated by Newton
// iteration on the Legendre polynomial at startup.
struct GaussLegendre64 {
    std::array<double, 64> x{}, w{};
    GaussLegendre64() {
        const int n = 64;
        for (int i = 0; i < n / 2; ++i) {
            double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = t;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                const double dp = n * (t * p1 - p0) / (t * t - 1.0);
                const double dt = p1 / dp;
                t -= dt;
                if (std::abs(dt) < 1e-16) break;
            }
            double p0 = 1.0, p1 = t;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            const double dp = n * (t * p1 - p0) / (t * t - 1.0);
            x[i] = -t;
            x[n - 1 - i] = t;
            w[i] = w[n - 1 - i] = 2.0 / ((1.0 - t * t) * dp * dp);
        }
    }
};

double gl64_integrate(double a, double b) {
    static const GaussLegendre64 gl;
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double acc = 0.0;
    for (int i = 0; i < 64; ++i) acc += gl.w[i] * bump_integrand(mid + half * gl.x[i]);
    return acc * half;
}

// cumulative table of sigma on [0, 1/2]; values above 1/2 use the symmetry
// sigma(u) = 1 - sigma(1-u) so that the partition identity is exact
struct SigmaTable {
    static constexpr int kPanels = 2048; // on [0, 1/2]
    std::vector<double> val;  // sigma at knots
    std::vector<double> der;  // analytic derivative at knots
    double norm = 0.0;

    SigmaTable() {
        // panel integrals over [0,1] to get the normalizer, halves for the table
        norm = 0.0;
        std::vector<double> panel(2 * kPanels);
        for (int i = 0; i < 2 * kPanels; ++i) {
            panel[i] = gl64_integrate(i * 0.5 / kPanels, (i + 1) * 0.5 / kPanels);
            norm += panel[i];
        }
        val.resize(kPanels + 1);
        der.resize(kPanels + 1);
        double acc = 0.0;
        for (int i = 0; i <= kPanels; ++i) {
            val[i] = acc / norm;
            der[i] = bump_integrand(i * 0.5 / kPanels) / norm;
            if (i < kPanels) acc += panel[i];
        }
    }

    double eval_lower_half(double u) const {
        // cubic Hermite on the enclosing panel
        const double h = 0.5 / kPanels;
        int i = static_cast<int>(u / h);
        if (i >= kPanels) i = kPanels - 1;
        const double s = (u - i * h) / h;
        const double s2 = s * s, s3 = s2 * s;
        const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
        const double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
        return h00 * val[i] + h * h10 * der[i] + h01 * val[i + 1] + h * h11 * der[i + 1];
    }
};

const SigmaTable& sigma_table() {
    static const SigmaTable table;
    return table;
}

} // namespace

double bump_sigma(double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    if (u > 0.5) return 1.0 - sigma_table().eval_lower_half(1.0 - u);
    return sigma_table().eval_lower_half(u);
}

double cutoff_ramp(double x) { return bump_sigma(2.0 * x - 0.5); }

double f1(double x) {
    const double v = cutoff_ramp(2.0 * x) - cutoff_ramp(x);
    return v > 0.0 ? v : 0.0;
}

double fn(const Eigen::VectorXd& x) {
    double p = 1.0;
    for (int i = 0; i < x.size(); ++i) {
        p *= f1(x(i));
        if (p == 0.0) return 0.0;
    }
    return p;
}

double chi_box_decomp(const Eigen::VectorXd& x, const Eigen::VectorXd& b, int j_max) {
    if (x.size() != b.size()) throw std::invalid_argument("chi_box_decomp: dimension mismatch");
    double prod = 1.0;
    for (int i = 0; i < x.size(); ++i) {
        const double u = x(i) / b(i);
        double acc = 0.0;
        double arg0 = u, arg1 = 1.0 - u;
        for (int j = 0; j <= j_max; ++j) {
            acc += f1(arg0) + f1(arg1);
            arg0 *= 2.0;
            arg1 *= 2.0;
        }
        prod *= acc;
        if (prod == 0.0) return 0.0;
    }
    return prod;
}

FlowElements flow_elements(const DyadicIndex& idx) {
    const int n = idx.n();
    Eigen::VectorXd xs = Eigen::VectorXd::Zero(n);
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    for (int i = 0; i < n; ++i) {
        if (idx.j(i) < 0) throw std::invalid_argument("flow_elements: dyadic powers must be nonnegative");
        const double a = std::ldexp(1.0, idx.j(i));
        const double e = idx.S.count(i) ? -1.0 : 1.0;
        g(i, i) = a * e;
        g(n + i, n + i) = e / a;
        if (idx.S.count(i)) xs(i) = -1.0;
    }
    FlowElements f;
    f.h_S = HeisenbergElement(xs, Eigen::VectorXd::Zero(n), 0.0);
    f.g_jS = SymplecticMatrix(g);
    return f;
}

} // namespace theta
