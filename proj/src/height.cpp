#include "theta/height.hpp"

#include "theta/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace theta {

namespace {

double height_at(const Eigen::VectorXd& x, const Eigen::MatrixXd& Y, const Eigen::VectorXd& V, double A) {
    const double q = x.transpose() * Y * x;
    return V.prod() * std::pow(1.0 + q, -A);
}

} // namespace

double height(const JacobiElement& j, const HeightParams& p) {
    const JacobiReduction r = jacobi_reduce(j);
    const IwasawaCoords c = iwasawa(r.reduced.g);
    const int n = j.n();

    // boundary coordinates of x admit both signs; take the max over them
    std::vector<int> boundary;
    for (int i = 0; i < n; ++i)
        if (std::abs(std::abs(r.reduced.h.x(i)) - 0.5) < 1e-12) boundary.push_back(i);

    double best = 0.0;
    const int combos = 1 << boundary.size();
    for (int mask = 0; mask < combos; ++mask) {
        Eigen::VectorXd x = r.reduced.h.x;
        for (size_t b = 0; b < boundary.size(); ++b)
            if (mask & (1 << b)) x(boundary[b]) = -x(boundary[b]);
        best = std::max(best, height_at(x, c.Y(), c.V, p.A));
    }
    return best;
}

double height_flowed(const JacobiElement& j, double s, const DyadicIndex& idx, const HeightParams& p) {
    const int n = j.n();
    if (s < 0) throw std::invalid_argument("height_flowed: s must be nonnegative");
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    for (int i = 0; i < n; ++i) {
        a(i, i) = std::exp(-s);
        a(n + i, n + i) = std::exp(s);
    }
    const JacobiElement flow(HeisenbergElement::zero(n), SymplecticMatrix(a));
    const FlowElements f = flow_elements(idx);
    const JacobiElement moved = jacobi_mul(jacobi_mul(j, flow), JacobiElement(f.h_S, f.g_jS));
    return height(moved, p);
}

bool g_script_member(const JacobiElement& j, const GrowthPsi& psi, double C, const Eigen::VectorXi& jpow,
                     const std::vector<double>& s_grid, const HeightParams& p) {
    const int n = j.n();
    for (int smask = 0; smask < (1 << n); ++smask) {
        DyadicIndex idx;
        idx.j = jpow;
        for (int i = 0; i < n; ++i)
            if (smask & (1 << i)) idx.S.insert(i);
        for (const double s : s_grid) {
            const double d = height_flowed(j, s, idx, p);
            if (std::pow(d, 0.25) > C * psi(s)) return false;
        }
    }
    return true;
}

std::vector<double> default_s_grid(const Eigen::VectorXi& jpow, double s_max) {
    double kj = 8.0;
    for (int i = 0; i < jpow.size(); ++i) kj *= std::ldexp(1.0, jpow(i));
    std::vector<double> grid;
    for (double s = 1.0; s <= s_max + 1e-12; s += 1.0 / kj) grid.push_back(s);
    return grid;
}

HaarSample haar_sample(int n, SplitRng& rng) {
    if (n != 1 && n != 2) throw std::invalid_argument("haar_sample: only n = 1, 2 are supported");
    const int max_attempts = 100000;

    for (int attempt = 1; attempt <= max_attempts; ++attempt) {
        IwasawaCoords c;
        if (n == 1) {
            const double x = rng.uniform_half_box();
            const double y = (std::sqrt(3.0) / 2.0) / rng.uniform(); // density y^{-2} on [sqrt(3)/2, inf)
            if (x * x + y * y < 1.0) continue;
            c.X = Eigen::MatrixXd::Constant(1, 1, x);
            c.U = Eigen::MatrixXd::Identity(1, 1);
            c.V = Eigen::VectorXd::Constant(1, y);
            c.Q = Eigen::MatrixXcd::Identity(1, 1);
        } else {
            // box coordinates of the domain chart; the Haar density in them is
            // v1^{-3} v2^{-2} (unimodular change of variables)
            const double r1 = 0.5 * rng.uniform();
            const double s1 = rng.uniform_half_box();
            const double t1 = rng.uniform_half_box();
            const double x1 = rng.uniform_half_box();
            const double v2 = (std::sqrt(3.0) / 2.0) * (1.0 - 1e-9) / rng.uniform();
            const double v1 = 0.75 * v2 * (1.0 - 1e-9) / std::sqrt(rng.uniform());
            c.U = Eigen::MatrixXd::Identity(2, 2);
            c.U(0, 1) = r1;
            c.V = Eigen::VectorXd(2);
            c.V << v1, v2;
            c.X = Eigen::MatrixXd(2, 2);
            c.X(1, 1) = x1;
            c.X(0, 1) = c.X(1, 0) = s1 + r1 * x1;
            c.X(0, 0) = t1 + r1 * r1 * x1;
            c.Q = Eigen::MatrixXcd::Identity(2, 2);
        }
        const SymplecticMatrix g = recompose(c);
        if (n == 2 && !dn_member(g)) continue;

        Eigen::VectorXd hx(n), hy(n);
        for (int i = 0; i < n; ++i) {
            hx(i) = rng.uniform_half_box();
            hy(i) = rng.uniform_half_box();
        }
        HaarSample out;
        out.j = JacobiElement(HeisenbergElement(hx, hy, 0.0), g);
        out.attempts = attempt;
        return out;
    }
    throw std::runtime_error("haar_sample: rejection budget exceeded");
}

TailFit tail_fit(const std::vector<double>& samples, const std::vector<double>& r_grid) {
    std::vector<double> sorted = samples;
    std::sort(sorted.begin(), sorted.end());
    const double N = static_cast<double>(sorted.size());

    std::vector<double> lx, ly;
    for (const double r : r_grid) {
        const auto it = std::lower_bound(sorted.begin(), sorted.end(), r);
        const double count = static_cast<double>(sorted.end() - it);
        const double prob = count / N;
        if (count < 100.0 || prob > 0.5) continue;
        lx.push_back(std::log(r));
        ly.push_back(std::log(prob));
    }
    if (lx.size() < 3) throw std::invalid_argument("tail_fit: insufficient tail mass on the grid");

    const double m = static_cast<double>(lx.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    const double xbar = sx / m, ybar = sy / m;
    const double sxx_c = sxx - m * xbar * xbar;
    const double slope = (sxy - m * xbar * ybar) / sxx_c;

    double ss_res = 0;
    for (size_t i = 0; i < lx.size(); ++i) {
        const double fit = ybar + slope * (lx[i] - xbar);
        ss_res += (ly[i] - fit) * (ly[i] - fit);
    }
    TailFit out;
    out.exponent = slope;
    out.stderr_ = m > 2 ? std::sqrt(ss_res / (m - 2) / sxx_c) : 0.0;
    out.points_used = static_cast<int>(m);
    return out;
}

std::vector<double> default_r_grid(const std::vector<double>& samples, int points) {
    std::vector<double> sorted = samples;
    std::sort(sorted.begin(), sorted.end());
    const size_t n = sorted.size();
    if (n < 1000) throw std::invalid_argument("default_r_grid: need at least 1000 samples");
    const double lo = sorted[n / 2];
    const double hi = sorted[n - 1 - 100];
    std::vector<double> grid;
    for (int i = 0; i < points; ++i)
        grid.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1)));
    return grid;
}

} // namespace theta
