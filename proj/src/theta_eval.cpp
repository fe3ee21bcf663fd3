#include "theta/theta_eval.hpp"

#include "theta/decompose.hpp"
#include "theta/enumeration.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace theta {

int resolve_thread_count(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("THETATOOL_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

namespace {

struct AxisRange {
    long long lo = 0, hi = -1; // integers m with lo <= m <= hi
    long long count() const { return hi < lo ? 0 : hi - lo + 1; }
};

// integers strictly inside the open interval (a, b)
AxisRange open_range(double a, double b) {
    AxisRange r;
    r.lo = static_cast<long long>(std::floor(a)) + 1;
    r.hi = static_cast<long long>(std::ceil(b)) - 1;
    return r;
}

} // namespace

// phase(m) = 1/2 m X m^T + m y^T restricted to one row: m = (outer, a + k)
PhasePoly theta_row_phase(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                          const std::vector<long long>& outer, long long a) {
    const int n = static_cast<int>(y.size());
    const int last = n - 1;
    PhaseAcc c0, c1;
    for (int i = 0; i < n - 1; ++i) {
        const double ei = static_cast<double>(outer[i]);
        c0.add_product(y(i), ei);
        for (int j = i; j < n - 1; ++j)
            c0.add_product((i == j ? 0.5 : 1.0) * X(i, j), ei * static_cast<double>(outer[j]));
        c0.add_product(X(i, last), ei * static_cast<double>(a));
        c1.add_product(X(i, last), ei);
    }
    const double ad = static_cast<double>(a);
    c0.add_product(0.5 * X(last, last), ad * ad);
    c0.add_product(y(last), ad);
    c1.add_product(X(last, last), ad);
    c1.add(y(last));

    PhasePoly p;
    p.c0 = c0.value();
    p.c1_hi = c1.hi();
    p.c1_lo = c1.lo();
    p.c2 = 0.5 * X(last, last);
    return p;
}

namespace {

// 0 if any axis is empty; throws once the running product leaves the budget
long long checked_total(const std::vector<AxisRange>& ranges, long long budget) {
    for (const auto& r : ranges)
        if (r.count() <= 0) return 0;
    long long total = 1;
    for (const auto& r : ranges) {
        if (r.count() > budget || total > budget / r.count())
            throw BudgetError("theta: lattice budget exceeded");
        total *= r.count();
    }
    return total;
}

// Row-major walk over the outer axes; the innermost axis is the kernel's.
// Chunked parallel evaluation with a fixed pairwise reduction keeps results
// bit-identical for a given chunk size regardless of thread count.
template <typename RowFn>
std::complex<double> sum_rows(long long row_count, const EvalOptions& opt, RowFn&& row_value) {
    const bool parallel = opt.kernel == KernelKind::parallel && row_count > 1;
    if (!parallel) {
        std::complex<double> acc{0.0, 0.0};
        for (long long r = 0; r < row_count; ++r) acc += row_value(r);
        return acc;
    }
    const long long chunk = std::max<long long>(1, opt.chunk_rows);
    const long long chunks = (row_count + chunk - 1) / chunk;
    std::vector<std::complex<double>> partial(static_cast<size_t>(chunks), {0.0, 0.0});
    std::atomic<long long> next{0};
    const int workers = std::min<long long>(resolve_thread_count(opt.threads), chunks);
    auto work = [&] {
        while (true) {
            const long long ci = next.fetch_add(1);
            if (ci >= chunks) return;
            std::complex<double> acc{0.0, 0.0};
            const long long lo = ci * chunk, hi = std::min(row_count, lo + chunk);
            for (long long r = lo; r < hi; ++r) acc += row_value(r);
            partial[static_cast<size_t>(ci)] = acc;
        }
    };
    std::vector<std::thread> pool;
    for (int i = 1; i < workers; ++i) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    // pairwise tree over the chunk array, fixed order
    std::vector<std::complex<double>> level = std::move(partial);
    while (level.size() > 1) {
        std::vector<std::complex<double>> up((level.size() + 1) / 2);
        for (size_t i = 0; i < up.size(); ++i) {
            up[i] = level[2 * i];
            if (2 * i + 1 < level.size()) up[i] += level[2 * i + 1];
        }
        level = std::move(up);
    }
    return level.empty() ? std::complex<double>{0.0, 0.0} : level[0];
}

std::vector<long long> outer_of_index(const std::vector<AxisRange>& ranges, long long idx) {
    const int m = static_cast<int>(ranges.size());
    std::vector<long long> outer(m);
    for (int i = m - 1; i >= 0; --i) {
        const long long c = ranges[i].count();
        outer[i] = ranges[i].lo + idx % c;
        idx /= c;
    }
    return outer;
}

ThetaValue eval_box_ranges(const ThetaRequest& req, const std::vector<AxisRange>& ranges,
                           const EvalOptions& opt) {
    const int n = req.n();
    ThetaValue out;
    if (checked_total(ranges, opt.lattice_budget) == 0) return out;

    const RowKernel& kernel = row_kernel(opt.kernel);
    long long rows = 1;
    for (int i = 0; i < n - 1; ++i) rows *= ranges[i].count();
    const std::vector<AxisRange> outer_ranges(ranges.begin(), ranges.end() - 1);
    const AxisRange inner = ranges.back();

    out.value = sum_rows(rows, opt, [&](long long row_idx) {
        const std::vector<long long> outer = outer_of_index(outer_ranges, row_idx);
        const PhasePoly p = theta_row_phase(req.X, req.y, outer, inner.lo);
        return kernel.sum(p, inner.count());
    });
    return out;
}

double dist_to_integers(double x) { return std::abs(frac1(x)); }

// weight factor of one axis of an fn piece at u = (m + x)/(M b)
double piece_axis_weight(double u, int jpow, bool flipped) {
    const double v = flipped ? 1.0 - u : u;
    return f1(std::ldexp(v, jpow));
}

ThetaValue eval_fn_piece(const ThetaRequest& req, const EvalOptions& opt) {
    const int n = req.n();
    const DyadicIndex& idx = req.piece;
    if (idx.n() != n) throw std::invalid_argument("theta: dyadic index dimension mismatch");

    // support of f1 is [1/8, 3/4]; solve for the m range per axis
    std::vector<AxisRange> ranges(n);
    for (int i = 0; i < n; ++i) {
        const double mb = req.M * req.box(i);
        const double scale = std::ldexp(1.0, -idx.j(i));
        double ulo = 0.125 * scale, uhi = 0.75 * scale;
        if (idx.S.count(i)) {
            const double t = ulo;
            ulo = 1.0 - uhi;
            uhi = 1.0 - t;
        }
        // closed support: include boundary integers; f1 vanishes there anyway
        ranges[i].lo = static_cast<long long>(std::ceil(ulo * mb - req.x(i) - 1e-12));
        ranges[i].hi = static_cast<long long>(std::floor(uhi * mb - req.x(i) + 1e-12));
    }
    ThetaValue out;
    if (checked_total(ranges, opt.lattice_budget) == 0) return out;

    const RowKernel& kernel = row_kernel(opt.kernel);
    long long rows = 1;
    for (int i = 0; i < n - 1; ++i) rows *= ranges[i].count();
    const std::vector<AxisRange> outer_ranges(ranges.begin(), ranges.end() - 1);
    const AxisRange inner = ranges.back();

    out.value = sum_rows(rows, opt, [&](long long row_idx) {
        const std::vector<long long> outer = outer_of_index(outer_ranges, row_idx);
        double wout = 1.0;
        for (int i = 0; i < n - 1; ++i) {
            const double u = (outer[i] + req.x(i)) / (req.M * req.box(i));
            wout *= piece_axis_weight(u, idx.j(i), idx.S.count(i) > 0);
        }
        if (wout == 0.0) return std::complex<double>{0.0, 0.0};
        std::vector<double> w(static_cast<size_t>(inner.count()));
        for (long long k = 0; k < inner.count(); ++k) {
            const double u = (inner.lo + k + req.x(n - 1)) / (req.M * req.box(n - 1));
            w[static_cast<size_t>(k)] = wout * piece_axis_weight(u, idx.j(n - 1), idx.S.count(n - 1) > 0);
        }
        const PhasePoly p = theta_row_phase(req.X, req.y, outer, inner.lo);
        return kernel.sum_weighted(p, w);
    });
    return out;
}

// 1-D tail of the Gaussian row sum beyond |m + x| > r M
double gauss_axis_tail(double M, double r) {
    double acc = 0.0;
    for (long long k = static_cast<long long>(std::floor(r * M)); ; ++k) {
        const double t = 2.0 * std::exp(-M_PI * (k / M) * (k / M));
        acc += t;
        if (t < 1e-300 || t < 1e-18 * acc) break;
    }
    return acc;
}

ThetaValue eval_gaussian(const ThetaRequest& req, const EvalOptions& opt) {
    const int n = req.n();
    // radius for the requested tail target
    double r = 3.0;
    double axis_full = 0.0;
    for (long long k = -static_cast<long long>(10 * req.M) - 10; k <= static_cast<long long>(10 * req.M) + 10; ++k)
        axis_full += std::exp(-M_PI * (k / req.M) * (k / req.M));
    double bound;
    for (;; r += 0.5) {
        bound = n * std::pow(std::max(axis_full, 1.0), n - 1) * gauss_axis_tail(req.M, r);
        if (bound <= opt.gauss_tail || r > 40.0) break;
    }

    std::vector<AxisRange> ranges(n);
    for (int i = 0; i < n; ++i) {
        ranges[i].lo = static_cast<long long>(std::ceil(-req.x(i) - r * req.M));
        ranges[i].hi = static_cast<long long>(std::floor(-req.x(i) + r * req.M));
    }
    ThetaValue out;
    out.truncation_bound = bound;
    if (checked_total(ranges, opt.lattice_budget) == 0) return out;

    const RowKernel& kernel = row_kernel(opt.kernel);
    long long rows = 1;
    for (int i = 0; i < n - 1; ++i) rows *= ranges[i].count();
    const std::vector<AxisRange> outer_ranges(ranges.begin(), ranges.end() - 1);
    const AxisRange inner = ranges.back();

    out.value = sum_rows(rows, opt, [&](long long row_idx) {
        const std::vector<long long> outer = outer_of_index(outer_ranges, row_idx);
        double q = 0.0;
        for (int i = 0; i < n - 1; ++i) {
            const double u = (outer[i] + req.x(i)) / req.M;
            q += u * u;
        }
        const double wout = std::exp(-M_PI * q);
        std::vector<double> w(static_cast<size_t>(inner.count()));
        for (long long k = 0; k < inner.count(); ++k) {
            const double u = (inner.lo + k + req.x(n - 1)) / req.M;
            w[static_cast<size_t>(k)] = wout * std::exp(-M_PI * u * u);
        }
        const PhasePoly p = theta_row_phase(req.X, req.y, outer, inner.lo);
        return kernel.sum_weighted(p, w);
    });
    return out;
}

} // namespace

ThetaValue theta_box(const ThetaRequest& req, const EvalOptions& opt) {
    if (req.cutoff != CutoffKind::box) throw std::invalid_argument("theta_box: request does not carry a box cutoff");
    const int n = req.n();
    std::vector<AxisRange> ranges(n);
    for (int i = 0; i < n; ++i) {
        if (!(req.box(i) > 0)) throw std::invalid_argument("theta_box: box entries must be positive");
        ranges[i] = open_range(-req.x(i), req.M * req.box(i) - req.x(i));
    }
    return eval_box_ranges(req, ranges, opt);
}

ThetaValue theta_schwartz(const ThetaRequest& req, const EvalOptions& opt) {
    if (req.cutoff == CutoffKind::gaussian) return eval_gaussian(req, opt);
    if (req.cutoff == CutoffKind::fn_piece) return eval_fn_piece(req, opt);
    throw std::invalid_argument("theta_schwartz: cutoff must be gaussian or an fn piece");
}

ThetaValue theta_box_via_dyadic(const ThetaRequest& req, const EvalOptions& opt) {
    const int n = req.n();
    // dyadic depth per axis, from the nearest lattice point to a box face
    std::vector<int> jmax(n);
    for (int i = 0; i < n; ++i) {
        const double mb = req.M * req.box(i);
        double delta = std::min(dist_to_integers(req.x(i)), dist_to_integers(mb - req.x(i))) / mb;
        delta = std::max(delta, 1e-14);
        jmax[i] = std::max(0, static_cast<int>(std::ceil(std::log2(0.75 / delta))));
        jmax[i] = std::min(jmax[i], 60);
    }

    ThetaRequest piece_req = req;
    piece_req.cutoff = CutoffKind::fn_piece;
    ThetaValue out;
    // odometer over (j, S)
    std::vector<int> j(n, 0);
    while (true) {
        for (int smask = 0; smask < (1 << n); ++smask) {
            DyadicIndex idx;
            idx.j = Eigen::VectorXi(n);
            for (int i = 0; i < n; ++i) idx.j(i) = j[i];
            for (int i = 0; i < n; ++i)
                if (smask & (1 << i)) idx.S.insert(i);
            piece_req.piece = idx;
            out.value += eval_fn_piece(piece_req, opt).value;
        }
        int k = 0;
        while (k < n && j[k] == jmax[k]) j[k++] = 0;
        if (k == n) break;
        ++j[k];
    }
    return out;
}

BigThetaValue big_theta_gaussian(const JacobiElement& j, double tail_target) {
    const int n = j.n();
    const IwasawaCoords c = iwasawa(j.g);
    const Eigen::MatrixXd Y = c.Y();
    const Eigen::VectorXd& xh = j.h.x;
    const Eigen::VectorXd& yh = j.h.y;

    BigThetaValue out;
    out.phase_exact = (c.Q - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-12;

    // shell-counting tail bound from the eigenvalues of Y
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Y);
    const Eigen::VectorXd lam = es.eigenvalues();
    auto shell_count = [&](double rho) {
        double cnt = 1.0;
        for (int i = 0; i < n; ++i) cnt *= 2.0 * rho / std::sqrt(lam(i)) + 1.0;
        return cnt;
    };
    double radius = 3.0;
    double bound;
    for (;; radius += 0.5) {
        bound = 0.0;
        for (double k = std::floor(radius); ; k += 1.0) {
            const double term = std::exp(-M_PI * k * k) * shell_count(k + 1.0);
            bound += term;
            if (term < 1e-300 || term < 1e-18 * bound) break;
        }
        if (bound <= tail_target || radius > 60.0) break;
    }

    std::complex<double> acc{0.0, 0.0};
    for_each_lattice_point(Y, xh, radius * radius, [&](const Eigen::VectorXi& m) {
        const Eigen::VectorXd mx = m.cast<double>() + xh;
        const double q = mx.transpose() * Y * mx;
        PhaseAcc ph;
        for (int a = 0; a < n; ++a) {
            ph.add_product(yh(a), static_cast<double>(m(a)));
            for (int b = a; b < n; ++b) ph.add_product((a == b ? 0.5 : 1.0) * c.X(a, b), mx(a) * mx(b));
        }
        acc += std::exp(-M_PI * q) * e2pi(ph.value());
    });

    const double det_quarter = std::pow(c.V.prod(), 0.25);
    PhaseAcc pref;
    pref.add(-j.h.t);
    for (int a = 0; a < n; ++a) pref.add_product(0.5 * xh(a), yh(a));
    out.value = det_quarter * e2pi(pref.value()) * acc;
    out.truncation_bound = det_quarter * bound;
    return out;
}

double automorphy_defect(const JacobiElement& j, const JacobiLatticeElement& word) {
    const BigThetaValue base = big_theta_gaussian(j);
    const double b = std::abs(base.value);
    if (b < 1e-12) throw std::invalid_argument("automorphy_defect: |Theta| too small at this test point");
    const BigThetaValue moved = big_theta_gaussian(jacobi_mul(word, j));
    return std::abs(std::abs(moved.value) - b) / b;
}

} // namespace theta
