#include "theta/experiments.hpp"

#include "theta/decompose.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace theta {

// --- config and expectations ---------------------------------------------------

Config Config::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    Config c;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (!key.empty()) c.kv_[key] = val;
    }
    return c;
}

std::string Config::get(const std::string& key, const std::string& fallback) const {
    const auto it = kv_.find(key);
    return it == kv_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
    const auto it = kv_.find(key);
    return it == kv_.end() ? fallback : std::stod(it->second);
}

long long Config::get_int(const std::string& key, long long fallback) const {
    const auto it = kv_.find(key);
    return it == kv_.end() ? fallback : std::stoll(it->second);
}

const Config& expectations() {
    static const Config c = [] {
        if (const char* env = std::getenv("THETATOOL_EXPECTATIONS")) return Config::from_file(env);
#ifdef THETA_SOURCE_DIR
        return Config::from_file(std::string(THETA_SOURCE_DIR) + "/config/expectations.cfg");
#else
        return Config::from_file("config/expectations.cfg");
#endif
    }();
    return c;
}

// --- shared random builders ------------------------------------------------------

namespace {

Eigen::MatrixXd rng_symmetric(SplitRng& rng, int n, double scale) {
    Eigen::MatrixXd x(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) x(i, j) = x(j, i) = rng.uniform(-scale, scale);
    return x;
}

Eigen::MatrixXcd rng_unitary(SplitRng& rng, int n) {
    Eigen::MatrixXcd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
    return Eigen::HouseholderQR<Eigen::MatrixXcd>(m).householderQ();
}

SymplecticMatrix rng_symplectic(SplitRng& rng, int n, double vspread = 1.2) {
    IwasawaCoords c;
    c.X = rng_symmetric(rng, n, 1.0);
    c.U = Eigen::MatrixXd::Identity(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) c.U(i, j) = rng.uniform(-1, 1);
    c.V = Eigen::VectorXd(n);
    for (int i = 0; i < n; ++i) c.V(i) = std::exp(rng.uniform(-vspread, vspread));
    c.Q = rng_unitary(rng, n);
    return recompose(c);
}

HeisenbergElement rng_heisenberg(SplitRng& rng, int n, double scale = 1.0) {
    Eigen::VectorXd x(n), y(n);
    for (int i = 0; i < n; ++i) {
        x(i) = rng.uniform(-scale, scale);
        y(i) = rng.uniform(-scale, scale);
    }
    return HeisenbergElement(x, y, rng.uniform(-scale, scale));
}

IntegerSymplectic rng_gamma_word(SplitRng& rng, int n, int length) {
    IntegerSymplectic w = IntegerSymplectic::identity(n);
    for (int step = 0; step < length; ++step) {
        const int kind = static_cast<int>(rng.below(3));
        if (kind == 0) {
            w = w * int_J(n);
        } else if (kind == 1) {
            IntMat r(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) {
                    const int v = static_cast<int>(rng.below(5)) - 2;
                    r(i, j) = v;
                    r(j, i) = v;
                }
            w = w * int_translation(r);
        } else {
            IntMat a = IntMat::identity(n);
            if (n == 1) {
                a(0, 0) = rng.below(2) == 0 ? 1 : -1;
            } else {
                const int i = static_cast<int>(rng.below(n));
                int j = static_cast<int>(rng.below(n - 1));
                if (j >= i) ++j;
                a(i, j) = static_cast<int>(rng.below(5)) - 2;
            }
            w = w * int_gl(a, int_inverse_unimodular(a));
        }
    }
    return w;
}

JacobiLatticeElement rng_lattice_word(SplitRng& rng, int n, int length) {
    JacobiLatticeElement w;
    w.gamma = rng_gamma_word(rng, n, length);
    w.m = Eigen::VectorXi(n);
    w.n_vec = Eigen::VectorXi(n);
    for (int i = 0; i < n; ++i) {
        w.m(i) = static_cast<int>(rng.below(7)) - 3;
        w.n_vec(i) = static_cast<int>(rng.below(7)) - 3;
    }
    w.t = rng.uniform(-1, 1);
    return w;
}

double median_of(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

double fit_slope(const std::vector<double>& lx, const std::vector<double>& ly) {
    const double m = static_cast<double>(lx.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    return (sxy - sx * sy / m) / (sxx - sx * sx / m);
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

// --- growth experiment -----------------------------------------------------------

void GrowthConfig::finalize() {
    if (n != 1 && n != 2) throw std::invalid_argument("growth: n must be 1 or 2");
    if (x_fixed.size() != n) x_fixed = Eigen::VectorXd::Zero(n);
    if (box.size() != n) box = Eigen::VectorXd::Ones(n);
    const long long cap = n == 1 ? (1LL << 16) : (1LL << 10);
    if (M_max > cap) throw std::invalid_argument("growth: M_max above the lattice budget for this n");
    if (M_max < 4) throw std::invalid_argument("growth: M_max too small");
}

Json GrowthSummary::to_json() const {
    Json per = Json::array();
    for (const auto& s : samples)
        per.push_back(Json{{"sample_id", s.sample_id},
                           {"slope", s.slope},
                           {"sup_ratio", s.sup_ratio},
                           {"rational_control", s.rational_control}});
    return Json{{"median_slope", median_slope},
                {"control_slope", control_slope},
                {"median_sup_ratio", median_sup_ratio},
                {"max_sup_ratio", max_sup_ratio},
                {"seed", seed},
                {"samples", per}};
}

GrowthSummary run_growth(const GrowthConfig& cfg_in, std::ostream& csv) {
    GrowthConfig cfg = cfg_in;
    cfg.finalize();
    const int n = cfg.n;
    const GrowthPsi psi{1.0 / (2.0 * n + 4.0) + cfg.psi_eps};

    // dyadic grid plus 16 log-uniform intermediates per decade
    std::vector<double> grid;
    for (long long m = 2; m <= cfg.M_max; m *= 2) grid.push_back(static_cast<double>(m));
    {
        SplitRng grid_rng = SplitRng::for_sample(cfg.seed, 0);
        const double decades = std::log10(static_cast<double>(cfg.M_max) / 2.0);
        const int extra = static_cast<int>(std::ceil(decades * 16.0));
        for (int i = 0; i < extra; ++i)
            grid.push_back(2.0 * std::pow(cfg.M_max / 2.0, grid_rng.uniform()));
        std::sort(grid.begin(), grid.end());
    }

    EvalOptions opt;
    opt.kernel = cfg.kernel;
    opt.threads = cfg.threads;

    GrowthSummary summary;
    summary.seed = cfg.seed;
    csv << "seed,sample_id,M,abs_theta,ratio,running_sup\n";

    std::vector<double> slopes;
    std::vector<double> sups;

    for (int sid = -1; sid < cfg.samples; ++sid) {
        const bool control = sid < 0;
        SplitRng rng = SplitRng::for_sample(cfg.seed, static_cast<std::uint64_t>(sid + 2));

        ThetaRequest req;
        req.M = 1;
        req.x = cfg.x_fixed;
        req.box = cfg.box;
        if (control || cfg.X_mode == ParamMode::rational)
            req.X = Eigen::MatrixXd::Zero(n, n);
        else if (cfg.X_mode == ParamMode::fixed)
            req.X = cfg.X_fixed;
        else
            req.X = rng_symmetric(rng, n, 0.5);
        if (control)
            req.y = Eigen::VectorXd::Zero(n);
        else if (cfg.y_mode == ParamMode::fixed)
            req.y = cfg.y_fixed.size() == n ? cfg.y_fixed : Eigen::VectorXd::Zero(n);
        else {
            req.y = Eigen::VectorXd(n);
            for (int i = 0; i < n; ++i) req.y(i) = rng.uniform(-0.5, 0.5);
        }

        // five independent full evaluations guard the prefix path
        std::vector<size_t> check_at;
        for (int k = 0; k < 5; ++k) check_at.push_back(rng.below(grid.size()));

        std::vector<double> absvals(grid.size(), 0.0);
        if (n == 1) {
            // the box only grows with M: extend the row sum incrementally
            const long long lo = static_cast<long long>(std::floor(-req.x(0))) + 1;
            std::vector<long long> outer;
            const PhasePoly p = theta_row_phase(req.X, req.y, outer, lo);
            std::complex<double> acc{0.0, 0.0};
            long long cur = lo - 1; // last included m
            for (size_t gi = 0; gi < grid.size(); ++gi) {
                const long long hi =
                    static_cast<long long>(std::ceil(grid[gi] * req.box(0) - req.x(0))) - 1;
                for (long long m = cur + 1; m <= hi; ++m) acc += e2pi(phase_eval(p, m - lo));
                cur = std::max(cur, hi);
                absvals[gi] = std::abs(acc);
            }
        } else {
            for (size_t gi = 0; gi < grid.size(); ++gi) {
                req.M = grid[gi];
                absvals[gi] = std::abs(theta_box(req, opt).value);
            }
        }
        for (const size_t gi : check_at) {
            req.M = grid[gi];
            const double full = std::abs(theta_box(req, opt).value);
            if (std::abs(full - absvals[gi]) > 1e-9 * std::max(1.0, full))
                throw std::logic_error("growth: prefix evaluation disagrees with the full sum");
        }

        double running = 0.0, sup_ratio = 0.0;
        std::vector<double> lx, ly;
        // the slope is an asymptotic quantity; fit it over the upper decades only
        const double fit_from = std::max(std::sqrt(static_cast<double>(cfg.M_max)),
                                         static_cast<double>(cfg.M_max) / 128.0);
        for (size_t gi = 0; gi < grid.size(); ++gi) {
            const double M = grid[gi];
            running = std::max(running, absvals[gi]);
            const double ratio = absvals[gi] / (std::pow(M, 0.5 * n) * psi(std::log(M)));
            sup_ratio = std::max(sup_ratio, ratio);
            csv << cfg.seed << ',' << sid << ',' << fmt17(M) << ',' << fmt17(absvals[gi]) << ','
                << fmt17(ratio) << ',' << fmt17(running) << '\n';
            if (running > 0 && M >= fit_from) {
                lx.push_back(std::log(M));
                ly.push_back(std::log(running));
            }
        }
        GrowthSampleResult r;
        r.sample_id = sid;
        r.slope = fit_slope(lx, ly);
        r.sup_ratio = sup_ratio;
        r.rational_control = control;
        summary.samples.push_back(r);
        if (control) {
            summary.control_slope = r.slope;
        } else {
            slopes.push_back(r.slope);
            sups.push_back(sup_ratio);
        }
    }
    summary.median_slope = median_of(slopes);
    summary.median_sup_ratio = median_of(sups);
    summary.max_sup_ratio = sups.empty() ? 0.0 : *std::max_element(sups.begin(), sups.end());
    return summary;
}

// --- tail experiment ---------------------------------------------------------------

Json TailSummary::to_json() const {
    return Json{{"fitted_exponent", fit.exponent},
                {"stderr", fit.stderr_},
                {"points_used", fit.points_used},
                {"acceptance_rate", acceptance_rate},
                {"seed", seed}};
}

TailSummary run_tail(const TailConfig& cfg, std::ostream& csv) {
    const HeightParams hp = cfg.A > 0 ? HeightParams{cfg.A} : HeightParams::for_rank(cfg.n);
    csv << "sample_id,D\n";
    std::vector<double> ds(cfg.samples);
    long long attempts = 0;
    for (int i = 0; i < cfg.samples; ++i) {
        SplitRng rng = SplitRng::for_sample(cfg.seed, static_cast<std::uint64_t>(i));
        const HaarSample s = haar_sample(cfg.n, rng);
        attempts += s.attempts;
        ds[i] = height(s.j, hp);
        csv << i << ',' << fmt17(ds[i]) << '\n';
    }
    TailSummary out;
    out.seed = cfg.seed;
    out.acceptance_rate = static_cast<double>(cfg.samples) / static_cast<double>(attempts);
    out.fit = tail_fit(ds, default_r_grid(ds));
    return out;
}

// --- good-set probe ------------------------------------------------------------------

Json GscriptSummary::to_json() const {
    Json out = Json::array();
    for (const auto& p : per_index) {
        Json jv = Json::array(), cs = Json::array(), fr = Json::array();
        for (int i = 0; i < p.jpow.size(); ++i) jv.push_back(p.jpow(i));
        for (size_t i = 0; i < p.C_grid.size(); ++i) {
            cs.push_back(p.C_grid[i]);
            fr.push_back(p.complement_fraction[i]);
        }
        Json e{{"j", jv}, {"C_grid", cs}, {"complement_fraction", fr}};
        if (p.fitted_exponent) e["fitted_exponent"] = *p.fitted_exponent;
        out.push_back(e);
    }
    return Json{{"per_index", out}, {"seed", seed}};
}

GscriptSummary run_gscript(const GscriptConfig& cfg_in) {
    GscriptConfig cfg = cfg_in;
    if (cfg.n != 1 && cfg.n != 2) throw std::invalid_argument("gscript: n must be 1 or 2");
    if (cfg.j_list.empty()) {
        cfg.j_list.push_back(Eigen::VectorXi::Zero(cfg.n));
        Eigen::VectorXi one = Eigen::VectorXi::Zero(cfg.n);
        one(0) = 1;
        cfg.j_list.push_back(one);
    }
    if (cfg.C_grid.empty())
        for (int i = 0; i < 14; ++i) cfg.C_grid.push_back(0.5 * std::pow(1.6, i));

    const GrowthPsi psi{1.0 / (2.0 * cfg.n + 4.0) + cfg.psi_eps};
    const HeightParams hp = HeightParams::for_rank(cfg.n);

    GscriptSummary out;
    out.seed = cfg.seed;
    for (const auto& jpow : cfg.j_list) {
        const std::vector<double> sgrid = default_s_grid(jpow, cfg.s_max);
        // per-sample threshold: smallest C for which the sample is a member
        std::vector<double> cstar(cfg.samples);
        for (int i = 0; i < cfg.samples; ++i) {
            SplitRng rng = SplitRng::for_sample(cfg.seed, static_cast<std::uint64_t>(i));
            const HaarSample s = haar_sample(cfg.n, rng);
            double worst = 0.0;
            for (int smask = 0; smask < (1 << cfg.n); ++smask) {
                DyadicIndex idx;
                idx.j = jpow;
                for (int b = 0; b < cfg.n; ++b)
                    if (smask & (1 << b)) idx.S.insert(b);
                for (const double sflow : sgrid) {
                    const double d = height_flowed(s.j, sflow, idx, hp);
                    worst = std::max(worst, std::pow(d, 0.25) / psi(sflow));
                }
            }
            cstar[i] = worst;
        }
        std::sort(cstar.begin(), cstar.end());
        GscriptSummary::PerIndex pi;
        pi.jpow = jpow;
        pi.C_grid = cfg.C_grid;
        std::vector<double> lx, ly;
        for (const double c : cfg.C_grid) {
            const auto it = std::upper_bound(cstar.begin(), cstar.end(), c);
            const double frac = static_cast<double>(cstar.end() - it) / cfg.samples;
            pi.complement_fraction.push_back(frac);
            const double count = static_cast<double>(cstar.end() - it);
            if (count >= 20 && frac <= 0.9) {
                lx.push_back(std::log(c));
                ly.push_back(std::log(frac));
            }
        }
        if (lx.size() >= 3) pi.fitted_exponent = fit_slope(lx, ly);
        out.per_index.push_back(std::move(pi));
    }
    return out;
}

// --- verify umbrella -------------------------------------------------------------------

bool VerifyReport::all_passed() const {
    for (const auto& c : checks)
        if (!c.passed) return false;
    return true;
}

Json VerifyReport::to_json() const {
    Json cs = Json::array();
    for (const auto& c : checks) cs.push_back(Json{{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    return Json{{"suite", suite}, {"passed", all_passed()}, {"checks", cs}};
}

namespace {

void add_check(VerifyReport& rep, const std::string& name, bool ok, const std::string& detail = "") {
    rep.checks.push_back(VerifyCheck{name, ok, detail});
}

void verify_group(VerifyReport& rep) {
    SplitRng rng(101);
    bool assoc = true, ident = true, inv = true;
    for (int t = 0; t < 300; ++t) {
        const int n = 1 + static_cast<int>(rng.below(2));
        const JacobiElement a(rng_heisenberg(rng, n), rng_symplectic(rng, n));
        const JacobiElement b(rng_heisenberg(rng, n), rng_symplectic(rng, n));
        const JacobiElement c(rng_heisenberg(rng, n), rng_symplectic(rng, n));
        const auto l = jacobi_mul(jacobi_mul(a, b), c), r = jacobi_mul(a, jacobi_mul(b, c));
        assoc = assoc && (l.h.x - r.h.x).cwiseAbs().maxCoeff() < 1e-10 && std::abs(l.h.t - r.h.t) < 1e-10 &&
                (l.g.entries() - r.g.entries()).cwiseAbs().maxCoeff() < 1e-10;
        // (h, g)^{-1} = ((h^{-1})^g, g^{-1})
        const JacobiElement ainv(heis_action(a.h.inverse(), a.g), a.g.inverse());
        const auto e = jacobi_mul(a, ainv);
        ident = ident && e.h.x.cwiseAbs().maxCoeff() < 1e-10 && e.h.y.cwiseAbs().maxCoeff() < 1e-10 &&
                std::abs(e.h.t) < 1e-10 &&
                (e.g.entries() - Eigen::MatrixXd::Identity(2 * n, 2 * n)).cwiseAbs().maxCoeff() < 1e-10;
        inv = inv && (a.g * a.g.inverse()).entries().isApprox(Eigen::MatrixXd::Identity(2 * n, 2 * n), 1e-10);
    }
    add_check(rep, "jacobi associativity (300 random triples)", assoc);
    add_check(rep, "heisenberg identity and inverses", ident);
    add_check(rep, "symplectic inverses", inv);

    bool closure = true;
    for (int t = 0; t < 30; ++t) {
        const int n = 1 + static_cast<int>(rng.below(2));
        const auto w = rng_gamma_word(rng, n, 20);
        closure = closure && w.is_symplectic() && (w * w.inverse()).mat().is_identity();
    }
    add_check(rep, "integer carrier closure at word length 20", closure);
}

void verify_decompose(VerifyReport& rep) {
    SplitRng rng(102);
    bool round = true, unitary = true, chart = true;
    for (int t = 0; t < 200; ++t) {
        const int n = 1 + static_cast<int>(rng.below(3));
        const auto g = rng_symplectic(rng, n);
        const auto c = iwasawa(g);
        round = round && (recompose(c).entries() - g.entries()).cwiseAbs().maxCoeff() < 1e-10;
        unitary = unitary &&
                  (c.Q * c.Q.adjoint() - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-12;
        const auto p = partial(g, n);
        chart = chart && (p.V - c.V).cwiseAbs().maxCoeff() == 0.0;
        for (int l = 1; l <= n; ++l)
            round = round &&
                    (recompose_partial(partial(g, l)).entries() - g.entries()).cwiseAbs().maxCoeff() < 1e-10;
    }
    add_check(rep, "iwasawa and partial round trips (200 random)", round);
    add_check(rep, "Q unitarity below 1e-12", unitary);
    add_check(rep, "chart consistency of v across iwasawa and partial", chart);
}

void verify_reduce(VerifyReport& rep, const VerifyOptions& opt) {
    SplitRng rng(103);
    const double slack = opt.tamper_tolerance ? -0.05 : 1e-12;
    bool member = true, ineq = true, exact = true;
    for (int t = 0; t < 200; ++t) {
        const int n = 1 + static_cast<int>(rng.below(2));
        const auto r = dn_reduce(rng_symplectic(rng, n));
        member = member && dn_member(r.reduced);
        exact = exact && r.gamma.is_symplectic();
        ineq = ineq && r.coords.V(n - 1) >= std::sqrt(3.0) / 2 - slack;
        for (int j = 0; j + 1 < n; ++j) ineq = ineq && r.coords.V(j) >= 0.75 * r.coords.V(j + 1) - slack;
    }
    add_check(rep, "reductions land in the domain", member);
    add_check(rep, "domain inequalities v_n >= sqrt(3)/2, v_j >= 3/4 v_{j+1}", ineq,
              opt.tamper_tolerance ? "tampered tolerance" : "");
    add_check(rep, "words exactly symplectic", exact);

    bool orbit = true;
    int used = 0;
    for (int t = 0; t < 300 && used < 60; ++t) {
        const int n = 1 + static_cast<int>(rng.below(2));
        const auto g = rng_symplectic(rng, n);
        const auto w = rng_gamma_word(rng, n, 4);
        const auto r1 = dn_reduce(g);
        const auto r2 = dn_reduce(SymplecticMatrix(w.mat().to_double() * g.entries()));
        const double diff = (r1.reduced.entries() - r2.reduced.entries()).cwiseAbs().maxCoeff();
        if (diff > 1e-6) continue; // boundary-adjacent orbit, excluded
        orbit = orbit && diff < 1e-8;
        ++used;
    }
    add_check(rep, "orbit well-definedness (generic)", orbit && used >= 40);

    bool grenier = true;
    for (int t = 0; t < 100; ++t) {
        const int l = 2 + static_cast<int>(rng.below(2));
        Eigen::MatrixXd b(l, l);
        for (int i = 0; i < l; ++i)
            for (int j = 0; j < l; ++j) b(i, j) = rng.uniform(-1, 1);
        const Eigen::MatrixXd y =
            b * b.transpose() + std::exp(rng.uniform(-1, 1)) * Eigen::MatrixXd::Identity(l, l);
        const auto r = grenier_reduce(y);
        grenier = grenier && grenier_member(r.Y_reduced);
        Eigen::MatrixXd U;
        Eigen::VectorXd V;
        uvu_factor(r.Y_reduced, U, V);
        for (int j = 0; j + 1 < l; ++j) grenier = grenier && V(j) >= 0.75 * V(j + 1) - slack;
    }
    add_check(rep, "grenier reductions are members with the v-chain inequality", grenier);
}

void verify_theta(VerifyReport& rep) {
    SplitRng rng(104);
    // frozen examples
    {
        ThetaRequest r;
        r.M = 4;
        r.X = Eigen::MatrixXd::Constant(1, 1, 0.5);
        r.x = Eigen::VectorXd::Constant(1, -0.5);
        r.y = Eigen::VectorXd::Zero(1);
        r.box = Eigen::VectorXd::Ones(1);
        const auto v = theta_box(r).value;
        add_check(rep, "gauss sum example", std::abs(v - std::complex<double>(2, 2)) < 1e-12);
    }
    bool sym = true;
    for (int t = 0; t < 100; ++t) {
        const int n = 1 + static_cast<int>(rng.below(2));
        ThetaRequest r;
        r.M = rng.uniform(4, 40);
        r.X = rng_symmetric(rng, n, 0.5);
        r.x = Eigen::VectorXd(n);
        r.y = Eigen::VectorXd(n);
        r.box = Eigen::VectorXd(n);
        for (int i = 0; i < n; ++i) {
            r.x(i) = rng.uniform(-1, 1);
            r.y(i) = rng.uniform(-0.5, 0.5);
            r.box(i) = rng.uniform(0.5, 1.5);
        }
        const auto base = theta_box(r).value;
        ThetaRequest conj = r;
        conj.X = -r.X;
        conj.y = -r.y;
        sym = sym && std::abs(theta_box(conj).value - std::conj(base)) < 1e-10 * std::max(1.0, std::abs(base));
        ThetaRequest shift = r;
        shift.y(0) += 2.0;
        sym = sym && std::abs(theta_box(shift).value - base) < 1e-10 * std::max(1.0, std::abs(base));
    }
    add_check(rep, "conjugation and y-periodicity", sym);

    bool kernels_ok = true;
    std::vector<KernelKind> kinds = {KernelKind::naive, KernelKind::rotor, KernelKind::parallel};
    if (simd_available()) kinds.push_back(KernelKind::simd);
    for (int t = 0; t < 50; ++t) {
        ThetaRequest r;
        r.M = rng.uniform(16, 400);
        r.X = rng_symmetric(rng, 1, 0.5);
        r.x = Eigen::VectorXd::Constant(1, rng.uniform(-1, 1));
        r.y = Eigen::VectorXd::Constant(1, rng.uniform(-0.5, 0.5));
        r.box = Eigen::VectorXd::Ones(1);
        EvalOptions o;
        o.kernel = KernelKind::naive;
        const auto ref = theta_box(r, o).value;
        for (const auto k : kinds) {
            o.kernel = k;
            kernels_ok =
                kernels_ok && std::abs(theta_box(r, o).value - ref) < 1e-10 * std::max(1.0, std::abs(ref));
        }
    }
    add_check(rep, "kernel equivalence on 50 requests", kernels_ok);

    bool dyadic = true;
    for (int t = 0; t < 25; ++t) {
        const int n = 1 + static_cast<int>(rng.below(2));
        ThetaRequest r;
        r.M = rng.uniform(8, n == 1 ? 128 : 48);
        r.X = rng_symmetric(rng, n, 0.5);
        r.x = Eigen::VectorXd(n);
        r.y = Eigen::VectorXd(n);
        r.box = Eigen::VectorXd(n);
        for (int i = 0; i < n; ++i) {
            r.x(i) = rng.uniform(-1, 1);
            r.y(i) = rng.uniform(-0.5, 0.5);
            r.box(i) = rng.uniform(0.5, 1.5);
        }
        const auto direct = theta_box(r).value;
        const auto via = theta_box_via_dyadic(r).value;
        dyadic = dyadic && std::abs(direct - via) < 1e-9 * std::max(1.0, std::abs(direct));
    }
    add_check(rep, "dyadic decomposition agrees with the direct sum", dyadic);

    bool automorphy = true;
    for (int t = 0; t < 50; ++t) {
        const int n = 1 + static_cast<int>(rng.below(2));
        const JacobiElement j(rng_heisenberg(rng, n, 0.45), rng_symplectic(rng, n, 0.8));
        const auto w = rng_lattice_word(rng, n, 3);
        try {
            automorphy = automorphy && automorphy_defect(j, w) < 1e-8;
        } catch (const std::invalid_argument&) {
            // |Theta| too small at this point; skip
        }
    }
    add_check(rep, "automorphy modulus invariance (50 words)", automorphy);
}

void verify_cutoff(VerifyReport& rep) {
    SplitRng rng(105);
    bool partition = true;
    const double delta = std::ldexp(1.0, -10);
    for (int t = 0; t < 10000; ++t) {
        const double x = rng.uniform(delta, 1 - delta);
        double s = 0;
        for (int j = 0; j <= 12; ++j) s += f1(std::ldexp(x, j)) + f1(std::ldexp(1 - x, j));
        partition = partition && std::abs(s - 1.0) < 1e-12;
    }
    add_check(rep, "partition of unity at 1e4 interior points", partition);

    Eigen::VectorXd b = Eigen::VectorXd::Ones(2), x(2);
    x << 0.5, 0.5;
    bool box = std::abs(chi_box_decomp(x, b, 12) - 1.0) < 1e-12;
    x << 0.0, 0.5;
    box = box && chi_box_decomp(x, b, 12) == 0.0;
    add_check(rep, "box decomposition indicator values", box);

    bool flows = true;
    for (int t = 0; t < 30; ++t) {
        DyadicIndex idx;
        const int n = 1 + static_cast<int>(rng.below(2));
        idx.j = Eigen::VectorXi(n);
        for (int i = 0; i < n; ++i) {
            idx.j(i) = static_cast<int>(rng.below(5));
            if (rng.below(2)) idx.S.insert(i);
        }
        flows = flows && sympl_check(flow_elements(idx).g_jS) == 0.0;
    }
    add_check(rep, "flow elements exactly symplectic", flows);
}

void verify_height(VerifyReport& rep) {
    SplitRng rng(106);
    bool orbit = true;
    int used = 0;
    for (int t = 0; t < 200 && used < 60; ++t) {
        const int n = 1 + static_cast<int>(rng.below(2));
        const HeightParams hp = HeightParams::for_rank(n);
        const JacobiElement j(rng_heisenberg(rng, n), rng_symplectic(rng, n));
        const auto w = rng_lattice_word(rng, n, 3);
        const double d1 = height(j, hp);
        const double d2 = height(jacobi_mul(w, j), hp);
        if (std::abs(d1 - d2) > 1e-6 * d1) continue;
        orbit = orbit && std::abs(d1 - d2) <= 1e-8 * d1;
        ++used;
    }
    add_check(rep, "height constant on orbits (generic)", orbit && used >= 40);

    bool dominated = true;
    for (int t = 0; t < 200; ++t) {
        const JacobiElement j(rng_heisenberg(rng, 1, 0.45), rng_symplectic(rng, 1));
        const auto r = jacobi_reduce(j);
        const double d = height(j, HeightParams{1.0});
        const double dy = iwasawa(r.reduced.g).V.prod();
        dominated = dominated && d <= dy * (1 + 1e-12);
    }
    add_check(rep, "D <= det Y with equality only at x = 0", dominated);

    bool members = true;
    double mean_attempts = 0;
    for (int t = 0; t < 500; ++t) {
        SplitRng srng = SplitRng::for_sample(991, t);
        const auto s = haar_sample(1 + static_cast<int>(rng.below(2)), srng);
        members = members && dn_member(s.j.g);
        mean_attempts += s.attempts;
    }
    add_check(rep, "haar samples are members", members,
              "mean attempts " + std::to_string(mean_attempts / 500));
}

} // namespace

VerifyReport verify(const std::string& suite, const VerifyOptions& opt) {
    VerifyReport rep;
    rep.suite = suite;
    if (suite == "group" || suite == "all") verify_group(rep);
    if (suite == "decompose" || suite == "all") verify_decompose(rep);
    if (suite == "reduce" || suite == "all") verify_reduce(rep, opt);
    if (suite == "theta" || suite == "all") verify_theta(rep);
    if (suite == "cutoff" || suite == "all") verify_cutoff(rep);
    if (suite == "height" || suite == "all") verify_height(rep);
    if (rep.checks.empty()) throw std::invalid_argument("verify: unknown suite " + suite);
    return rep;
}

} // namespace theta
