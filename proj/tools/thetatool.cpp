// Command line surface: theta sums, coordinate charts, reductions, heights,
// and the reproducible experiments. Exit codes: 0 ok, 1 verification failure,
// 2 config error, 3 budget exceeded.

#include "theta/experiments.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace theta;

Json read_json_input(const std::string& path) {
    if (path.empty() || path == "-") {
        std::stringstream ss;
        ss << std::cin.rdbuf();
        return Json::parse(ss.str());
    }
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open input file: " + path);
    return Json::parse(in);
}

Eigen::VectorXd parse_vector(const std::string& s) {
    return vector_from_json(Json::parse(s));
}

std::ostream& open_out(std::ofstream& file, const std::string& path) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path);
    if (!file) throw std::invalid_argument("cannot open output file: " + path);
    return file;
}

void emit_gnuplot(const std::string& csv_path, const std::string& gp_path, int n) {
    std::ofstream gp(gp_path);
    gp << "set datafile separator ','\n"
       << "set logscale xy\n"
       << "set xlabel 'M'\n"
       << "set ylabel '|theta|'\n"
       << "plot '" << csv_path << "' every ::1 using 3:4 with dots title 'samples', \\\n"
       << "     x**(" << 0.5 * n << ") lw 2 title 'M^{n/2}'\n";
}

struct CommonOpts {
    std::string config_path;
    int threads = 0;
};

Config load_config(const CommonOpts& c) {
    return c.config_path.empty() ? Config{} : Config::from_file(c.config_path);
}

int run(int argc, char** argv) {
    CLI::App app{"theta sums, symplectic reduction, and desk-scale experiments"};
    app.require_subcommand(1);

    CommonOpts common;
    app.add_option("--config", common.config_path, "flat key=value config file; flags win");
    app.add_option("--threads", common.threads, "worker cap (also THETATOOL_THREADS)");

    // --- theta ---
    auto* theta_cmd = app.add_subcommand("theta", "evaluate a theta sum");
    int t_n = 1;
    double t_M = 16.0;
    std::string t_X, t_x, t_y, t_box, t_cutoff = "box", t_kernel = "rotor";
    theta_cmd->add_option("--n", t_n, "rank");
    theta_cmd->add_option("--M", t_M, "scaling parameter");
    theta_cmd->add_option("--X", t_X, "symmetric matrix JSON {\"n\":..,\"entries\":[..]}");
    theta_cmd->add_option("--x", t_x, "shift vector JSON array");
    theta_cmd->add_option("--y", t_y, "linear phase vector JSON array");
    theta_cmd->add_option("--box", t_box, "box edge vector JSON array");
    theta_cmd->add_option("--cutoff", t_cutoff, "box | gaussian");
    theta_cmd->add_option("--kernel", t_kernel, "naive | rotor | simd | parallel");

    // --- charts ---
    auto* iwasawa_cmd = app.add_subcommand("iwasawa", "iwasawa coordinates of a symplectic matrix");
    std::string iw_in = "-";
    iwasawa_cmd->add_option("--in", iw_in, "matrix JSON file, - for stdin");

    auto* partial_cmd = app.add_subcommand("partial", "level-l partial decomposition");
    std::string pa_in = "-";
    int pa_l = 1;
    partial_cmd->add_option("--in", pa_in, "matrix JSON file, - for stdin");
    partial_cmd->add_option("--l", pa_l, "level, 1..n");

    // --- reduce ---
    auto* reduce_cmd = app.add_subcommand("reduce", "reduce into the fundamental domain");
    std::string rd_kind = "sp", rd_in = "-";
    reduce_cmd->add_option("--kind", rd_kind, "grenier | sp | jacobi");
    reduce_cmd->add_option("--in", rd_in, "element JSON file, - for stdin");

    // --- height ---
    auto* height_cmd = app.add_subcommand("height", "cusp height of a jacobi element");
    std::string h_in = "-";
    double h_A = 0.0;
    height_cmd->add_option("--in", h_in, "jacobi element JSON, - for stdin");
    height_cmd->add_option("--A", h_A, "damping exponent (default: rank)");

    // --- experiments ---
    auto* exp_cmd = app.add_subcommand("experiment", "reproducible experiments");
    exp_cmd->require_subcommand(1);

    auto* growth_cmd = exp_cmd->add_subcommand("growth", "theta growth along an M grid");
    GrowthConfig gcfg;
    std::string g_out = "growth.csv", g_kernel = "simd";
    std::string g_xmode = "random", g_ymode = "random";
    bool g_gnuplot = false;
    growth_cmd->add_option("--n", gcfg.n);
    growth_cmd->add_option("--M-max", gcfg.M_max);
    growth_cmd->add_option("--samples", gcfg.samples);
    growth_cmd->add_option("--seed", gcfg.seed);
    growth_cmd->add_option("--X-mode", g_xmode, "random | rational | fixed");
    growth_cmd->add_option("--y-mode", g_ymode, "random | fixed");
    growth_cmd->add_option("--kernel", g_kernel);
    growth_cmd->add_option("--out", g_out, "CSV path");
    growth_cmd->add_flag("--gnuplot", g_gnuplot, "also emit a gnuplot script next to the CSV");

    auto* tail_cmd = exp_cmd->add_subcommand("tail", "height tail exponent from Haar samples");
    TailConfig tcfg;
    std::string tl_out = "tail.csv";
    tail_cmd->add_option("--n", tcfg.n);
    tail_cmd->add_option("--samples", tcfg.samples);
    tail_cmd->add_option("--seed", tcfg.seed);
    tail_cmd->add_option("--A", tcfg.A);
    tail_cmd->add_option("--out", tl_out, "CSV path");

    auto* gs_cmd = exp_cmd->add_subcommand("gscript", "good-set complement measure probe");
    GscriptConfig gscfg;
    std::string gs_j;
    gs_cmd->add_option("--n", gscfg.n);
    gs_cmd->add_option("--samples", gscfg.samples);
    gs_cmd->add_option("--seed", gscfg.seed);
    gs_cmd->add_option("--s-max", gscfg.s_max);
    gs_cmd->add_option("--j", gs_j, "semicolon-separated dyadic powers, e.g. '0,0;1,0'");

    // --- verify ---
    auto* verify_cmd = app.add_subcommand("verify", "run a property suite");
    std::string v_suite = "all";
    bool v_tamper = false;
    verify_cmd->add_option("--suite", v_suite, "group|decompose|reduce|theta|cutoff|height|all");
    verify_cmd->add_flag("--tamper-tolerance", v_tamper, "negative control: break a bound on purpose");

    CLI11_PARSE(app, argc, argv);
    const Config file_cfg = load_config(common);

    if (*theta_cmd) {
        ThetaRequest req;
        req.M = t_M;
        req.X = t_X.empty() ? Eigen::MatrixXd::Zero(t_n, t_n) : matrix_from_json(Json::parse(t_X));
        req.x = t_x.empty() ? Eigen::VectorXd::Zero(t_n) : parse_vector(t_x);
        req.y = t_y.empty() ? Eigen::VectorXd::Zero(t_n) : parse_vector(t_y);
        req.box = t_box.empty() ? Eigen::VectorXd::Ones(t_n) : parse_vector(t_box);
        EvalOptions opt;
        opt.kernel = kernel_from_name(t_kernel);
        opt.threads = common.threads;
        opt.lattice_budget = file_cfg.get_int("theta.lattice_budget", opt.lattice_budget);
        ThetaValue v;
        if (t_cutoff == "box") {
            v = theta_box(req, opt);
        } else if (t_cutoff == "gaussian") {
            req.cutoff = CutoffKind::gaussian;
            v = theta_schwartz(req, opt);
        } else {
            throw std::invalid_argument("theta: unknown cutoff " + t_cutoff);
        }
        std::cout << Json{{"value_re", v.value.real()},
                          {"value_im", v.value.imag()},
                          {"truncation_bound", v.truncation_bound}}
                         .dump(2)
                  << '\n';
    } else if (*iwasawa_cmd) {
        std::cout << to_json(iwasawa(symplectic_from_json(read_json_input(iw_in)))).dump(2) << '\n';
    } else if (*partial_cmd) {
        std::cout << to_json(partial(symplectic_from_json(read_json_input(pa_in)), pa_l)).dump(2) << '\n';
    } else if (*reduce_cmd) {
        const Json in = read_json_input(rd_in);
        if (rd_kind == "grenier") {
            std::cout << to_json(grenier_reduce(matrix_from_json(in))).dump(2) << '\n';
        } else if (rd_kind == "sp") {
            std::cout << to_json(dn_reduce(symplectic_from_json(in))).dump(2) << '\n';
        } else if (rd_kind == "jacobi") {
            std::cout << to_json(jacobi_reduce(jacobi_from_json(in))).dump(2) << '\n';
        } else {
            throw std::invalid_argument("reduce: unknown kind " + rd_kind);
        }
    } else if (*height_cmd) {
        const JacobiElement j = jacobi_from_json(read_json_input(h_in));
        const HeightParams hp = h_A > 0 ? HeightParams{h_A} : HeightParams::for_rank(j.n());
        std::cout << Json{{"D", height(j, hp)}, {"A", hp.A}}.dump(2) << '\n';
    } else if (*growth_cmd) {
        auto mode = [](const std::string& s) {
            if (s == "random") return ParamMode::random;
            if (s == "rational") return ParamMode::rational;
            if (s == "fixed") return ParamMode::fixed;
            throw std::invalid_argument("growth: unknown mode " + s);
        };
        if (!growth_cmd->count("--samples")) gcfg.samples = static_cast<int>(file_cfg.get_int("growth.samples", gcfg.samples));
        if (!growth_cmd->count("--M-max")) gcfg.M_max = file_cfg.get_int("growth.M_max", gcfg.M_max);
        if (!growth_cmd->count("--seed")) gcfg.seed = file_cfg.get_int("growth.seed", static_cast<long long>(gcfg.seed));
        gcfg.X_mode = mode(g_xmode);
        gcfg.y_mode = g_ymode == "fixed" ? ParamMode::fixed : ParamMode::random;
        gcfg.kernel = kernel_from_name(g_kernel);
        gcfg.threads = common.threads;
        std::ofstream file;
        std::ostream& csv = open_out(file, g_out);
        const GrowthSummary s = run_growth(gcfg, csv);
        if (g_gnuplot && g_out != "-" && !g_out.empty()) emit_gnuplot(g_out, g_out + ".gp", gcfg.n);
        std::cout << s.to_json().dump(2) << '\n';
    } else if (*tail_cmd) {
        std::ofstream file;
        std::ostream& csv = open_out(file, tl_out);
        const TailSummary s = run_tail(tcfg, csv);
        std::cout << s.to_json().dump(2) << '\n';
    } else if (*gs_cmd) {
        if (!gs_j.empty()) {
            std::stringstream ss(gs_j);
            std::string part;
            while (std::getline(ss, part, ';')) {
                std::stringstream ps(part);
                std::string num;
                std::vector<int> vals;
                while (std::getline(ps, num, ',')) vals.push_back(std::stoi(num));
                if (static_cast<int>(vals.size()) != gscfg.n)
                    throw std::invalid_argument("gscript: -j entry has wrong dimension");
                Eigen::VectorXi jv(gscfg.n);
                for (int i = 0; i < gscfg.n; ++i) jv(i) = vals[static_cast<size_t>(i)];
                gscfg.j_list.push_back(jv);
            }
        }
        std::cout << run_gscript(gscfg).to_json().dump(2) << '\n';
    } else if (*verify_cmd) {
        VerifyOptions opt;
        opt.tamper_tolerance = v_tamper;
        const VerifyReport rep = verify(v_suite, opt);
        std::cout << rep.to_json().dump(2) << '\n';
        return rep.all_passed() ? 0 : 1;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const theta::BudgetError& e) {
        std::cerr << "budget exceeded: " << e.what() << '\n';
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
