#pragma once

// Reproducible desk-scale experiments and the verify umbrella. All randomness
// is derived from a recorded seed; CSV output is bit-identical for a fixed
// config and seed.

#include "theta/height.hpp"
#include "theta/json_io.hpp"
#include "theta/theta_eval.hpp"

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace theta {

// flat key=value store; CLI flags override file entries
class Config {
public:
    static Config from_file(const std::string& path);

    void set(const std::string& key, const std::string& value) { kv_[key] = value; }
    bool has(const std::string& key) const { return kv_.count(key) > 0; }
    std::string get(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    long long get_int(const std::string& key, long long fallback) const;

private:
    std::map<std::string, std::string> kv_;
};

// versioned acceptance thresholds seeded by pilot runs
const Config& expectations();

enum class ParamMode { random, rational, fixed };

struct GrowthConfig {
    int n = 1;
    long long M_max = 1 << 14;
    int samples = 100;
    std::uint64_t seed = 1;
    ParamMode X_mode = ParamMode::random;
    ParamMode y_mode = ParamMode::random;
    Eigen::VectorXd x_fixed;   // defaults to 0
    Eigen::VectorXd box;       // defaults to 1
    Eigen::MatrixXd X_fixed;   // for ParamMode::fixed
    Eigen::VectorXd y_fixed;
    double psi_eps = 0.01;
    KernelKind kernel = KernelKind::simd;
    int threads = 0;

    void finalize(); // fills defaulted vectors, validates the lattice budget
};

struct GrowthSampleResult {
    int sample_id = 0;
    double slope = 0.0;     // log-log growth slope of max_{M' <= M} |theta|
    double sup_ratio = 0.0; // sup over the grid of |theta| / (M^{n/2} psi(log M))
    bool rational_control = false;
};

struct GrowthSummary {
    std::vector<GrowthSampleResult> samples;
    double median_slope = 0.0;       // over the non-control samples
    double control_slope = 0.0;      // the rational control sample
    double median_sup_ratio = 0.0;
    double max_sup_ratio = 0.0;
    std::uint64_t seed = 0;

    Json to_json() const;
};

// Writes one CSV row per (sample, grid M); the rational control sample is
// always present as sample_id -1.
GrowthSummary run_growth(const GrowthConfig& cfg, std::ostream& csv);

struct TailConfig {
    int n = 1;
    int samples = 100000;
    std::uint64_t seed = 1;
    double A = 0.0; // 0: defaults to n
};

struct TailSummary {
    TailFit fit;
    double acceptance_rate = 0.0;
    std::uint64_t seed = 0;

    Json to_json() const;
};

TailSummary run_tail(const TailConfig& cfg, std::ostream& csv);

struct GscriptConfig {
    int n = 1;
    int samples = 2000;
    std::uint64_t seed = 1;
    std::vector<Eigen::VectorXi> j_list; // defaults to {0} and {1}
    std::vector<double> C_grid;          // defaults to a log grid
    double s_max = 4.0;
    double psi_eps = 0.01;
};

struct GscriptSummary {
    struct PerIndex {
        Eigen::VectorXi jpow;
        std::vector<double> C_grid;
        std::vector<double> complement_fraction;
        std::optional<double> fitted_exponent; // of the C decay, when enough mass
    };
    std::vector<PerIndex> per_index;
    std::uint64_t seed = 0;

    Json to_json() const;
};

GscriptSummary run_gscript(const GscriptConfig& cfg);

// --- verify umbrella ----------------------------------------------------------

struct VerifyCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct VerifyReport {
    std::string suite;
    std::vector<VerifyCheck> checks;
    bool all_passed() const;
    Json to_json() const;
};

struct VerifyOptions {
    bool tamper_tolerance = false; // negative control: deliberately break a bound
};

// suite in {group, decompose, reduce, theta, cutoff, height, all}
VerifyReport verify(const std::string& suite, const VerifyOptions& opt = {});

} // namespace theta
