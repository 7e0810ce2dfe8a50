#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace tailscan {

enum class Scenario {
    pivot_tail,
    thm2a,
    thm2b,
    prop1b,
    prop1c,
    scan_null,
    scan_power,
};

const char* scenario_name(Scenario s);

// One Monte Carlo check: simulate the scenario's statistic and tabulate
// exceedances against the named tail bound, or run repeated scans for the
// calibration/power scenarios. Everything is reproducible from `seed`.
struct McSpec {
    Scenario scenario = Scenario::pivot_tail;
    std::string name;
    long replications = 0;
    std::uint64_t seed = 0;
    std::vector<double> t_grid;

    // pivot_tail
    int sample_n = 10;
    int sample_m = 3;
    double data_mu = 0.0;
    double data_sigma = 1.0;

    // thm2a / thm2b
    std::string family;         // "bernoulli" | "poisson"
    double family_param = 0.5;  // p0 or lambda0

    // window geometry (thm2a/b, prop1b/c, scan scenarios)
    int m = 0;
    int n = 0;
    int p = 0;

    // prop1b / prop1c / scan scenarios
    std::string law = "normal";  // "normal" | "laplace" | "uniform"
    double mu_gap = 0.0;         // complement center elevation
    double mu_jitter = 0.0;      // within-block center jitter (prop1c)

    // scan scenarios
    double alpha = 0.05;
    double eps = 0.2;
    double margin = 0.2;
    double target_rate = 0.9;
    bool hetero_sigma = false;
    double sigma_lo = 0.5;
    double sigma_hi = 2.0;

    // Multiplies the bound (bound checks) or the null level (scan_null);
    // a negative-control knob, 1.0 in real runs.
    double bound_scale = 1.0;

    void validate() const;
};

struct McThresholdRow {
    double t = 0.0;
    double empirical = 0.0;
    double stderr_ = 0.0;
    double bound = 0.0;
    bool pass = true;
    long exceed_count = 0;
};

struct McReport {
    std::string name;
    Scenario scenario = Scenario::pivot_tail;
    std::uint64_t seed = 0;
    long replications = 0;
    std::vector<McThresholdRow> rows;  // bound checks
    double detection_rate = -1.0;      // scan scenarios
    double rate_stderr = 0.0;
    double rate_reference = 0.0;  // alpha (null) or target rate (power)
    bool pass = true;
    double wall_seconds = 0.0;  // console diagnostics only, never serialized
};

struct HarnessOptions {
    long bound_replications = 1'000'000;
    long scan_null_replications = 500;
    long scan_power_replications = 200;
    int threads = 0;  // 0 = auto
    double bound_scale = 1.0;
};

McReport run_bound_check(const McSpec& spec, int threads = 0);
McReport run_power_experiment(const McSpec& spec, int threads = 0);

// The registered checks: every tail bound in the library shows up here.
std::vector<McSpec> default_registry(std::uint64_t root_seed, const HarnessOptions& opt = {});

struct SuiteSummary {
    std::uint64_t root_seed = 0;
    std::vector<McReport> reports;
    bool all_pass = true;
};

SuiteSummary run_full_suite(std::uint64_t root_seed, const HarnessOptions& opt = {});

}  // namespace tailscan
