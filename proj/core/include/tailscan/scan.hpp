#pragma once

#include <optional>
#include <span>
#include <vector>

#include "tailscan/selfnorm.hpp"

namespace tailscan {

// Candidate window: the interval (offset, offset + length] of the series.
struct Interval {
    int offset = 0;
    int length = 0;
};

enum class LengthGrid { dyadic, all, explicit_list };

struct ScanConfig {
    double alpha = 0.05;
    LengthGrid grid = LengthGrid::dyadic;
    std::vector<int> lengths;  // used when grid == explicit_list
    int stride = 0;            // 0 = auto (max(1, m/4)); ignored for grid == all
    bool two_sided = false;
    int min_length = 4;
};

struct IntervalResult {
    Interval iv;
    double t = 0.0;
    double critical = 0.0;
    double kappa = 0.0;
    bool exceeds = false;
};

struct ScanResult {
    std::vector<IntervalResult> intervals;
    int n = 0;
    int n_intervals = 0;
    double alpha = 0.0;
    double critical_value = 0.0;  // shared by all intervals under uniform Bonferroni
    bool any_detection = false;
    Interval argmax;
    double argmax_t = 0.0;
};

// T_{k-j} applied to the data rotated so the interval becomes the leading
// window; the plan's complement wraps around the end of the series.
double t_for_interval(std::span<const double> x, const Interval& iv);

struct CriticalValue {
    double value = 0.0;
    double kappa = 0.0;     // value - sqrt(2 log(n/m))
    bool saturated = false;
};

// Smallest t with bound318(t) <= alpha / n_total, found by monotone
// inversion; saturates (with a flag) once the target drops below the bound's
// floating range.
CriticalValue critical_value(int m, int n, long n_total, double alpha);

// Enumerates the interval grid, evaluates T_I against the Bonferroni
// critical value, and reports per-interval and global results.
ScanResult run_scan(std::span<const double> x, const ScanConfig& cfg);

// The lengths and offsets run_scan would enumerate for size n.
std::vector<Interval> enumerate_intervals(int n, const ScanConfig& cfg);

// Heteroscedasticity ratio sum(var(X-tilde_i)) / sum(var(X_i)) over the
// interval, for a known per-point standard deviation field.
double r_ratio(std::span<const double> sigma, const Interval& iv, const CenteringPlan& plan);

// Minimal S with sigma_j^2 / sigma_I^2 <= S sqrt(j-1) for all j >= 2, the
// variance-growth constant for the window I = (0, m].
double variance_growth_s(std::span<const double> sigma, int m);

}  // namespace tailscan
