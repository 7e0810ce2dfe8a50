#include "tailscan/scan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tailscan/errors.hpp"
#include "tailscan/numerics.hpp"

namespace tailscan {

namespace {

void check_interval(int n, const Interval& iv) {
    if (iv.length < 2 || iv.offset < 0 || iv.offset >= n)
        throw std::invalid_argument("Interval: need length >= 2 and offset in [0, n)");
    if (n / iv.length < 2)
        throw std::invalid_argument("Interval: no feasible plan, need floor(n/m) >= 2");
}

// T for the window starting at `offset`, using plan indices rotated into the
// original series. Equivalent to rotating the data and applying t_stat.
double t_rotated(std::span<const double> x, const CenteringPlan& plan, int offset) {
    const int n_data = static_cast<int>(x.size());
    const double w = 1.0 / (plan.p - 1);
    double s = 0.0, q = 0.0;
    for (int i = 0; i < plan.m; ++i) {
        int wi = plan.window_index[i] + offset;
        if (wi >= n_data) wi -= n_data;
        double block = 0.0;
        for (int j : plan.blocks[i]) {
            int idx = j + offset;
            if (idx >= n_data) idx -= n_data;
            block += x[idx];
        }
        const double xt = x[wi] - w * block;
        s += xt;
        q += xt * xt;
    }
    if (q <= 0.0) throw DegenerateDataError("t_for_interval: degenerate window transform");
    return s / std::sqrt(q);
}

}  // namespace

double t_for_interval(std::span<const double> x, const Interval& iv) {
    const int n = static_cast<int>(x.size());
    check_interval(n, iv);
    const CenteringPlan plan = make_plan(iv.length, n);
    return t_rotated(x, plan, iv.offset);
}

CriticalValue critical_value(int m, int n, long n_total, double alpha) {
    if (n_total < 1) throw std::invalid_argument("critical_value: n_total must be >= 1");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("critical_value: alpha must lie in (0,1)");
    if (m < 1 || m >= n) throw std::invalid_argument("critical_value: need 1 <= m < n");

    const double target = alpha / static_cast<double>(n_total);
    const double t_max = 45.0;  // bound318 underflows past here
    CriticalValue out;
    const double base = std::sqrt(2.0 * std::log(static_cast<double>(n) / m));
    if (bound318(t_max) > target) {
        out.value = t_max;
        out.saturated = true;
        out.kappa = out.value - base;
        return out;
    }
    const double t_min = 1e-8;
    double value;
    if (bound318(t_min) <= target) {
        value = t_min;
    } else {
        Tolerance tol;
        tol.abs_tol = 1e-14;
        tol.rel_tol = 1e-12;
        value = solve_monotone([](double t) { return bound318(t); }, t_min, t_max, target, tol);
        // Land on the <= side of the target.
        while (bound318(value) > target) value = std::nextafter(value, t_max);
    }
    out.value = value;
    out.kappa = value - base;
    return out;
}

std::vector<Interval> enumerate_intervals(int n, const ScanConfig& cfg) {
    std::vector<int> lengths;
    switch (cfg.grid) {
        case LengthGrid::dyadic:
            for (int m = 1; m <= n / 2; m *= 2)
                if (m >= cfg.min_length) lengths.push_back(m);
            break;
        case LengthGrid::all:
            for (int m = cfg.min_length; m <= n / 2; ++m) lengths.push_back(m);
            break;
        case LengthGrid::explicit_list:
            lengths = cfg.lengths;
            std::sort(lengths.begin(), lengths.end());
            lengths.erase(std::unique(lengths.begin(), lengths.end()), lengths.end());
            for (int m : lengths)
                if (m < 2 || m > n / 2)
                    throw std::invalid_argument("enumerate_intervals: length outside [2, n/2]");
            break;
    }
    if (lengths.empty()) throw std::invalid_argument("enumerate_intervals: no feasible lengths");

    std::vector<Interval> out;
    for (int m : lengths) {
        int stride = cfg.stride;
        if (cfg.grid == LengthGrid::all) stride = 1;
        if (stride <= 0) stride = std::max(1, m / 4);
        for (int j = 0; j + m <= n; j += stride) out.push_back({j, m});
    }
    return out;
}

ScanResult run_scan(std::span<const double> x, const ScanConfig& cfg) {
    const int n = static_cast<int>(x.size());
    if (n < 8) throw std::invalid_argument("run_scan: need at least 8 observations");
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0))
        throw std::invalid_argument("run_scan: alpha must lie in (0,1)");
    const auto [mn, mx] = std::minmax_element(x.begin(), x.end());
    if (*mn == *mx) throw DegenerateDataError("run_scan: constant input");

    const auto ivs = enumerate_intervals(n, cfg);
    const long n_tests = static_cast<long>(ivs.size()) * (cfg.two_sided ? 2 : 1);

    ScanResult res;
    res.n = n;
    res.n_intervals = static_cast<int>(ivs.size());
    res.alpha = cfg.alpha;
    res.intervals.reserve(ivs.size());

    // Uniform Bonferroni: one critical value for every interval; kappa still
    // depends on the length through sqrt(2 log(n/m)).
    const CriticalValue cv_any = critical_value(ivs.front().length, n, n_tests, cfg.alpha);
    res.critical_value = cv_any.value;

    int current_m = -1;
    CenteringPlan plan;
    double kappa = 0.0;
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& iv : ivs) {
        if (iv.length != current_m) {
            current_m = iv.length;
            plan = make_plan(iv.length, n);
            kappa = cv_any.value - std::sqrt(2.0 * std::log(static_cast<double>(n) / iv.length));
        }
        IntervalResult row;
        row.iv = iv;
        try {
            row.t = t_rotated(x, plan, iv.offset);
        } catch (const DegenerateDataError&) {
            row.t = 0.0;  // no evidence either way from an all-zero transform
        }
        row.critical = cv_any.value;
        row.kappa = kappa;
        const double effective = cfg.two_sided ? std::fabs(row.t) : row.t;
        row.exceeds = effective > row.critical;
        if (row.exceeds) res.any_detection = true;
        if (effective > best) {
            best = effective;
            res.argmax = iv;
            res.argmax_t = row.t;
        }
        res.intervals.push_back(row);
    }
    return res;
}

double r_ratio(std::span<const double> sigma, const Interval& iv, const CenteringPlan& plan) {
    const int n_data = static_cast<int>(sigma.size());
    if (n_data < plan.n) throw std::invalid_argument("r_ratio: sigma shorter than plan.n");
    for (double s : sigma)
        if (!(s > 0.0)) throw std::invalid_argument("r_ratio: sigma must be positive");
    check_interval(n_data, iv);

    const double w2 = 1.0 / ((plan.p - 1.0) * (plan.p - 1.0));
    double num = 0.0, den = 0.0;
    for (int i = 0; i < plan.m; ++i) {
        int wi = plan.window_index[i] + iv.offset;
        if (wi >= n_data) wi -= n_data;
        const double s2 = sigma[wi] * sigma[wi];
        double block = 0.0;
        for (int j : plan.blocks[i]) {
            int idx = j + iv.offset;
            if (idx >= n_data) idx -= n_data;
            block += sigma[idx] * sigma[idx];
        }
        num += s2 + w2 * block;
        den += s2;
    }
    return num / den;
}

double variance_growth_s(std::span<const double> sigma, int m) {
    const int n = static_cast<int>(sigma.size());
    if (m < 1 || m > n) throw std::invalid_argument("variance_growth_s: need 1 <= m <= n");
    double s2_window = 0.0;
    for (int i = 0; i < m; ++i) s2_window += sigma[i] * sigma[i];
    s2_window /= m;
    if (!(s2_window > 0.0))
        throw std::invalid_argument("variance_growth_s: window variance must be positive");
    double s_min = 0.0;
    for (int j = 2; j <= n; ++j) {
        const double ratio = sigma[j - 1] * sigma[j - 1] / s2_window;
        s_min = std::max(s_min, ratio / std::sqrt(static_cast<double>(j - 1)));
    }
    return s_min;
}

}  // namespace tailscan
