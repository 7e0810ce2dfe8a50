#pragma once

#include "tailscan/expfam.hpp"

namespace tailscan {

// Sufficient summaries of a series split into a window of m observations and
// its complement of n-m; the statistics below never need the raw values.
struct SplitSample {
    double window_sum = 0.0;
    int window_count = 0;
    double complement_sum = 0.0;
    int complement_count = 0;

    int n() const { return window_count + complement_count; }
    double window_mean() const { return window_sum / window_count; }
    double complement_mean() const { return complement_sum / complement_count; }
    double grand_mean() const { return (window_sum + complement_sum) / n(); }

    void validate() const;
};

// Generalized log likelihood ratio of the window against theta0:
// sup_theta ((theta-theta0) sum - m (A(theta)-A(theta0))) = m * kl_mean.
double loglr_window(const ExpFamily& fam, double xbar_m, int m, double theta0);

// Empirically standardized log likelihood ratio: separate MLEs on the window
// and the complement against the pooled MLE. Zero iff the two block means
// coincide; symmetric in the two blocks.
double loglr_split(const ExpFamily& fam, const SplitSample& s);

// Kulldorff's two-term Bernoulli scan display; agrees with loglr_split for
// the Bernoulli family.
double kulldorff_bernoulli(double xbar_m, double xbar_mc, int m, int n_minus_m);

// sgn(sign_source) * sqrt(2 stat). sign_source is xbar_m - mean(theta0) for
// window statistics and xbar_m - xbar_mc for split statistics.
double signed_root(double stat, double sign_source);

enum class Thm2Kind { A, B };

// Tail bounds for sqrt(2 logLR): 2 exp(-x^2/2) for the window statistic and
// (4 + 2 x^2) exp(-x^2/2) for the split statistic, both capped at 1.
double tail_bound_thm2(Thm2Kind kind, double x);

// One-sided version for the signed square root.
double one_sided_halving(double bound);

}  // namespace tailscan
