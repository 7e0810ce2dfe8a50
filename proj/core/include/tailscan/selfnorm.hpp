#pragma once

#include <span>
#include <vector>

namespace tailscan {

// Empirical-centering transform: row i pairs observation window_index[i] with
// a private block of p-1 complement observations, coefficient 1 on the window
// column and -1/(p-1) on each block column. Blocks are disjoint, so the
// transformed coordinates stay independent and every row sums to zero.
struct CenteringPlan {
    int m = 0;
    int p = 0;
    int n = 0;  // m * p observations actually used
    std::vector<int> window_index;
    std::vector<std::vector<int>> blocks;

    void validate() const;
};

// Contiguous-block plan: p = floor(n_avail / m), trailing observations past
// m*p are discarded. Throws when fewer than 2m observations are available.
CenteringPlan make_plan(int m, int n_avail);

// Same with the two column permutations the transform is defined up to:
// window_perm permutes {0..m-1}, complement_perm permutes the n-m complement
// slots.
CenteringPlan make_plan(int m, int n_avail, std::span<const int> window_perm,
                        std::span<const int> complement_perm);

// X-tilde = A x.
std::vector<double> transform(const CenteringPlan& plan, std::span<const double> x);

// Self-normalized sum of the transformed window. Throws on an all-zero
// transform.
double t_stat(const CenteringPlan& plan, std::span<const double> x);

// Center-of-symmetry bookkeeping for a given plan.
struct MeanStructure {
    std::vector<double> mu;
    double mu_window = 0.0;       // average over the window indices
    double mu_complement = 0.0;   // average over the complement
    std::vector<double> mu_tilde;
    double mu_tilde_window = 0.0;  // equals mu_window - mu_complement
};

MeanStructure analyze_means(const CenteringPlan& plan, std::span<const double> mu);

// Diagnostics for the mean-variation conditions. v_* are the minimal
// constants; ratio_m is sqrt(sum mu_tilde^2) / (sqrt(m) |mu_tilde_window|),
// infinite when the centered window mean vanishes.
struct ConditionReport {
    double v_a = 0.0;
    bool holds_a = true;
    double v_aprime = 0.0;
    bool holds_aprime = true;
    double ratio_m = 1.0;
    double mu_tilde_window = 0.0;
};

ConditionReport check_conditions(const MeanStructure& mu, const CenteringPlan& plan);

// min(3.18, g(t)) * Pr(N(0,1) > t), capped at 1, with
// g(t) = 1 + 14.11 phi(t) / ((9 + t^2)(1 - Phi(t))).
double bound318(double t);

// The g(t) multiplier itself.
double bound318_multiplier(double t);

// exp(-t^2/2): the Hoeffding bound for the self-normalized symmetric sum.
double rademacher_selfnorm_bound(double t);

}  // namespace tailscan
