#include "tailscan/selfnorm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tailscan/errors.hpp"
#include "tailscan/numerics.hpp"

namespace tailscan {

void CenteringPlan::validate() const {
    if (m < 1 || p < 2 || n != m * p)
        throw std::invalid_argument("CenteringPlan: need m >= 1, p >= 2, n = m*p");
    if (static_cast<int>(window_index.size()) != m ||
        static_cast<int>(blocks.size()) != m)
        throw std::invalid_argument("CenteringPlan: wrong row count");
    std::vector<char> used(n, 0);
    for (int i = 0; i < m; ++i) {
        const int w = window_index[i];
        if (w < 0 || w >= m || used[w]) throw std::invalid_argument("CenteringPlan: bad window column");
        used[w] = 1;
        if (static_cast<int>(blocks[i].size()) != p - 1)
            throw std::invalid_argument("CenteringPlan: each block needs p-1 columns");
        for (int j : blocks[i]) {
            if (j < m || j >= n || used[j])
                throw std::invalid_argument("CenteringPlan: bad complement column");
            used[j] = 1;
        }
    }
}

CenteringPlan make_plan(int m, int n_avail) {
    return make_plan(m, n_avail, {}, {});
}

CenteringPlan make_plan(int m, int n_avail, std::span<const int> window_perm,
                        std::span<const int> complement_perm) {
    if (m < 1) throw std::invalid_argument("make_plan: m must be >= 1");
    if (n_avail < 2 * m)
        throw std::invalid_argument("make_plan: need at least 2m observations");
    CenteringPlan plan;
    plan.m = m;
    plan.p = n_avail / m;
    plan.n = plan.m * plan.p;

    if (!window_perm.empty() && static_cast<int>(window_perm.size()) != m)
        throw std::invalid_argument("make_plan: window permutation must have length m");
    const int nc = plan.n - m;
    if (!complement_perm.empty() && static_cast<int>(complement_perm.size()) != nc)
        throw std::invalid_argument("make_plan: complement permutation must have length n-m");

    plan.window_index.resize(m);
    plan.blocks.assign(m, {});
    for (int i = 0; i < m; ++i) {
        plan.window_index[i] = window_perm.empty() ? i : window_perm[i];
        plan.blocks[i].resize(plan.p - 1);
        for (int k = 0; k < plan.p - 1; ++k) {
            const int slot = i * (plan.p - 1) + k;
            plan.blocks[i][k] = m + (complement_perm.empty() ? slot : complement_perm[slot]);
        }
    }
    plan.validate();
    return plan;
}

std::vector<double> transform(const CenteringPlan& plan, std::span<const double> x) {
    if (static_cast<int>(x.size()) < plan.n)
        throw std::invalid_argument("transform: data shorter than plan.n");
    std::vector<double> out(plan.m);
    const double w = 1.0 / (plan.p - 1);
    for (int i = 0; i < plan.m; ++i) {
        double block_sum = 0.0;
        for (int j : plan.blocks[i]) block_sum += x[j];
        out[i] = x[plan.window_index[i]] - w * block_sum;
    }
    return out;
}

double t_stat(const CenteringPlan& plan, std::span<const double> x) {
    const auto xt = transform(plan, x);
    double s = 0.0, q = 0.0;
    for (double v : xt) {
        s += v;
        q += v * v;
    }
    if (q <= 0.0) throw DegenerateDataError("t_stat: transformed window is identically zero");
    return s / std::sqrt(q);
}

MeanStructure analyze_means(const CenteringPlan& plan, std::span<const double> mu) {
    if (static_cast<int>(mu.size()) < plan.n)
        throw std::invalid_argument("analyze_means: mu shorter than plan.n");
    MeanStructure out;
    out.mu.assign(mu.begin(), mu.begin() + plan.n);
    double sw = 0.0;
    for (int i = 0; i < plan.m; ++i) sw += mu[plan.window_index[i]];
    out.mu_window = sw / plan.m;
    double sc = 0.0;
    for (int j = plan.m; j < plan.n; ++j) sc += mu[j];
    out.mu_complement = sc / (plan.n - plan.m);
    out.mu_tilde = transform(plan, mu);
    double st = 0.0;
    for (double v : out.mu_tilde) st += v;
    out.mu_tilde_window = st / plan.m;
    return out;
}

ConditionReport check_conditions(const MeanStructure& mu, const CenteringPlan& plan) {
    ConditionReport rep;
    rep.mu_tilde_window = mu.mu_tilde_window;

    double ss_tilde = 0.0, ss_centered = 0.0;
    for (double v : mu.mu_tilde) {
        ss_tilde += v * v;
        const double d = v - mu.mu_tilde_window;
        ss_centered += d * d;
    }
    if (ss_tilde > 0.0) {
        rep.v_a = ss_centered / ss_tilde;
    } else {
        rep.v_a = 0.0;
    }
    rep.holds_a = rep.v_a < 1.0;

    const double gap = mu.mu_window - mu.mu_complement;
    double var_w = 0.0;
    for (int i = 0; i < plan.m; ++i) {
        const double d = mu.mu[plan.window_index[i]] - mu.mu_window;
        var_w += d * d;
    }
    var_w /= plan.m;
    double var_c = 0.0;
    for (int j = plan.m; j < plan.n; ++j) {
        const double d = mu.mu[j] - mu.mu_complement;
        var_c += d * d;
    }
    var_c /= (plan.n - plan.m);
    const double worst = std::max(var_w, var_c);
    if (worst == 0.0) {
        rep.v_aprime = 0.0;
        rep.holds_aprime = true;
    } else if (gap == 0.0) {
        rep.v_aprime = std::numeric_limits<double>::infinity();
        rep.holds_aprime = false;
    } else {
        rep.v_aprime = worst / (gap * gap);
        rep.holds_aprime = true;
    }

    const double abs_mt = std::fabs(mu.mu_tilde_window);
    rep.ratio_m = (abs_mt > 0.0) ? std::sqrt(ss_tilde) / (std::sqrt(double(plan.m)) * abs_mt)
                                 : std::numeric_limits<double>::infinity();
    return rep;
}

double bound318_multiplier(double t) {
    return 1.0 + 14.11 * normal_hazard(t) / (9.0 + t * t);
}

double bound318(double t) {
    if (!(t > 0.0)) throw std::domain_error("bound318: t must be > 0");
    const double g = bound318_multiplier(t);
    return std::min(1.0, std::min(3.18, g) * normal_upper_tail(t));
}

double rademacher_selfnorm_bound(double t) {
    if (!(t > 0.0)) throw std::domain_error("rademacher_selfnorm_bound: t must be > 0");
    return std::exp(-0.5 * t * t);
}

}  // namespace tailscan
