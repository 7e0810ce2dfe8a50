#include "tailscan/loglr.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace tailscan {

namespace {

double xlogy(double x, double y) {
    if (x == 0.0) return 0.0;
    return x * std::log(y);
}

}  // namespace

void SplitSample::validate() const {
    if (window_count < 1 || complement_count < 1)
        throw std::invalid_argument("SplitSample: both blocks need at least one observation");
    if (!std::isfinite(window_sum) || !std::isfinite(complement_sum))
        throw std::invalid_argument("SplitSample: sums must be finite");
}

double loglr_window(const ExpFamily& fam, double xbar_m, int m, double theta0) {
    if (m < 1) throw std::invalid_argument("loglr_window: m must be >= 1");
    return m * kl_mean(fam, xbar_m, theta0);
}

double loglr_split(const ExpFamily& fam, const SplitSample& s) {
    s.validate();
    const double xm = s.window_mean();
    const double xc = s.complement_mean();
    if (xm == xc) return 0.0;
    const double xbar = s.grand_mean();
    return s.window_count * kl_mean_between(fam, xm, xbar) +
           s.complement_count * kl_mean_between(fam, xc, xbar);
}

double kulldorff_bernoulli(double xbar_m, double xbar_mc, int m, int n_minus_m) {
    if (m < 1 || n_minus_m < 1)
        throw std::invalid_argument("kulldorff_bernoulli: block sizes must be >= 1");
    if (xbar_m < 0.0 || xbar_m > 1.0 || xbar_mc < 0.0 || xbar_mc > 1.0)
        throw std::invalid_argument("kulldorff_bernoulli: means must lie in [0,1]");
    const int n = m + n_minus_m;
    const double xbar = (m * xbar_m + n_minus_m * xbar_mc) / n;
    return m * (xlogy(xbar_m, xbar_m / xbar) + xlogy(1.0 - xbar_m, (1.0 - xbar_m) / (1.0 - xbar))) +
           n_minus_m * (xlogy(xbar_mc, xbar_mc / xbar) +
                        xlogy(1.0 - xbar_mc, (1.0 - xbar_mc) / (1.0 - xbar)));
}

double signed_root(double stat, double sign_source) {
    if (stat < 0.0) throw std::invalid_argument("signed_root: statistic must be >= 0");
    const double root = std::sqrt(2.0 * stat);
    return sign_source < 0.0 ? -root : root;
}

double tail_bound_thm2(Thm2Kind kind, double x) {
    const double e = std::exp(-0.5 * x * x);
    const double bound = (kind == Thm2Kind::A) ? 2.0 * e : (4.0 + 2.0 * x * x) * e;
    return std::min(1.0, bound);
}

double one_sided_halving(double bound) {
    return 0.5 * bound;
}

}  // namespace tailscan
