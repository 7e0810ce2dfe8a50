#include "tailscan/expfam.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "tailscan/errors.hpp"

namespace tailscan {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double xlogy(double x, double y) {
    if (x == 0.0) return 0.0;
    return x * std::log(y);
}

}  // namespace

bool MeanDomain::contains(double x) const {
    if (x > lo && x < hi) return true;
    if (x == lo && lo_attainable) return true;
    if (x == hi && hi_attainable) return true;
    return false;
}

bool MeanDomain::interior(double x) const {
    return x > lo && x < hi;
}

ExpFamily::ExpFamily(std::string name, double theta_lo, double theta_hi,
                     std::function<double(double)> log_partition,
                     std::function<double(double)> mean, std::function<double(double)> variance,
                     MeanDomain mean_domain, std::function<double(double)> mean_inverse,
                     double dispersion, std::function<double(double, double)> kl_closed)
    : name_(std::move(name)),
      theta_lo_(theta_lo),
      theta_hi_(theta_hi),
      log_partition_(std::move(log_partition)),
      mean_(std::move(mean)),
      variance_(std::move(variance)),
      mean_domain_(mean_domain),
      mean_inverse_(std::move(mean_inverse)),
      dispersion_(dispersion),
      kl_closed_(std::move(kl_closed)) {
    if (!(theta_lo_ < theta_hi_)) throw std::invalid_argument("ExpFamily: empty theta domain");
    if (!(dispersion_ > 0.0)) throw std::invalid_argument("ExpFamily: dispersion must be > 0");
}

bool ExpFamily::theta_in_domain(double theta) const {
    return theta > theta_lo_ && theta < theta_hi_;
}

double ExpFamily::mean_inverse(double x) const {
    if (!mean_inverse_) throw std::logic_error("ExpFamily: no closed-form mean inverse");
    return mean_inverse_(x);
}

double ExpFamily::objective(double theta, double x, double theta0) const {
    return (theta - theta0) * x / dispersion_ - (log_partition_(theta) - log_partition_(theta0));
}

ExpFamily make_bernoulli() {
    auto kl = [](double x, double p0) {
        return xlogy(x, x / p0) + xlogy(1.0 - x, (1.0 - x) / (1.0 - p0));
    };
    return ExpFamily(
        "bernoulli", -kInf, kInf, [](double t) { return std::log1p(std::exp(t)); },
        [](double t) { return 1.0 / (1.0 + std::exp(-t)); },
        [](double t) {
            const double p = 1.0 / (1.0 + std::exp(-t));
            return p * (1.0 - p);
        },
        MeanDomain{0.0, 1.0, true, true}, [](double x) { return std::log(x / (1.0 - x)); }, 1.0,
        kl);
}

ExpFamily make_poisson() {
    auto kl = [](double x, double lam0) { return xlogy(x, x / lam0) - x + lam0; };
    return ExpFamily(
        "poisson", -kInf, kInf, [](double t) { return std::exp(t); },
        [](double t) { return std::exp(t); }, [](double t) { return std::exp(t); },
        MeanDomain{0.0, kInf, true, false}, [](double x) { return std::log(x); }, 1.0, kl);
}

ExpFamily make_gaussian_known_sigma(double sigma) {
    if (!(sigma > 0.0))
        throw std::invalid_argument("make_gaussian_known_sigma: sigma must be > 0");
    const double s2 = sigma * sigma;
    auto kl = [s2](double x, double mu0) {
        const double d = x - mu0;
        return d * d / (2.0 * s2);
    };
    return ExpFamily(
        "gaussian", -kInf, kInf, [s2](double t) { return t * t / (2.0 * s2); },
        [](double t) { return t; }, [s2](double) { return s2; },
        MeanDomain{-kInf, kInf, false, false}, [](double x) { return x; }, s2, kl);
}

namespace {

// Bracket theta with mean(theta) on either side of x, expanding from a
// starting point and clipping into the open theta domain.
std::pair<double, double> bracket_mean(const ExpFamily& fam, double x) {
    double center = 0.0;
    if (!fam.theta_in_domain(center)) {
        if (std::isfinite(fam.theta_lo()) && std::isfinite(fam.theta_hi()))
            center = 0.5 * (fam.theta_lo() + fam.theta_hi());
        else if (std::isfinite(fam.theta_lo()))
            center = fam.theta_lo() + 1.0;
        else
            center = fam.theta_hi() - 1.0;
    }
    double lo = center, hi = center;
    double step = 1.0;
    for (int it = 0; it < 200; ++it) {
        const bool lo_ok = fam.mean(lo) <= x;
        const bool hi_ok = fam.mean(hi) >= x;
        if (lo_ok && hi_ok) return {lo, hi};
        if (!lo_ok) {
            if (std::isfinite(fam.theta_lo()))
                lo = 0.5 * (lo + fam.theta_lo());
            else
                lo -= step;
        }
        if (!hi_ok) {
            if (std::isfinite(fam.theta_hi()))
                hi = 0.5 * (hi + fam.theta_hi());
            else
                hi += step;
        }
        step *= 2.0;
    }
    throw ConvergenceError("mle: could not bracket the mean " + std::to_string(x));
}

}  // namespace

std::optional<double> mle(const ExpFamily& fam, double xbar) {
    if (!fam.mean_domain().contains(xbar))
        throw std::domain_error("mle: sample mean outside the mean domain");
    if (!fam.mean_domain().interior(xbar)) return std::nullopt;
    if (fam.has_mean_inverse()) return fam.mean_inverse(xbar);
    auto [lo, hi] = bracket_mean(fam, xbar);
    if (lo == hi) return lo;
    Tolerance tol;
    tol.abs_tol = 1e-13 * std::max(1.0, std::fabs(xbar));
    tol.rel_tol = 1e-13;
    return solve_monotone([&](double t) { return fam.mean(t); }, lo, hi, xbar, tol);
}

double kl_mean(const ExpFamily& fam, double x, double theta0) {
    if (!fam.theta_in_domain(theta0)) throw std::domain_error("kl_mean: theta0 outside Theta");
    if (!fam.mean_domain().contains(x)) throw std::domain_error("kl_mean: x outside mean domain");
    if (fam.has_kl_closed()) return fam.kl_closed_(x, fam.mean(theta0));
    return kl_mean_generic(fam, x, theta0);
}

double kl_mean_between(const ExpFamily& fam, double x, double mu0) {
    if (!fam.mean_domain().contains(x) || !fam.mean_domain().contains(mu0))
        throw std::domain_error("kl_mean_between: mean value outside mean domain");
    if (x == mu0) return 0.0;
    if (fam.has_kl_closed()) return fam.kl_closed_(x, mu0);
    if (!fam.mean_domain().interior(mu0)) return kInf;
    double theta0;
    if (fam.has_mean_inverse()) {
        theta0 = fam.mean_inverse(mu0);
    } else {
        auto t = mle(fam, mu0);
        theta0 = *t;
    }
    return kl_mean_generic(fam, x, theta0);
}

double kl_mean_generic(const ExpFamily& fam, double x, double theta0) {
    if (!fam.theta_in_domain(theta0))
        throw std::domain_error("kl_mean_generic: theta0 outside Theta");
    if (!fam.mean_domain().contains(x))
        throw std::domain_error("kl_mean_generic: x outside mean domain");

    if (fam.mean_domain().interior(x)) {
        const auto theta_hat = mle(fam, x);
        return fam.objective(*theta_hat, x, theta0);
    }

    // Boundary mean: the sup is a limit along theta marching toward the end
    // of Theta on the side of x. Detect convergence or divergence.
    const bool upper = x >= fam.mean(theta0);
    const double end = upper ? fam.theta_hi() : fam.theta_lo();
    double prev = fam.objective(theta0, x, theta0);
    double step = 1.0;
    double theta = theta0;
    for (int k = 0; k < 200; ++k) {
        if (std::isfinite(end)) {
            theta = end + (theta - end) * 0.5;
        } else {
            theta = upper ? theta + step : theta - step;
            step *= 2.0;
        }
        const double val = fam.objective(theta, x, theta0);
        if (!std::isfinite(val) || val > 1e300) return kInf;
        if (std::fabs(val - prev) <= 1e-12 * std::max(1.0, std::fabs(val))) return val;
        prev = std::max(prev, val);
    }
    return prev;
}

}  // namespace tailscan
