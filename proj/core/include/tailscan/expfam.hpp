#pragma once

#include <functional>
#include <optional>
#include <string>

#include "tailscan/numerics.hpp"

namespace tailscan {

// Interval of attainable means M (convex hull of the support). Endpoints may
// be infinite; finite endpoints may or may not belong to M.
struct MeanDomain {
    double lo;
    double hi;
    bool lo_attainable = false;
    bool hi_attainable = false;

    bool contains(double x) const;
    bool interior(double x) const;
};

// Regular one-dimensional natural exponential family, indexed so that
// mean() and variance() are the moment maps of the indexing parameter.
// `dispersion` scales the sufficient statistic (1 for a natural family);
// it lets the Gaussian-known-sigma family keep its mean as the index while
// the Legendre machinery stays exact.
class ExpFamily {
  public:
    ExpFamily(std::string name, double theta_lo, double theta_hi,
              std::function<double(double)> log_partition, std::function<double(double)> mean,
              std::function<double(double)> variance, MeanDomain mean_domain,
              std::function<double(double)> mean_inverse = nullptr, double dispersion = 1.0,
              std::function<double(double, double)> kl_closed = nullptr);

    const std::string& name() const { return name_; }
    double theta_lo() const { return theta_lo_; }
    double theta_hi() const { return theta_hi_; }
    bool theta_in_domain(double theta) const;
    const MeanDomain& mean_domain() const { return mean_domain_; }
    double dispersion() const { return dispersion_; }
    bool has_mean_inverse() const { return static_cast<bool>(mean_inverse_); }
    bool has_kl_closed() const { return static_cast<bool>(kl_closed_); }

    double log_partition(double theta) const { return log_partition_(theta); }
    double mean(double theta) const { return mean_(theta); }
    double variance(double theta) const { return variance_(theta); }
    double mean_inverse(double x) const;

    // ((theta - theta0) x) / dispersion - (A(theta) - A(theta0)); the
    // per-observation log likelihood ratio before taking the sup.
    double objective(double theta, double x, double theta0) const;

  private:
    std::string name_;
    double theta_lo_, theta_hi_;
    std::function<double(double)> log_partition_, mean_, variance_;
    MeanDomain mean_domain_;
    std::function<double(double)> mean_inverse_;
    double dispersion_;
    std::function<double(double, double)> kl_closed_;

    friend double kl_mean(const ExpFamily&, double, double);
    friend double kl_mean_between(const ExpFamily&, double, double);
};

ExpFamily make_bernoulli();
ExpFamily make_poisson();
ExpFamily make_gaussian_known_sigma(double sigma);

// MLE of the indexing parameter at sample mean xbar. Empty when xbar sits on
// the boundary of M, where the supremum is approached but not attained.
std::optional<double> mle(const ExpFamily& fam, double xbar);

// sup_theta of objective(theta, x, theta0): the per-observation KL between
// the mean value x and the parameter theta0, in mean coordinates. Returns
// +inf when the boundary limit diverges.
double kl_mean(const ExpFamily& fam, double x, double theta0);

// Same divergence with the reference given as a mean value in M.
double kl_mean_between(const ExpFamily& fam, double x, double mu0);

// Always-numeric route (mle + objective, boundary limits by marching): kept
// separate so the closed forms can be checked against it.
double kl_mean_generic(const ExpFamily& fam, double x, double theta0);

}  // namespace tailscan
