#pragma once

#include <span>
#include <vector>

namespace tailscan {

// Contrast coefficients: sum zero, unit norm, n >= 3. Validated on build.
class Contrast {
  public:
    explicit Contrast(std::vector<double> b);

    // Cor 1.1 coefficients for a window of the first m out of n entries,
    // normalized to unit norm.
    static Contrast centered_window(int m, int n);

    std::span<const double> coefficients() const { return b_; }
    int size() const { return static_cast<int>(b_.size()); }

  private:
    std::vector<double> b_;
};

// V = sum b_i x_i / sqrt(sample variance). |V| <= sqrt(n-1).
double studentized_contrast(std::span<const double> x, const Contrast& b);

// The empirically centered t statistic for the window x_1..x_m.
double centered_t(std::span<const double> x, int m);

// Exact Pr(V > t) from V^2/(n-1) ~ Beta(1/2, (n-2)/2). Symmetric in t;
// zero beyond the support bound sqrt(n-1).
double pivot_tail_exact(double t, int n);

// Smallest threshold sqrt(g(n-1)) past which the pivot density sits below the
// standard normal density, g(m) = (3/4) m (sqrt(1 + 16/(m-3)) - 1).
double normal_domination_threshold(int n);

// g(m) itself, exposed for the threshold replication checks.
double pivot_density_domination_g(int m);

}  // namespace tailscan
