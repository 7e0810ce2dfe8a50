#include "tailscan/studentized.hpp"

#include <cmath>
#include <stdexcept>

#include "tailscan/errors.hpp"
#include "tailscan/numerics.hpp"

namespace tailscan {

Contrast::Contrast(std::vector<double> b) : b_(std::move(b)) {
    const int n = static_cast<int>(b_.size());
    if (n < 3) throw std::invalid_argument("Contrast: need n >= 3");
    double sum = 0.0, sumsq = 0.0;
    for (double v : b_) {
        sum += v;
        sumsq += v * v;
    }
    if (std::fabs(sum) > 1e-12)
        throw std::invalid_argument("Contrast: coefficients must sum to 0");
    if (std::fabs(sumsq - 1.0) > 1e-12)
        throw std::invalid_argument("Contrast: coefficients must have unit norm");
}

Contrast Contrast::centered_window(int m, int n) {
    if (n < 3 || m < 1 || m >= n)
        throw std::invalid_argument("Contrast: need n >= 3 and 1 <= m < n");
    const double frac = static_cast<double>(m) / n;
    const double norm = std::sqrt(m * (1.0 - frac));
    std::vector<double> b(n);
    for (int i = 0; i < n; ++i) {
        b[i] = ((i < m) ? 1.0 - frac : -frac) / norm;
    }
    return Contrast(std::move(b));
}

double studentized_contrast(std::span<const double> x, const Contrast& b) {
    const int n = b.size();
    if (static_cast<int>(x.size()) != n)
        throw std::invalid_argument("studentized_contrast: data/contrast size mismatch");
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= n;
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    if (ss <= 0.0)
        throw DegenerateDataError("studentized_contrast: zero sample variance");
    double num = 0.0;
    const auto coef = b.coefficients();
    for (int i = 0; i < n; ++i) num += coef[i] * x[i];
    return num / std::sqrt(ss / (n - 1));
}

double centered_t(std::span<const double> x, int m) {
    const int n = static_cast<int>(x.size());
    return studentized_contrast(x, Contrast::centered_window(m, n));
}

double pivot_tail_exact(double t, int n) {
    if (n < 3) throw std::invalid_argument("pivot_tail_exact: need n >= 3");
    if (t < 0.0) return 1.0 - pivot_tail_exact(-t, n);
    const double m = n - 1.0;
    if (t * t >= m) return 0.0;
    // Pr(V > t) = (1/2) I_{1 - t^2/m}((n-2)/2, 1/2); the swapped form avoids
    // the cancellation of 1 - I_x near the far tail.
    return 0.5 * reg_inc_beta(1.0 - t * t / m, 0.5 * (n - 2), 0.5);
}

double pivot_density_domination_g(int m) {
    if (m < 4) throw std::invalid_argument("pivot_density_domination_g: need m >= 4");
    return 0.75 * m * (std::sqrt(1.0 + 16.0 / (m - 3.0)) - 1.0);
}

double normal_domination_threshold(int n) {
    if (n < 6) throw std::invalid_argument("normal_domination_threshold: need n >= 6");
    return std::sqrt(pivot_density_domination_g(n - 1));
}

}  // namespace tailscan
