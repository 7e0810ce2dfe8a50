#include "tailscan/logconcave.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace tailscan {

namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112353;

}  // namespace

SymmetricLogConcave standard_normal_law() {
    SymmetricLogConcave law;
    law.name = "normal";
    law.log_density_half = [](double x) { return -0.5 * (kLog2Pi + x * x); };
    law.f0 = 0.3989422804014326779399460599343819;
    law.draw = [](Rng& rng) { return rng.normal(); };
    law.variance = 1.0;
    // E|X|^s = 2^(s/2) Gamma((s+1)/2) / sqrt(pi)
    law.abs_moment_closed = [](double s) {
        return std::exp(0.5 * s * std::log(2.0) + std::lgamma(0.5 * (s + 1.0)) -
                        0.5723649429247000870717136756765294);  // log sqrt(pi)
    };
    return law;
}

SymmetricLogConcave laplace_law(double scale) {
    if (!(scale > 0.0)) throw std::invalid_argument("laplace_law: scale must be > 0");
    SymmetricLogConcave law;
    law.name = "laplace";
    law.log_density_half = [scale](double x) { return -std::log(2.0 * scale) - x / scale; };
    law.f0 = 1.0 / (2.0 * scale);
    law.draw = [scale](Rng& rng) { return rng.laplace(scale); };
    law.variance = 2.0 * scale * scale;
    law.abs_moment_closed = [scale](double s) {
        return std::exp(std::lgamma(s + 1.0) + s * std::log(scale));
    };
    return law;
}

SymmetricLogConcave uniform_law(double half_width) {
    if (!(half_width > 0.0)) throw std::invalid_argument("uniform_law: half_width must be > 0");
    SymmetricLogConcave law;
    law.name = "uniform";
    law.log_density_half = [half_width](double x) {
        return x <= half_width ? -std::log(2.0 * half_width)
                               : -std::numeric_limits<double>::infinity();
    };
    law.f0 = 1.0 / (2.0 * half_width);
    law.draw = [half_width](Rng& rng) { return rng.uniform(-half_width, half_width); };
    law.variance = half_width * half_width / 3.0;
    law.abs_moment_closed = [half_width](double s) {
        return std::pow(half_width, s) / (s + 1.0);
    };
    return law;
}

std::vector<SymmetricLogConcave> builtin_laws() {
    return {standard_normal_law(), laplace_law(1.0), uniform_law(1.0)};
}

double abs_moment(const SymmetricLogConcave& law, double s) {
    if (!(s > 0.0)) throw std::invalid_argument("abs_moment: s must be > 0");
    if (law.abs_moment_closed) return law.abs_moment_closed(s);
    return abs_moment_quadrature(law, s);
}

double abs_moment_quadrature(const SymmetricLogConcave& law, double s) {
    if (!(s > 0.0)) throw std::invalid_argument("abs_moment_quadrature: s must be > 0");
    const double scale = 1.0 / (2.0 * law.f0);
    Tolerance tol;
    tol.abs_tol = 1e-14;
    tol.rel_tol = 1e-12;
    auto integrand = [&](double x) {
        const double lf = law.log_density_half(x);
        if (!std::isfinite(lf)) return 0.0;
        return std::exp(s * std::log(x) + lf);
    };
    return 2.0 * integrate_halfline(integrand, scale, tol);
}

double prop2_gap(const SymmetricLogConcave& law, double r, double s) {
    if (!(r > 0.0) || !(s > 0.0)) throw std::invalid_argument("prop2_gap: r,s must be > 0");
    const double mr = abs_moment(law, r);
    const double ms = abs_moment(law, s);
    const double rhs = std::pow(mr, s / r) * std::tgamma(s + 1.0) * std::pow(r + 1.0, s / r);
    return rhs - ms;
}

std::vector<double> sample(const SymmetricLogConcave& law, int n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample: n must be >= 1");
    Rng rng(seed);
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = law.draw(rng);
    return out;
}

}  // namespace tailscan
