#include "tailscan/numerics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "tailscan/errors.hpp"

namespace tailscan {

namespace {

constexpr double kInvSqrt2 = 0.7071067811865475244008443621048490;
constexpr double kInvSqrt2Pi = 0.3989422804014326779399460599343819;

// phi(t)/Phibar(t) by the Laplace continued fraction for the Mills ratio:
// Phibar(t) = phi(t) / (t + 1/(t + 2/(t + 3/(t + ...)))), t > 0 large.
double hazard_continued_fraction(double t) {
    double cf = 0.0;
    for (int k = 60; k >= 1; --k) {
        cf = static_cast<double>(k) / (t + cf);
    }
    return t + cf;
}

}  // namespace

void Tolerance::validate() const {
    if (!(abs_tol > 0.0)) throw std::invalid_argument("Tolerance: abs_tol must be > 0");
    if (!(rel_tol > 0.0)) throw std::invalid_argument("Tolerance: rel_tol must be > 0");
    if (max_iter < 1) throw std::invalid_argument("Tolerance: max_iter must be >= 1");
}

double normal_pdf(double t) {
    return kInvSqrt2Pi * std::exp(-0.5 * t * t);
}

double normal_upper_tail(double t) {
    if (std::isnan(t)) throw std::invalid_argument("normal_upper_tail: t must be finite");
    if (t < 0.0) return 1.0 - normal_upper_tail(-t);
    // erfc keeps full relative accuracy until its result goes subnormal
    // (t around 37); switch to the scaled form well before that.
    if (t < 30.0) return 0.5 * std::erfc(t * kInvSqrt2);
    return normal_pdf(t) / hazard_continued_fraction(t);
}

double normal_hazard(double t) {
    if (std::isnan(t)) throw std::invalid_argument("normal_hazard: t must be finite");
    if (t >= 30.0) return hazard_continued_fraction(t);
    return normal_pdf(t) / normal_upper_tail(t);
}

namespace {

// Lentz evaluation of the incomplete beta continued fraction, valid for
// x < (a+1)/(a+b+2).
double beta_cf(double x, double a, double b) {
    constexpr double kTiny = 1e-300;
    constexpr double kEps = 1e-16;
    const int max_m = 400;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_m; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) return h;
    }
    throw ConvergenceError("reg_inc_beta: continued fraction did not converge");
}

}  // namespace

double reg_inc_beta(double x, double a, double b) {
    if (!(a > 0.0) || !(b > 0.0))
        throw std::domain_error("reg_inc_beta: a and b must be positive");
    if (!(x >= 0.0) || !(x <= 1.0))
        throw std::domain_error("reg_inc_beta: x must lie in [0,1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;

    const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                             a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_cf(x, a, b) / a;
    }
    return 1.0 - front * beta_cf(1.0 - x, b, a) / b;
}

double solve_monotone(const std::function<double(double)>& f, double lo, double hi,
                      double target, const Tolerance& tol) {
    tol.validate();
    if (!(lo < hi)) throw std::invalid_argument("solve_monotone: need lo < hi");

    const double flo = f(lo);
    const double fhi = f(hi);
    const bool increasing = fhi >= flo;
    // g is nondecreasing with a sign change on [lo, hi].
    auto g = [&](double x) { return increasing ? f(x) - target : target - f(x); };

    double ga = increasing ? flo - target : target - flo;
    double gb = increasing ? fhi - target : target - fhi;
    if (ga == 0.0) return lo;
    if (gb == 0.0) return hi;
    if (ga > 0.0 || gb < 0.0) {
        throw NoBracketError("solve_monotone: [f(lo), f(hi)] does not bracket target=" +
                             std::to_string(target));
    }

    double a = lo, b = hi;
    for (int it = 0; it < tol.max_iter; ++it) {
        // Secant proposal on even iterations, forced bisection on odd ones,
        // so the bracket at least halves every second step.
        const double w = b - a;
        double x = 0.5 * (a + b);
        if (it % 2 == 0 && gb != ga) {
            const double sec = a - ga * (b - a) / (gb - ga);
            if (sec > a + 0.01 * w && sec < b - 0.01 * w) x = sec;
        }

        const double gx = g(x);
        if (std::fabs(gx) <= tol.abs_tol) return x;
        if (gx < 0.0) {
            a = x;
            ga = gx;
        } else {
            b = x;
            gb = gx;
        }
        if (b - a <= tol.rel_tol * std::fabs(x) + std::numeric_limits<double>::min()) {
            return 0.5 * (a + b);
        }
    }
    throw ConvergenceError("solve_monotone: max_iter exceeded");
}

namespace {

struct QuadAccum {
    double total = 0.0;
    double err = 0.0;
};

double simpson(double fa, double fm, double fb, double h) {
    return h / 6.0 * (fa + 4.0 * fm + fb);
}

void adapt(const std::function<double(double)>& f, double a, double b, double fa, double fm,
           double fb, double whole, double eps, int depth, QuadAccum& acc) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(fa, flm, fm, m - a);
    const double right = simpson(fm, frm, fb, b - m);
    const double delta = left + right - whole;
    // Depth cap makes jump discontinuities terminate: the offending panel
    // shrinks geometrically and its residual is accounted in acc.err.
    if (depth >= 60 || std::fabs(delta) <= 15.0 * eps) {
        acc.total += left + right + delta / 15.0;
        acc.err += std::fabs(delta) / 15.0;
        return;
    }
    adapt(f, a, m, fa, flm, fm, left, 0.5 * eps, depth + 1, acc);
    adapt(f, m, b, fm, frm, fb, right, 0.5 * eps, depth + 1, acc);
}

}  // namespace

double integrate_halfline(const std::function<double(double)>& g, double decay_scale,
                          const Tolerance& tol) {
    tol.validate();
    if (!(decay_scale > 0.0))
        throw std::invalid_argument("integrate_halfline: decay_scale must be > 0");

    // x = s*u/(1-u) maps (0,1) onto (0,inf); integrand includes the Jacobian.
    const double s = decay_scale;
    auto mapped = [&](double u) -> double {
        if (u <= 0.0) return 0.0;
        const double omu = 1.0 - u;
        if (omu <= 1e-14) return 0.0;
        const double x = s * u / omu;
        const double v = g(x);
        if (!std::isfinite(v)) return 0.0;
        return v * s / (omu * omu);
    };

    // Rough scale pass to set the absolute tolerance of the adaptive pass.
    const int kSeed = 16;
    double rough = 0.0;
    for (int i = 0; i < kSeed; ++i) {
        const double u = (i + 0.5) / kSeed;
        rough += mapped(u) / kSeed;
    }
    const double eps0 =
        std::max(tol.abs_tol, 0.1 * tol.rel_tol * std::max(std::fabs(rough), 1.0));

    QuadAccum acc;
    for (int i = 0; i < kSeed; ++i) {
        const double a = static_cast<double>(i) / kSeed;
        const double b = static_cast<double>(i + 1) / kSeed;
        const double m = 0.5 * (a + b);
        const double fa = mapped(a);
        const double fm = mapped(m);
        const double fb = mapped(b);
        adapt(mapped, a, b, fa, fm, fb, simpson(fa, fm, fb, b - a), eps0 / kSeed, 0, acc);
    }
    if (!std::isfinite(acc.total))
        throw ConvergenceError("integrate_halfline: non-finite integrand");
    if (acc.err > 1e3 * eps0 + tol.rel_tol * std::fabs(acc.total))
        throw ConvergenceError("integrate_halfline: refinement budget exhausted");
    return acc.total;
}

}  // namespace tailscan
