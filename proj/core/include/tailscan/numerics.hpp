#pragma once

#include <functional>

namespace tailscan {

// Shared stopping rules for the iterative kernels below.
struct Tolerance {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_iter = 200;

    void validate() const;
};

// Upper tail Phibar(t) = Pr(N(0,1) > t). erfc in the central range, a
// Mills-ratio continued fraction once erfc loses precision in the far tail.
// Monotone nonincreasing; Phibar(t) + Phibar(-t) = 1.
double normal_upper_tail(double t);

// Standard normal density phi(t).
double normal_pdf(double t);

// Hazard phi(t)/Phibar(t), stable for large t where both factors underflow.
double normal_hazard(double t);

// Regularized incomplete beta I_x(a,b) via the Lentz continued fraction with
// the usual symmetry switch at x > (a+1)/(a+b+2).
double reg_inc_beta(double x, double a, double b);

// Solves f(x) = target for monotone (nondecreasing or nonincreasing) f on
// [lo, hi]. Brent steps with a bisection fallback; [lo, hi] must bracket the
// target. Throws NoBracketError / ConvergenceError.
double solve_monotone(const std::function<double(double)>& f, double lo, double hi,
                      double target, const Tolerance& tol = {});

// Integral of g over (0, inf) for integrable, eventually decaying g.
// decay_scale sets the substitution x = decay_scale * u / (1 - u).
double integrate_halfline(const std::function<double(double)>& g, double decay_scale,
                          const Tolerance& tol = {});

}  // namespace tailscan
