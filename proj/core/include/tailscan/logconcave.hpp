#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tailscan/numerics.hpp"
#include "tailscan/rng.hpp"

namespace tailscan {

// Symmetric log-concave law, given by its log density on [0, inf) plus the
// density at zero. Closed-form moments are attached where known so the
// quadrature route can be checked against them.
struct SymmetricLogConcave {
    std::string name;
    std::function<double(double)> log_density_half;  // x >= 0 -> log f(x)
    double f0 = 0.0;
    std::function<double(Rng&)> draw;
    std::optional<double> variance;
    std::function<double(double)> abs_moment_closed;  // s -> E|X|^s, may be null
};

SymmetricLogConcave standard_normal_law();
SymmetricLogConcave laplace_law(double scale);
SymmetricLogConcave uniform_law(double half_width);

// The canonical trio used by the verification harness: N(0,1), Laplace(1),
// Uniform(-1,1).
std::vector<SymmetricLogConcave> builtin_laws();

// E|X|^s. Closed form when the law carries one, otherwise quadrature.
double abs_moment(const SymmetricLogConcave& law, double s);

// Always-numeric route: 2 * integral of x^s f(x) over (0, inf).
double abs_moment_quadrature(const SymmetricLogConcave& law, double s);

// RHS - LHS of the moment inequality
// E|X|^s <= (E|X|^r)^(s/r) Gamma(s+1) (r+1)^(s/r); nonnegative up to
// quadrature slack for every symmetric log-concave law.
double prop2_gap(const SymmetricLogConcave& law, double r, double s);

// n iid draws with an explicit seed.
std::vector<double> sample(const SymmetricLogConcave& law, int n, std::uint64_t seed);

}  // namespace tailscan
