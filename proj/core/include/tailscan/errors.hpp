#pragma once

#include <stdexcept>
#include <string>

namespace tailscan {

// Root finder was handed an interval that does not bracket the target.
class NoBracketError : public std::runtime_error {
  public:
    explicit NoBracketError(const std::string& what) : std::runtime_error(what) {}
};

// An iterative routine ran out of its iteration or refinement budget.
class ConvergenceError : public std::runtime_error {
  public:
    explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

// Input data admits no statistic (constant sample, all-zero transform, ...).
class DegenerateDataError : public std::invalid_argument {
  public:
    explicit DegenerateDataError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace tailscan
