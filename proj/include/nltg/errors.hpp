#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace nltg {

/// Bad input to a library call (wrong sizes, unsupported degree, point off the domain).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A linear solve that did not reach its residual target.
class SolverFailure : public std::runtime_error {
 public:
  SolverFailure(const std::string& what, double achieved_relative_residual)
      : std::runtime_error(what), achieved_(achieved_relative_residual) {}

  double achieved_residual() const noexcept { return achieved_; }

 private:
  double achieved_;
};

/// Newton ran out of iterations. Carries the l2 residual norm of every iterate.
class NonlinearFailure : public std::runtime_error {
 public:
  NonlinearFailure(const std::string& what, std::vector<double> history)
      : std::runtime_error(what), history_(std::move(history)) {}

  const std::vector<double>& residual_history() const noexcept { return history_; }

 private:
  std::vector<double> history_;
};

}  // namespace nltg
