#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace renorm {

/// Violated precondition on an argument (non-positive level, bad grid, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The inner monotone iteration of a time step did not reach its tolerance.
class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(const std::string& what, double residual, std::size_t time_index, double time)
      : std::runtime_error(what), residual_(residual), time_index_(time_index), time_(time) {}

  double residual() const noexcept { return residual_; }
  std::size_t time_index() const noexcept { return time_index_; }
  double time() const noexcept { return time_; }

 private:
  double residual_;
  std::size_t time_index_;
  double time_;
};

/// NaN or infinity produced during assembly or the linear solve.
class NumericalBreakdown : public std::runtime_error {
 public:
  NumericalBreakdown(const std::string& what, std::size_t time_index)
      : std::runtime_error(what), time_index_(time_index) {}
  std::size_t time_index() const noexcept { return time_index_; }

 private:
  std::size_t time_index_;
};

}  // namespace renorm
