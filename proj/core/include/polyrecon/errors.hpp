#pragma once

#include <stdexcept>
#include <string>

namespace polyrecon {

/// Input violates a documented precondition or type invariant.
class ValidationError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical routine could not reach its tolerance within budget.
class ConvergenceError : public std::runtime_error {
public:
  ConvergenceError(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_(achieved) {}
  double achieved() const noexcept { return achieved_; }

private:
  double achieved_;
};

/// No polytope is consistent with the supplied facet data.
class ReconstructionError : public std::runtime_error {
public:
  ReconstructionError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

private:
  double residual_;
};

/// File could not be read, written or parsed.
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace polyrecon
