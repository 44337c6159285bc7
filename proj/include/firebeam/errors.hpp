// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace firebeam {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
  /// Short machine-readable tag, used by the CLI error JSON.
  virtual const char* kind() const noexcept { return "error"; }
};

/// Caller broke a documented precondition (shape mismatch, bad argument).
class ContractViolation : public Error {
public:
  using Error::Error;
  const char* kind() const noexcept override { return "contract_violation"; }
};

/// NaN/Inf encountered in an input or an evaluated quantity.
class NumericError : public Error {
public:
  using Error::Error;
  const char* kind() const noexcept override { return "numeric_error"; }
};

/// An iterative kernel ran out of iterations.
class IterationLimit : public Error {
public:
  IterationLimit(const std::string& what, double last_residual)
      : Error(what), residual_(last_residual) {}
  double residual() const noexcept { return residual_; }
  const char* kind() const noexcept override { return "iteration_limit"; }

private:
  double residual_;
};

/// Factorization found the matrix not Hermitian positive definite.
class SingularMatrix : public Error {
public:
  using Error::Error;
  const char* kind() const noexcept override { return "singular_matrix"; }
};

/// A user channel is orthogonal to the current iterate.
class DegenerateChannel : public Error {
public:
  using Error::Error;
  const char* kind() const noexcept override { return "degenerate_channel"; }
};

/// Power recovery produced a non-positive power.
class Infeasible : public Error {
public:
  using Error::Error;
  const char* kind() const noexcept override { return "infeasible"; }
};

/// Configuration is incomplete or inconsistent.
class ValidationError : public Error {
public:
  using Error::Error;
  const char* kind() const noexcept override { return "validation_error"; }
};

/// An evaluator failed inside the firefly main loop.
class SolveError : public Error {
public:
  SolveError(const std::string& what, int generation)
      : Error(what + " (generation " + std::to_string(generation) + ")"),
        generation_(generation) {}
  int generation() const noexcept { return generation_; }
  const char* kind() const noexcept override { return "solve_error"; }

private:
  int generation_;
};

}  // namespace firebeam
