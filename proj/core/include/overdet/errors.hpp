#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace overdet {

/// Broad failure classes; the CLI maps these onto its exit codes.
enum class ErrorKind {
  domain,        // argument outside the mathematical domain of a function
  solver,        // a numerical procedure failed to converge or certify its result
  precondition,  // the requested configuration violates a modelling assumption
  internal,      // a property the theory guarantees did not hold (implementation bug)
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorKind::domain, what) {}
};

/// find_zero was handed an interval without a sign change.
class BracketError : public Error {
 public:
  BracketError(const std::string& what, double lo, double hi, double f_lo, double f_hi)
      : Error(ErrorKind::solver, what), lo(lo), hi(hi), f_lo(f_lo), f_hi(f_hi) {}
  double lo, hi, f_lo, f_hi;
};

class IntegralityError : public Error {
 public:
  IntegralityError(const std::string& what, int degree, double value)
      : Error(ErrorKind::internal, what), degree(degree), value(value) {}
  int degree;
  double value;
};

/// rho outside the admissible interval (0, 1/lambda_bar_2): the family has no member there.
class NoSolution : public Error {
 public:
  explicit NoSolution(const std::string& what) : Error(ErrorKind::solver, what) {}
};

struct ShootingSample {
  double center;         // v(0)
  double center_defect;  // 1 - v(0), kept separately to avoid cancellation
  bool short_orbit;      // second zero reached before R
};

class ShootingFailure : public Error {
 public:
  ShootingFailure(const std::string& what, std::vector<ShootingSample> scan)
      : Error(ErrorKind::solver, what), scan(std::move(scan)) {}
  std::vector<ShootingSample> scan;
};

class ConvergenceFailure : public Error {
 public:
  explicit ConvergenceFailure(const std::string& what) : Error(ErrorKind::solver, what) {}
};

class PropertyViolation : public Error {
 public:
  explicit PropertyViolation(const std::string& what) : Error(ErrorKind::internal, what) {}
};

class MonotonicityViolation : public Error {
 public:
  explicit MonotonicityViolation(const std::string& what)
      : Error(ErrorKind::internal, what) {}
};

class ChannelDegenerate : public Error {
 public:
  ChannelDegenerate(const std::string& what, double relative_boundary_value)
      : Error(ErrorKind::solver, what), relative_boundary_value(relative_boundary_value) {}
  double relative_boundary_value;
};

/// A sampled parameter curve that never changes sign.
class NoSignChange : public Error {
 public:
  NoSignChange(const std::string& what, std::vector<std::pair<double, double>> samples)
      : Error(ErrorKind::solver, what), samples(std::move(samples)) {}
  std::vector<std::pair<double, double>> samples;
};

/// The symmetry group does not satisfy the spectral gap / odd multiplicity assumption.
class ConditionGFailure : public Error {
 public:
  explicit ConditionGFailure(const std::string& what) : Error(ErrorKind::precondition, what) {}
};

}  // namespace overdet
