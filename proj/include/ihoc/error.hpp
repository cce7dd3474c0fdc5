#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ihoc {

enum class ErrorKind {
  SyntaxError,
  UnknownIdentifier,
  DimensionMismatch,
  DomainError,
  EmptyControlSet,
  InvalidGrid,
  NonPositiveWeight,
  MissingTailBound,
  InvalidExponent,
  EmptyTube,
  InfeasibleState,
  BlowUp,
  IllConditioned,
  DivergentTail,
  AtomOffActiveSet,
  InvalidMeasure,
  UnboundedAbove,
  InvalidInterval,
  InvalidArgument,
  CannotConcentrate,
  IoError,
};

const char* to_string(ErrorKind kind);

/// Base class of every error raised by the toolkit. what() is prefixed with
/// the error kind name so CLI output names the failed condition directly.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& message, int line, int column);
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

/// Raised by expression evaluation outside the function's domain; carries the
/// offending evaluation point.
class DomainError : public Error {
 public:
  DomainError(const std::string& what, double t, std::vector<double> x, std::vector<double> u);
  double t() const noexcept { return t_; }
  const std::vector<double>& x() const noexcept { return x_; }
  const std::vector<double>& u() const noexcept { return u_; }

 private:
  double t_;
  std::vector<double> x_;
  std::vector<double> u_;
};

class BlowUp : public Error {
 public:
  BlowUp(const std::string& message, double escape_time);
  double escape_time() const noexcept { return escape_time_; }

 private:
  double escape_time_;
};

class InfeasibleState : public Error {
 public:
  InfeasibleState(int constraint, double t, double value);
  int constraint() const noexcept { return constraint_; }
  double t() const noexcept { return t_; }
  double value() const noexcept { return value_; }

 private:
  int constraint_;
  double t_;
  double value_;
};

}  // namespace ihoc
