#include "ihoc/error.hpp"

#include <cstdio>
#include <sstream>

namespace ihoc {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SyntaxError:
      return "SyntaxError";
    case ErrorKind::UnknownIdentifier:
      return "UnknownIdentifier";
    case ErrorKind::DimensionMismatch:
      return "DimensionMismatch";
    case ErrorKind::DomainError:
      return "DomainError";
    case ErrorKind::EmptyControlSet:
      return "EmptyControlSet";
    case ErrorKind::InvalidGrid:
      return "InvalidGrid";
    case ErrorKind::NonPositiveWeight:
      return "NonPositiveWeight";
    case ErrorKind::MissingTailBound:
      return "MissingTailBound";
    case ErrorKind::InvalidExponent:
      return "InvalidExponent";
    case ErrorKind::EmptyTube:
      return "EmptyTube";
    case ErrorKind::InfeasibleState:
      return "InfeasibleState";
    case ErrorKind::BlowUp:
      return "BlowUp";
    case ErrorKind::IllConditioned:
      return "IllConditioned";
    case ErrorKind::DivergentTail:
      return "DivergentTail";
    case ErrorKind::AtomOffActiveSet:
      return "AtomOffActiveSet";
    case ErrorKind::InvalidMeasure:
      return "InvalidMeasure";
    case ErrorKind::UnboundedAbove:
      return "UnboundedAbove";
    case ErrorKind::InvalidInterval:
      return "InvalidInterval";
    case ErrorKind::InvalidArgument:
      return "InvalidArgument";
    case ErrorKind::CannotConcentrate:
      return "CannotConcentrate";
    case ErrorKind::IoError:
      return "IoError";
  }
  return "Error";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

namespace {

std::string located(const std::string& message, int line, int column) {
  std::ostringstream os;
  os << "line " << line << ", column " << column << ": " << message;
  return os.str();
}

std::string with_point(const std::string& what, double t, const std::vector<double>& x, const std::vector<double>& u) {
  std::ostringstream os;
  os.precision(17);
  os << what << " at t=" << t;
  auto dump = [&os](const char* name, const std::vector<double>& v) {
    os << ", " << name << "=(";
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
    os << ")";
  };
  if (!x.empty()) dump("x", x);
  if (!u.empty()) dump("u", u);
  return os.str();
}

}  // namespace

SyntaxError::SyntaxError(const std::string& message, int line, int column)
    : Error(ErrorKind::SyntaxError, located(message, line, column)), line_(line), column_(column) {}

DomainError::DomainError(const std::string& what, double t, std::vector<double> x, std::vector<double> u)
    : Error(ErrorKind::DomainError, with_point(what, t, x, u)), t_(t), x_(std::move(x)), u_(std::move(u)) {}

BlowUp::BlowUp(const std::string& message, double escape_time)
    : Error(ErrorKind::BlowUp, message), escape_time_(escape_time) {}

InfeasibleState::InfeasibleState(int constraint, double t, double value)
    : Error(ErrorKind::InfeasibleState,
            "g" + std::to_string(constraint + 1) + " = " + std::to_string(value) + " > 0 at t=" + std::to_string(t)),
      constraint_(constraint),
      t_(t),
      value_(value) {}

}  // namespace ihoc
