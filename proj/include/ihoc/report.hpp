#pragma once

#include <string>
#include <vector>

namespace ihoc {

enum class Verdict { Pass, Fail, Undetermined, NotApplicable, Assumed, NoCounterexample };

const char* to_string(Verdict v);
inline bool passing(Verdict v) { return v == Verdict::Pass || v == Verdict::NoCounterexample || v == Verdict::Assumed; }

enum class Mode { Strong, Weak };
const char* to_string(Mode mode);

/// A sample point at which a property was measured (usually where it failed).
struct Witness {
  double t = 0.0;
  double value = 0.0;
  std::vector<double> x;
  std::vector<double> u;
  std::string note;
};

/// Tolerance set shared by all checks. Defaults are echoed in every report header.
struct Tolerances {
  double activity = 1e-8;
  double limit = 0.05;  // three-decade decay threshold
  double adjoint_residual = 1e-6;
  double maximum = 1e-8;  // relative to 1 + |H|
  double weak_inequality = 1e-8;
  double route_agreement = 1e-5;
  double concavity = 1e-9;  // relative to 1 + |H|
  double gradient = 1e-6;
  double ill_conditioned = 1e12;
};

}  // namespace ihoc
