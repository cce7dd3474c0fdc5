#pragma once

#include <functional>
#include <string>

#include "ihoc/grid.hpp"
#include "ihoc/report.hpp"

namespace ihoc {

/// Outcome of the three-decade test for lim_{t->inf} q(t) = 0: |q| is sampled
/// at T/100, T/10 and T, must not increase across them and must end below tol.
struct DecayTest {
  Verdict verdict = Verdict::Undetermined;
  double t[3] = {0, 0, 0};
  double q[3] = {0, 0, 0};
  double tol = 0.0;
  std::string note;
};

DecayTest three_decade_decay(const std::function<double(double)>& q, double T, double tol);
/// Same test on knot samples (linear interpolation between knots).
DecayTest three_decade_decay(const TimeGrid& grid, const std::vector<double>& values, double tol);

enum class TailKind { Stabilized, Extrapolated, Divergent };
const char* to_string(TailKind kind);

/// Estimate of the remainder of an improper integral beyond T.
struct TailAssessment {
  TailKind kind = TailKind::Divergent;
  double remainder = 0.0;  // signed estimate of the integral over [T, inf)
  double slope = 0.0;      // d ln|g| / d ln t at T
  double growth = 0.0;     // relative growth of the partial integral over the last decade
  bool finite() const { return kind != TailKind::Divergent; }
};

/// Stabilized: the partial integral grew by at most 1% over [T/10, T].
/// Extrapolated: still growing, but |g| decays faster than t^{-1-0.05}; the
/// remainder then is g(T) T / (-s - 1). Anything else is Divergent.
TailAssessment assess_tail(const std::function<double(double)>& g, double T, double I_T, double I_T10);

/// d ln|g| / d ln t at t from a one-sided difference. -inf when g vanishes there.
double log_slope(const std::function<double(double)>& g, double t);

/// Linear interpolation of knot samples.
double interpolate(const TimeGrid& grid, const std::vector<double>& values, double t);

}  // namespace ihoc
