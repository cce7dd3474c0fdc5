#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ihoc/grid.hpp"
#include "ihoc/limits.hpp"

namespace ihoc {

struct QuadOptions {
  // g(t) ~ c t^e near 0; the first cell is then integrated analytically.
  std::optional<double> pole_exponent;
  // B(T) >= |integral over [T, inf)|; replaces the tail assessment when set.
  std::function<double(double)> tail_bound;
  bool with_tail = true;
};

/// Composite Simpson on the grid (two panels per cell, compared against one
/// panel for the error estimate) plus a tail estimate beyond T.
struct QuadratureResult {
  double value = 0.0;      // truncated + tail
  double truncated = 0.0;  // integral over [0, T]
  double tail = 0.0;
  TailAssessment tail_assessment;
  bool tail_declared = false;
  bool finite = true;
  double achieved_tol = 0.0;
  double T = 0.0;
  double pole_exponent = 0.0;                       // exponent used in the first cell (0 when regular)
  std::vector<double> cumulative;                   // integral over [0, t_k]
  std::vector<std::pair<double, double>> partials;  // (t, integral over [0, t]) at decades
  std::string note;
};

QuadratureResult integrate(const std::function<double(double)>& g, const TimeGrid& grid, const QuadOptions& opt = {});

}  // namespace ihoc
