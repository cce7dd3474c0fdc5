#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "ihoc/expr.hpp"
#include "ihoc/grid.hpp"

namespace ihoc {

/// Closed-form process components as expressions of t. Any part may be empty.
struct ClosedForm {
  std::vector<Expression> x;
  std::vector<Expression> u;
  std::vector<Expression> p;
  std::vector<Expression> xdot;  // derived from x when left empty

  static Vec eval(const std::vector<Expression>& e, double t);
};

/// Sampled process on a grid: x is interpolated linearly, u is piecewise
/// constant and left-continuous (u on (t_k, t_{k+1}] is u[k+1]). When a closed
/// form is attached it takes precedence over the samples for evaluation.
class CandidateProcess {
 public:
  TimeGrid grid;
  std::vector<Vec> x;
  std::vector<Vec> u;
  std::optional<ClosedForm> closed;

  static CandidateProcess from_closed_form(const ClosedForm& cf, const TimeGrid& grid);

  int n() const { return x.empty() ? 0 : static_cast<int>(x.front().size()); }
  int m() const { return u.empty() ? 0 : static_cast<int>(u.front().size()); }
  bool has_closed_state() const { return closed && !closed->x.empty(); }
  bool has_closed_control() const { return closed && !closed->u.empty(); }

  Vec state_at(double t) const;
  /// dx/dt: symbolic for closed forms, otherwise the slope of the containing cell.
  Vec state_rate(double t) const;
  /// Control used inside cell k (t_k, t_{k+1}] at time t.
  Vec control_in_cell(std::size_t k, double t) const;
  Vec control_at_knot(std::size_t k) const;
  /// Left-continuous control at any t.
  Vec control_at(double t) const;
};

}  // namespace ihoc
