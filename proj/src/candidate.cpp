#include "ihoc/candidate.hpp"

#include <algorithm>

#include "ihoc/error.hpp"

namespace ihoc {

Vec ClosedForm::eval(const std::vector<Expression>& e, double t) {
  Vec r(static_cast<Eigen::Index>(e.size()));
  for (std::size_t i = 0; i < e.size(); ++i) r[static_cast<Eigen::Index>(i)] = e[i].at(t);
  return r;
}

CandidateProcess CandidateProcess::from_closed_form(const ClosedForm& cf, const TimeGrid& grid) {
  if (cf.x.empty()) throw Error(ErrorKind::InvalidArgument, "closed form lacks the state");
  CandidateProcess c;
  c.grid = grid;
  c.closed = cf;
  if (c.closed->xdot.empty())
    for (const auto& e : cf.x) c.closed->xdot.push_back(e.derivative(Var::t()));
  c.x.reserve(grid.size());
  c.u.reserve(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    c.x.push_back(ClosedForm::eval(cf.x, grid[k]));
    c.u.push_back(ClosedForm::eval(cf.u, grid[k]));
  }
  return c;
}

Vec CandidateProcess::state_at(double t) const {
  if (has_closed_state()) return ClosedForm::eval(closed->x, t);
  if (t <= 0.0) return x.front();
  if (t >= grid.T()) return x.back();
  std::size_t k = grid.locate(t);
  double s = (t - grid[k]) / grid.width(k);
  return (1.0 - s) * x[k] + s * x[k + 1];
}

Vec CandidateProcess::state_rate(double t) const {
  if (has_closed_state() && closed->xdot.size() == closed->x.size()) return ClosedForm::eval(closed->xdot, t);
  std::size_t k = grid.locate(t);
  return (x[k + 1] - x[k]) / grid.width(k);
}

Vec CandidateProcess::control_in_cell(std::size_t k, double t) const {
  if (has_closed_control()) return ClosedForm::eval(closed->u, std::clamp(t, grid[k], grid[k + 1]));
  return u[k + 1];
}

Vec CandidateProcess::control_at_knot(std::size_t k) const { return u[k]; }

Vec CandidateProcess::control_at(double t) const {
  if (has_closed_control()) return ClosedForm::eval(closed->u, t);
  if (t <= 0.0) return u.front();
  return u[grid.locate(t) + 1];
}

}  // namespace ihoc
