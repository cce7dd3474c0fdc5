#include "ihoc/limits.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "ihoc/error.hpp"

namespace ihoc {

namespace {

DecayTest decide(DecayTest d) {
  for (double v : d.q) {
    if (!std::isfinite(v)) {
      d.verdict = Verdict::Fail;
      d.note = "non-finite sample";
      return d;
    }
  }
  double top = std::max(d.q[0], std::max(d.q[1], d.q[2]));
  if (top <= d.tol * 1e-6) {
    d.verdict = Verdict::Pass;
    d.note = "identically small";
    return d;
  }
  bool monotone = d.q[0] >= d.q[1] && d.q[1] >= d.q[2] && d.q[0] > d.q[2];
  bool small = d.q[2] <= d.tol;
  d.verdict = monotone && small ? Verdict::Pass : Verdict::Fail;
  std::ostringstream os;
  os.precision(6);
  if (!monotone) os << "not decreasing across decades";
  if (!small) os << (monotone ? "" : "; ") << "|q(T)| = " << d.q[2] << " > tol";
  d.note = os.str();
  return d;
}

}  // namespace

DecayTest three_decade_decay(const std::function<double(double)>& q, double T, double tol) {
  DecayTest d;
  d.tol = tol;
  d.t[0] = T / 100.0;
  d.t[1] = T / 10.0;
  d.t[2] = T;
  for (int k = 0; k < 3; ++k) {
    try {
      d.q[k] = std::fabs(q(d.t[k]));
    } catch (const DomainError&) {
      d.q[k] = std::numeric_limits<double>::quiet_NaN();
    }
  }
  return decide(d);
}

DecayTest three_decade_decay(const TimeGrid& grid, const std::vector<double>& values, double tol) {
  return three_decade_decay([&](double t) { return interpolate(grid, values, t); }, grid.T(), tol);
}

const char* to_string(TailKind kind) {
  switch (kind) {
    case TailKind::Stabilized:
      return "stabilized";
    case TailKind::Extrapolated:
      return "extrapolated";
    case TailKind::Divergent:
      return "divergent";
  }
  return "?";
}

double log_slope(const std::function<double(double)>& g, double t) {
  const double r = 1.0 - 1e-3;
  double a = std::fabs(g(t)), b = std::fabs(g(t * r));
  if (a == 0.0) return -std::numeric_limits<double>::infinity();
  if (b == 0.0) return std::numeric_limits<double>::infinity();
  return (std::log(a) - std::log(b)) / -std::log(r);
}

TailAssessment assess_tail(const std::function<double(double)>& g, double T, double I_T, double I_T10) {
  TailAssessment tail;
  double gT = g(T);
  double scale = std::fabs(I_T);
  double inc = std::fabs(I_T - I_T10);
  tail.growth = scale > 0.0 ? inc / scale : (inc > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
  if (!std::isfinite(gT) || !std::isfinite(I_T)) {
    tail.kind = TailKind::Divergent;
    tail.remainder = std::numeric_limits<double>::infinity();
    return tail;
  }
  if (gT == 0.0) {
    tail.slope = -std::numeric_limits<double>::infinity();
    tail.kind = TailKind::Stabilized;
    tail.remainder = 0.0;
    return tail;
  }
  tail.slope = log_slope(g, T);
  bool fast = tail.slope < -1.0 - 0.05;
  if (tail.growth <= 0.01) {
    tail.kind = TailKind::Stabilized;
    tail.remainder = fast ? gT * T / (-tail.slope - 1.0) : gT * T;
    if (std::isinf(tail.slope)) tail.remainder = 0.0;
    return tail;
  }
  if (fast) {
    tail.kind = TailKind::Extrapolated;
    tail.remainder = std::isinf(tail.slope) ? 0.0 : gT * T / (-tail.slope - 1.0);
    return tail;
  }
  tail.kind = TailKind::Divergent;
  tail.remainder = std::copysign(std::numeric_limits<double>::infinity(), gT);
  return tail;
}

double interpolate(const TimeGrid& grid, const std::vector<double>& values, double t) {
  if (t >= grid.T()) return values.back();
  if (t <= 0.0) return values.front();
  std::size_t k = grid.locate(t);
  double a = grid[k], b = grid[k + 1];
  double w = (t - a) / (b - a);
  return values[k] * (1.0 - w) + values[k + 1] * w;
}

}  // namespace ihoc
