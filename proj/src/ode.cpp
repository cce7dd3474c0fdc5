#include "ihoc/ode.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ihoc/error.hpp"

namespace ihoc {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200, e6 = 22.0 / 525,
                 e7 = -1.0 / 40;

struct Stepper {
  const Rhs& f;
  Vec k1, k2, k3, k4, k5, k6, k7, tmp, y5, err;

  explicit Stepper(const Rhs& rhs, Eigen::Index n)
      : f(rhs), k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), y5(n), err(n) {}

  // One step of size h from (t, y); k1 must hold f(t, y). Leaves k7 = f(t+h, y5).
  void step(double t, const Vec& y, double h) {
    tmp = y + h * (a21 * k1);
    f(t + c2 * h, tmp, k2);
    tmp = y + h * (a31 * k1 + a32 * k2);
    f(t + c3 * h, tmp, k3);
    tmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    f(t + c4 * h, tmp, k4);
    tmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    f(t + c5 * h, tmp, k5);
    tmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    f(t + h, tmp, k6);
    y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    f(t + h, y5, k7);
    err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
  }
};

void guard(const Vec& y, double t, double bound) {
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (!std::isfinite(y[i]) || std::fabs(y[i]) > bound) {
      std::ostringstream os;
      os.precision(10);
      os << "solution left the bound " << bound << " near t=" << t;
      throw BlowUp(os.str(), t);
    }
  }
}

}  // namespace

Vec integrate_cell(const Rhs& f, double a, double b, Vec y, const OdeOptions& opt, OdeStats* stats) {
  if (a == b) return y;
  const Eigen::Index n = y.size();
  Stepper s(f, n);
  double t = a;
  f(t, y, s.k1);
  if (opt.fixed_step) {
    s.step(t, y, b - a);
    guard(s.y5, b, opt.bound);
    if (stats) ++stats->steps;
    return s.y5;
  }
  const double dir = b > a ? 1.0 : -1.0;
  const double span = std::fabs(b - a);
  double h = span;
  std::size_t count = 0;
  while (dir * (b - t) > 0.0) {
    if (++count > opt.max_steps) throw BlowUp("step budget exhausted", t);
    bool last = std::fabs(h) >= std::fabs(b - t);
    double hs = last ? b - t : dir * std::fabs(h);
    s.step(t, y, hs);
    double e = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      double sc = opt.atol + opt.rtol * std::max(std::fabs(y[i]), std::fabs(s.y5[i]));
      e = std::max(e, std::fabs(s.err[i]) / sc);
    }
    if (!std::isfinite(e)) e = 1e10;
    if (e <= 1.0) {
      t = last ? b : t + hs;
      y = s.y5;
      guard(y, t, opt.bound);
      s.k1 = s.k7;
      if (stats) ++stats->steps;
      double grow = e == 0.0 ? 5.0 : std::min(5.0, 0.9 * std::pow(e, -0.2));
      h = std::fabs(hs) * grow;
    } else {
      if (stats) ++stats->rejected;
      h = std::fabs(hs) * std::max(0.2, 0.9 * std::pow(e, -0.2));
      if (h < 1e-15 * std::max(1.0, std::fabs(t))) throw BlowUp("step size underflow", t);
    }
  }
  return y;
}

std::vector<Vec> solve_forward(const Rhs& f, const TimeGrid& grid, const Vec& y0, const OdeOptions& opt,
                               OdeStats* stats) {
  std::vector<Vec> out(grid.size());
  out[0] = y0;
  guard(y0, 0.0, opt.bound);
  for (std::size_t k = 0; k + 1 < grid.size(); ++k)
    out[k + 1] = integrate_cell(f, grid[k], grid[k + 1], out[k], opt, stats);
  return out;
}

std::vector<Vec> solve_backward(const Rhs& f, const TimeGrid& grid, std::size_t last, const Vec& yT,
                                const OdeOptions& opt, OdeStats* stats) {
  std::vector<Vec> out(grid.size());
  out[last] = yT;
  for (std::size_t k = last; k > 0; --k) out[k - 1] = integrate_cell(f, grid[k], grid[k - 1], out[k], opt, stats);
  return out;
}

}  // namespace ihoc
