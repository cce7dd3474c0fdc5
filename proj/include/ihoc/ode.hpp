#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "ihoc/expr.hpp"
#include "ihoc/grid.hpp"

namespace ihoc {

using Rhs = std::function<void(double t, const Vec& y, Vec& dy)>;

struct OdeOptions {
  double rtol = 1e-11;
  double atol = 1e-13;
  double bound = 1e100;     // BlowUp when max|y| exceeds this
  bool fixed_step = false;  // one 5th-order step per cell, no error control
  std::size_t max_steps = 1000000;
};

struct OdeStats {
  std::size_t steps = 0;
  std::size_t rejected = 0;
};

/// Dormand-Prince 5(4) from a to b (b < a integrates backward).
Vec integrate_cell(const Rhs& f, double a, double b, Vec y, const OdeOptions& opt = {}, OdeStats* stats = nullptr);

/// Solution at every knot; each cell is integrated separately so the right-hand
/// side may jump at knots.
std::vector<Vec> solve_forward(const Rhs& f, const TimeGrid& grid, const Vec& y0, const OdeOptions& opt = {},
                               OdeStats* stats = nullptr);

/// Starts from yT at knot `last` and integrates down to t = 0. Entries after
/// `last` are left zero-sized.
std::vector<Vec> solve_backward(const Rhs& f, const TimeGrid& grid, std::size_t last, const Vec& yT,
                                const OdeOptions& opt = {}, OdeStats* stats = nullptr);

}  // namespace ihoc
