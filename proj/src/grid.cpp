#include "ihoc/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ihoc/error.hpp"

namespace ihoc {

TimeGrid::TimeGrid(std::vector<double> times) : t_(std::move(times)) {
  if (t_.size() < 2) throw Error(ErrorKind::InvalidGrid, "grid needs at least two points");
  if (t_.front() != 0.0) throw Error(ErrorKind::InvalidGrid, "grid must start at 0");
  for (std::size_t k = 1; k < t_.size(); ++k) {
    if (!(t_[k] > t_[k - 1]) || !std::isfinite(t_[k]))
      throw Error(ErrorKind::InvalidGrid, "grid not strictly increasing at index " + std::to_string(k));
  }
}

TimeGrid TimeGrid::uniform(double T, std::size_t cells) {
  if (!(T > 0.0) || cells == 0) throw Error(ErrorKind::InvalidGrid, "uniform grid needs T > 0 and cells >= 1");
  std::vector<double> t(cells + 1);
  for (std::size_t k = 0; k <= cells; ++k) t[k] = T * static_cast<double>(k) / static_cast<double>(cells);
  t[cells] = T;
  return TimeGrid(std::move(t));
}

TimeGrid TimeGrid::log_uniform(double T, std::size_t points, double t_first) {
  if (!(T > t_first) || !(t_first > 0.0) || points < 3)
    throw Error(ErrorKind::InvalidGrid, "log grid needs 0 < t_first < T and at least 3 points");
  std::vector<double> t(points);
  t[0] = 0.0;
  double l0 = std::log(t_first), l1 = std::log(T);
  std::size_t last = points - 1;
  for (std::size_t k = 1; k <= last; ++k)
    t[k] = std::exp(l0 + (l1 - l0) * static_cast<double>(k - 1) / static_cast<double>(last - 1));
  t[last] = T;
  return TimeGrid(std::move(t));
}

TimeGrid TimeGrid::standard(double T, std::size_t cells) {
  if (!(T > 0.0) || cells < 8) throw Error(ErrorKind::InvalidGrid, "standard grid needs T > 0 and >= 8 cells");
  const double t_first = 1e-12;
  double t_switch = std::min(1.0, T / 16.0);
  if (t_switch <= t_first * 10) return uniform(T, cells);
  std::size_t geo = cells / 4;
  std::size_t uni = cells - geo;
  std::vector<double> t;
  t.reserve(cells + 1);
  t.push_back(0.0);
  double l0 = std::log(t_first), l1 = std::log(t_switch);
  // [0, t_first], then geo - 1 geometric cells up to t_switch
  for (std::size_t k = 0; k + 1 < geo; ++k)
    t.push_back(std::exp(l0 + (l1 - l0) * static_cast<double>(k) / static_cast<double>(geo - 1)));
  for (std::size_t k = 0; k <= uni; ++k)
    t.push_back(t_switch + (T - t_switch) * static_cast<double>(k) / static_cast<double>(uni));
  t.back() = T;
  return TimeGrid(std::move(t));
}

TimeGrid TimeGrid::refined(int factor) const {
  if (factor < 1) throw Error(ErrorKind::InvalidGrid, "refinement factor must be >= 1");
  std::vector<double> t;
  t.reserve(cells() * factor + 1);
  for (std::size_t k = 0; k + 1 < t_.size(); ++k) {
    double a = t_[k], h = t_[k + 1] - t_[k];
    for (int j = 0; j < factor; ++j) t.push_back(a + h * j / factor);
  }
  t.push_back(t_.back());
  return TimeGrid(std::move(t));
}

std::size_t TimeGrid::locate(double t) const {
  if (t <= t_.front()) return 0;
  auto it = std::lower_bound(t_.begin(), t_.end(), t);
  if (it == t_.end()) return cells() - 1;
  std::size_t k = static_cast<std::size_t>(it - t_.begin());
  return k == 0 ? 0 : k - 1;
}

std::size_t TimeGrid::nearest(double t) const {
  std::size_t k = locate(t);
  return (t - t_[k] <= t_[k + 1] - t) ? k : k + 1;
}

}  // namespace ihoc
