#pragma once

#include <cstddef>
#include <vector>

namespace ihoc {

/// Strictly increasing time grid starting at 0.
class TimeGrid {
 public:
  TimeGrid() = default;
  explicit TimeGrid(std::vector<double> times);

  static TimeGrid uniform(double T, std::size_t cells);
  /// 0 followed by points-1 log-spaced values from t_first to T.
  static TimeGrid log_uniform(double T, std::size_t points, double t_first = 1e-12);
  /// A quarter of the cells geometric from 1e-12 up to min(1, T/16), the rest uniform up to T.
  static TimeGrid standard(double T, std::size_t cells = 4096);

  /// Splits every cell into `factor` equal parts.
  TimeGrid refined(int factor) const;

  std::size_t size() const { return t_.size(); }
  std::size_t cells() const { return t_.empty() ? 0 : t_.size() - 1; }
  double operator[](std::size_t k) const { return t_[k]; }
  double T() const { return t_.back(); }
  double width(std::size_t k) const { return t_[k + 1] - t_[k]; }
  const std::vector<double>& times() const { return t_; }

  /// Cell k with t in (t_k, t_{k+1}]; t = 0 maps to cell 0, t beyond T to the last cell.
  std::size_t locate(double t) const;
  /// Index of the knot closest to t.
  std::size_t nearest(double t) const;

 private:
  std::vector<double> t_;
};

}  // namespace ihoc
