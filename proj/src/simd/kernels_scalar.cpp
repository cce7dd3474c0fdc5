#include <cmath>
#include <limits>

#include "ihoc/simd/kernels.hpp"

namespace ihoc::simd {
namespace {

void simpson_scalar(const double* left, const double* mid, const double* right, const double* width, double* out,
                    std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    double s = left[i] + 4.0 * mid[i];
    s = s + right[i];
    out[i] = (width[i] / 6.0) * s;
  }
}

void trapezoid_scalar(const double* left, const double* right, const double* width, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = (width[i] * 0.5) * (left[i] + right[i]);
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double max_abs_ratio_scalar(const double* num, const double* den, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = std::fabs(num[i] / den[i]);
    if (std::isnan(r)) return std::numeric_limits<double>::infinity();
    if (r > m) m = r;
  }
  return m;
}

double max_abs_diff_scalar(const double* a, const double* b, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = std::fabs(a[i] - b[i]);
    if (std::isnan(r)) return std::numeric_limits<double>::infinity();
    if (r > m) m = r;
  }
  return m;
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{"scalar",   simpson_scalar,       trapezoid_scalar,
                                 dot_scalar, max_abs_ratio_scalar, max_abs_diff_scalar};
  return table;
}

}  // namespace ihoc::simd
