#include <immintrin.h>

#include <cmath>
#include <limits>

#include "ihoc/simd/kernels.hpp"

namespace ihoc::simd {
namespace {

void simpson_avx2(const double* left, const double* mid, const double* right, const double* width, double* out,
                  std::size_t n) {
  const __m256d four = _mm256_set1_pd(4.0);
  const __m256d six = _mm256_set1_pd(6.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d s = _mm256_add_pd(_mm256_loadu_pd(left + i), _mm256_mul_pd(four, _mm256_loadu_pd(mid + i)));
    s = _mm256_add_pd(s, _mm256_loadu_pd(right + i));
    __m256d w = _mm256_div_pd(_mm256_loadu_pd(width + i), six);
    _mm256_storeu_pd(out + i, _mm256_mul_pd(w, s));
  }
  for (; i < n; ++i) {
    double s = left[i] + 4.0 * mid[i];
    s = s + right[i];
    out[i] = (width[i] / 6.0) * s;
  }
}

void trapezoid_avx2(const double* left, const double* right, const double* width, double* out, std::size_t n) {
  const __m256d half = _mm256_set1_pd(0.5);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d w = _mm256_mul_pd(_mm256_loadu_pd(width + i), half);
    __m256d s = _mm256_add_pd(_mm256_loadu_pd(left + i), _mm256_loadu_pd(right + i));
    _mm256_storeu_pd(out + i, _mm256_mul_pd(w, s));
  }
  for (; i < n; ++i) out[i] = (width[i] * 0.5) * (left[i] + right[i]);
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

inline __m256d abs_pd(__m256d v) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v); }

double finish_max(__m256d m, __m256d nan_seen) {
  if (_mm256_movemask_pd(nan_seen) != 0) return std::numeric_limits<double>::infinity();
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, m);
  double r = lanes[0];
  for (int k = 1; k < 4; ++k)
    if (lanes[k] > r) r = lanes[k];
  return r;
}

double max_abs_ratio_avx2(const double* num, const double* den, std::size_t n) {
  __m256d m = _mm256_setzero_pd();
  __m256d nan_seen = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d r = abs_pd(_mm256_div_pd(_mm256_loadu_pd(num + i), _mm256_loadu_pd(den + i)));
    nan_seen = _mm256_or_pd(nan_seen, _mm256_cmp_pd(r, r, _CMP_UNORD_Q));
    m = _mm256_max_pd(m, r);
  }
  double best = finish_max(m, nan_seen);
  if (std::isinf(best)) return best;
  for (; i < n; ++i) {
    double r = std::fabs(num[i] / den[i]);
    if (std::isnan(r)) return std::numeric_limits<double>::infinity();
    if (r > best) best = r;
  }
  return best;
}

double max_abs_diff_avx2(const double* a, const double* b, std::size_t n) {
  __m256d m = _mm256_setzero_pd();
  __m256d nan_seen = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d r = abs_pd(_mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    nan_seen = _mm256_or_pd(nan_seen, _mm256_cmp_pd(r, r, _CMP_UNORD_Q));
    m = _mm256_max_pd(m, r);
  }
  double best = finish_max(m, nan_seen);
  if (std::isinf(best)) return best;
  for (; i < n; ++i) {
    double r = std::fabs(a[i] - b[i]);
    if (std::isnan(r)) return std::numeric_limits<double>::infinity();
    if (r > best) best = r;
  }
  return best;
}

}  // namespace

const KernelTable& avx2_kernel_table() {
  static const KernelTable table{"avx2", simpson_avx2, trapezoid_avx2, dot_avx2, max_abs_ratio_avx2, max_abs_diff_avx2};
  return table;
}

}  // namespace ihoc::simd
