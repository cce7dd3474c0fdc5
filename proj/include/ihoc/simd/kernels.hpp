#pragma once

#include <cstddef>

namespace ihoc::simd {

/// Batched numeric kernels used by quadrature and sup-norm reductions.
/// Every table entry has a scalar reference implementation; wider variants
/// must produce identical results for the panel kernels and the max
/// reductions. dot() may differ by summation order.
struct KernelTable {
  const char* name;
  // out[i] = width[i] / 6 * (left[i] + 4 mid[i] + right[i])
  void (*simpson_panels)(const double* left, const double* mid, const double* right, const double* width, double* out,
                         std::size_t n);
  // out[i] = width[i] / 2 * (left[i] + right[i])
  void (*trapezoid_panels)(const double* left, const double* right, const double* width, double* out, std::size_t n);
  double (*dot)(const double* a, const double* b, std::size_t n);
  // max |num[i] / den[i]|; NaN entries count as +inf
  double (*max_abs_ratio)(const double* num, const double* den, std::size_t n);
  // max |a[i] - b[i]|; NaN entries count as +inf
  double (*max_abs_diff)(const double* a, const double* b, std::size_t n);
};

const KernelTable& scalar_kernels();

/// nullptr when the AVX2 variant was not compiled in or the CPU lacks AVX2/FMA.
const KernelTable* avx2_kernels();

/// Kernel table chosen once at first use. IHOC_SIMD=scalar forces the
/// reference path.
const KernelTable& kernels();

const char* isa_name();

}  // namespace ihoc::simd
