#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "ihoc/simd/kernels.hpp"
#include "../oracles.hpp"

using namespace ihoc::simd;

namespace {

struct Data {
  std::vector<double> a, b, c, w;
};

Data sample_data(std::size_t n, std::uint64_t seed) {
  auto g = oracle::rng(seed);
  Data d;
  for (std::size_t i = 0; i < n; ++i) {
    d.a.push_back(oracle::uniform(g, -10, 10));
    d.b.push_back(oracle::uniform(g, -10, 10));
    d.c.push_back(oracle::uniform(g, -10, 10));
    d.w.push_back(oracle::uniform(g, 1e-6, 1.0));
  }
  return d;
}

}  // namespace

TEST_SUITE("simd") {
  TEST_CASE("scalar kernels against hand-written loops") {
    const KernelTable& s = scalar_kernels();
    Data d = sample_data(37, 1);
    std::vector<double> out(37);
    s.simpson_panels(d.a.data(), d.b.data(), d.c.data(), d.w.data(), out.data(), 37);
    for (std::size_t i = 0; i < 37; ++i)
      CHECK(out[i] == doctest::Approx(d.w[i] / 6.0 * (d.a[i] + 4.0 * d.b[i] + d.c[i])).epsilon(1e-15));
    s.trapezoid_panels(d.a.data(), d.c.data(), d.w.data(), out.data(), 37);
    for (std::size_t i = 0; i < 37; ++i)
      CHECK(out[i] == doctest::Approx(d.w[i] / 2.0 * (d.a[i] + d.c[i])).epsilon(1e-15));
    double dot = 0.0, ratio = 0.0, diff = 0.0;
    for (std::size_t i = 0; i < 37; ++i) {
      dot += d.a[i] * d.b[i];
      ratio = std::max(ratio, std::abs(d.a[i] / d.w[i]));
      diff = std::max(diff, std::abs(d.a[i] - d.b[i]));
    }
    CHECK(s.dot(d.a.data(), d.b.data(), 37) == doctest::Approx(dot).epsilon(1e-13));
    CHECK(s.max_abs_ratio(d.a.data(), d.w.data(), 37) == ratio);
    CHECK(s.max_abs_diff(d.a.data(), d.b.data(), 37) == diff);
  }

  TEST_CASE("NaN counts as +inf in the reductions") {
    const KernelTable& s = scalar_kernels();
    std::vector<double> a{1.0, std::nan(""), 2.0}, b{1.0, 1.0, 1.0};
    CHECK(std::isinf(s.max_abs_ratio(a.data(), b.data(), 3)));
    CHECK(std::isinf(s.max_abs_diff(a.data(), b.data(), 3)));
    if (const KernelTable* v = avx2_kernels()) {
      CHECK(std::isinf(v->max_abs_ratio(a.data(), b.data(), 3)));
      CHECK(std::isinf(v->max_abs_diff(a.data(), b.data(), 3)));
    }
  }

  TEST_CASE("AVX2 kernels are equivalent to the scalar reference") {
    const KernelTable* v = avx2_kernels();
    if (v == nullptr) {
      MESSAGE("AVX2 variant unavailable on this machine; equivalence not exercised");
      return;
    }
    const KernelTable& s = scalar_kernels();
    for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 17u, 64u, 1001u}) {
      Data d = sample_data(n, 100 + n);
      std::vector<double> o1(n), o2(n);
      s.simpson_panels(d.a.data(), d.b.data(), d.c.data(), d.w.data(), o1.data(), n);
      v->simpson_panels(d.a.data(), d.b.data(), d.c.data(), d.w.data(), o2.data(), n);
      CHECK(o1 == o2);
      s.trapezoid_panels(d.a.data(), d.c.data(), d.w.data(), o1.data(), n);
      v->trapezoid_panels(d.a.data(), d.c.data(), d.w.data(), o2.data(), n);
      CHECK(o1 == o2);
      CHECK(s.max_abs_ratio(d.a.data(), d.w.data(), n) == v->max_abs_ratio(d.a.data(), d.w.data(), n));
      CHECK(s.max_abs_diff(d.a.data(), d.b.data(), n) == v->max_abs_diff(d.a.data(), d.b.data(), n));
      const double ds = s.dot(d.a.data(), d.b.data(), n), dv = v->dot(d.a.data(), d.b.data(), n);
      double mag = 0.0;
      for (std::size_t i = 0; i < n; ++i) mag += std::abs(d.a[i] * d.b[i]);
      CHECK(std::abs(ds - dv) <= 1e-14 * (1.0 + mag));
    }
  }

  TEST_CASE("dispatch picks a named table") {
    const std::string name = isa_name();
    CHECK((name == "scalar" || name == "avx2"));
  }

}  // TEST_SUITE
