#include "ihoc/quadrature.hpp"

#include <cmath>
#include <limits>

#include "ihoc/error.hpp"
#include "ihoc/simd/kernels.hpp"

namespace ihoc {

namespace {

bool regular_at_zero(const std::function<double(double)>& g, double& g0) {
  try {
    g0 = g(0.0);
  } catch (const DomainError&) {
    return false;
  }
  return std::isfinite(g0);
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& g, const TimeGrid& grid, const QuadOptions& opt) {
  QuadratureResult r;
  const std::size_t N = grid.cells();
  r.T = grid.T();
  r.cumulative.assign(N + 1, 0.0);

  double g0 = 0.0;
  bool pole = opt.pole_exponent.has_value() || !regular_at_zero(g, g0);
  std::size_t first = pole ? 1 : 0;
  double pole_cell = 0.0;
  if (pole) {
    double t1 = grid[1];
    // An integrand vanishing at t1 (say 0 * pole) has nothing to integrate there.
    double e = opt.pole_exponent ? *opt.pole_exponent : (g(t1) == 0.0 ? 0.0 : log_slope(g, t1));
    r.pole_exponent = e;
    if (!(e > -1.0 + 1e-3)) {
      r.finite = false;
      r.value = r.truncated = std::numeric_limits<double>::infinity();
      r.tail_assessment.kind = TailKind::Divergent;
      r.note = "non-integrable singularity at t=0 (local exponent " + std::to_string(e) + ")";
      for (std::size_t k = 1; k <= N; ++k) r.cumulative[k] = r.value;
      return r;
    }
    pole_cell = g(t1) * t1 / (e + 1.0);
  }

  const std::size_t M = N - first;
  std::vector<double> gl(M), gq1(M), gm(M), gq3(M), gr(M), h(M), h2(M), s3(M), s5a(M), s5b(M);
  double left = pole ? g(grid[1]) : g0;
  for (std::size_t j = 0; j < M; ++j) {
    std::size_t k = j + first;
    double a = grid[k], w = grid.width(k);
    gl[j] = left;
    gq1[j] = g(a + 0.25 * w);
    gm[j] = g(a + 0.5 * w);
    gq3[j] = g(a + 0.75 * w);
    gr[j] = g(grid[k + 1]);
    left = gr[j];
    h[j] = w;
    h2[j] = 0.5 * w;
  }
  const auto& K = simd::kernels();
  K.simpson_panels(gl.data(), gm.data(), gr.data(), h.data(), s3.data(), M);
  K.simpson_panels(gl.data(), gq1.data(), gm.data(), h2.data(), s5a.data(), M);
  K.simpson_panels(gm.data(), gq3.data(), gr.data(), h2.data(), s5b.data(), M);

  double acc = 0.0, err = 0.0, mass = 0.0;
  if (pole) {
    acc = pole_cell;
    r.cumulative[1] = acc;
    err += std::fabs(pole_cell) * 1e-3;
    mass += std::fabs(pole_cell);
  }
  for (std::size_t j = 0; j < M; ++j) {
    double s5 = s5a[j] + s5b[j];
    acc += s5;
    err += std::fabs(s5 - s3[j]);
    mass += std::fabs(s5);
    r.cumulative[j + first + 1] = acc;
  }
  r.truncated = acc;
  r.achieved_tol = err + 1e-15 * mass;
  if (!std::isfinite(acc)) {
    r.finite = false;
    r.value = acc;
    r.note = "non-finite integrand on the grid";
    return r;
  }

  for (double frac : {1e-3, 1e-2, 1e-1, 1.0}) {
    double t = r.T * frac;
    r.partials.emplace_back(t, interpolate(grid, r.cumulative, t));
  }

  if (!opt.with_tail) {
    r.value = r.truncated;
    return r;
  }
  double I10 = interpolate(grid, r.cumulative, r.T / 10.0);
  r.tail_assessment = assess_tail(g, r.T, r.truncated, I10);
  if (opt.tail_bound) {
    r.tail_declared = true;
    r.tail = opt.tail_bound(r.T);
    r.finite = std::isfinite(r.tail);
  } else {
    r.tail = r.tail_assessment.remainder;
    r.finite = r.tail_assessment.finite();
  }
  r.value = r.truncated + r.tail;
  if (!r.finite) r.note = "partial integral still growing at T";
  return r;
}

}  // namespace ihoc
