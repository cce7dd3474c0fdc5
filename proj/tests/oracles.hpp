// Independent reference values for the test suites. Nothing here calls into
// the library's numerics: closed forms are written out by hand and the
// quadrature is a separate adaptive Simpson rule.
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>

namespace oracle {

inline const double sqrt2 = std::sqrt(2.0);

// Discounted regulator: x' = 2x + u, f = (x^2 + u^2)/2, omega = exp(-2t), x0 = 2.
namespace regulator {
inline double x(double t) { return 2.0 * std::exp((1.0 - sqrt2) * t); }
inline double u(double t) { return -2.0 * (1.0 + sqrt2) * std::exp((1.0 - sqrt2) * t); }
inline double p(double t) { return -2.0 * (1.0 + sqrt2) * std::exp(-(1.0 + sqrt2) * t); }
// Along the optimum H = -omega f + p phi collapses to (-4 - 4 sqrt2) exp(-2 sqrt2 t).
inline double H(double t) { return (-4.0 - 4.0 * sqrt2) * std::exp(-2.0 * sqrt2 * t); }
// Maximized Hamiltonian: complete the square in u.
inline double Hsup(double t, double x, double p) {
  return -std::exp(-2.0 * t) * x * x / 2.0 + 2.0 * p * x + p * p * std::exp(2.0 * t) / 2.0;
}
}  // namespace regulator

// Log investment with rho = 1/2, x0 = 1.
namespace log_investment {
inline double x(double t) { return std::exp(0.5 * t); }
inline double p(double t) { return 2.0 * std::exp(-t); }
}  // namespace log_investment

/// Adaptive Simpson on [a, b].
inline double simpson(const std::function<double(double)>& f, double a, double b, double eps = 1e-12, int depth = 40) {
  struct R {
    const std::function<double(double)>& f;
    double rec(double a, double b, double fa, double fm, double fb, double whole, double eps, int depth) const {
      const double m = 0.5 * (a + b), lm = 0.5 * (a + m), rm = 0.5 * (m + b);
      const double flm = f(lm), frm = f(rm);
      const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
      const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
      if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * eps)
        return left + right + (left + right - whole) / 15.0;
      return rec(a, m, fa, flm, fm, left, eps / 2.0, depth - 1) + rec(m, b, fm, frm, fb, right, eps / 2.0, depth - 1);
    }
  } r{f};
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return r.rec(a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), eps, depth);
}

/// Integral of t^{-1/2} exp(-sqrt t) over [T, inf); substitute s = sqrt t.
inline double weibull_half_tail(double T) { return 2.0 * std::exp(-std::sqrt(T)); }

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline double uniform(std::mt19937_64& g, double a, double b) {
  return std::uniform_real_distribution<double>(a, b)(g);
}

inline int uniform_int(std::mt19937_64& g, int a, int b) { return std::uniform_int_distribution<int>(a, b)(g); }

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace oracle
