#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Cholesky>

#include "ihoc/error.hpp"
#include "ihoc/pmp.hpp"

namespace ihoc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// -l0 * omega(t) * v with the convention 0 * (pole) = 0.
double weighted(double lambda0, const ControlProblem& prob, double t, double v) {
  if (lambda0 == 0.0 || v == 0.0) return 0.0;
  return -lambda0 * prob.omega(t) * v;
}

double safe_H(double t, const Vec& x, const Vec& u, const Vec& p, double lambda0, const ControlProblem& prob) {
  try {
    double h = pontryagin_H(t, x, u, p, lambda0, prob);
    return std::isnan(h) ? -kInf : h;
  } catch (const DomainError&) {
    return -kInf;
  }
}

double inner_lo(const ControlBox& U, int i) {
  double lo = U.lo[i];
  return U.lo_open[i] && std::isfinite(lo) ? lo + 1e-12 * (1.0 + std::fabs(lo)) : lo;
}

double inner_hi(const ControlBox& U, int i) {
  double hi = U.hi[i];
  return U.hi_open[i] && std::isfinite(hi) ? hi - 1e-12 * (1.0 + std::fabs(hi)) : hi;
}

[[noreturn]] void unbounded(double t, int i, double direction) {
  throw Error(ErrorKind::UnboundedAbove, "H grows without bound along " + std::string(direction > 0 ? "+" : "-") + "u" +
                                             std::to_string(i + 1) + " at t=" + std::to_string(t));
}

// Maximizes phi over [lo, hi] (either end may be infinite) starting near s0.
std::pair<double, double> maximize_1d(const std::function<double(double)>& phi, double lo, double hi, double s0,
                                      double t, int coord) {
  const bool lo_inf = !std::isfinite(lo), hi_inf = !std::isfinite(hi);
  double a = lo, b = hi;
  double R = std::max({1.0, 2.0 * std::fabs(s0), lo_inf ? 0.0 : std::fabs(lo), hi_inf ? 0.0 : std::fabs(hi)});
  const int N = 400;
  for (int expand = 0;; ++expand) {
    if (lo_inf) a = (hi_inf ? s0 : b) - R;
    if (hi_inf) b = (lo_inf ? s0 : a) + R;
    if (lo_inf && hi_inf) {
      a = s0 - R;
      b = s0 + R;
    }
    double best = -kInf, arg = s0;
    int best_i = -1;
    std::vector<double> xs(N + 1), vs(N + 1);
    for (int i = 0; i <= N; ++i) {
      xs[i] = a + (b - a) * i / N;
      vs[i] = phi(xs[i]);
      if (vs[i] > best) {
        best = vs[i];
        best_i = i;
        arg = xs[i];
      }
    }
    if (s0 >= a && s0 <= b) {
      double v0 = phi(s0);
      if (v0 > best) {
        best = v0;
        arg = s0;
        best_i = -1;
      }
    }
    bool at_open_edge = (best_i == 0 && lo_inf) || (best_i == N && hi_inf);
    if (at_open_edge && R < 1e8) {
      R *= 8.0;
      continue;
    }
    if (at_open_edge) unbounded(t, coord, best_i == N ? 1.0 : -1.0);
    {
      // Golden-section refinement on the bracketing pair of cells (around s0 when it won).
      const double step = (b - a) / N;
      double l = best_i >= 0 ? xs[std::max(0, best_i - 1)] : std::max(a, s0 - step);
      double r = best_i >= 0 ? xs[std::min(N, best_i + 1)] : std::min(b, s0 + step);
      const double g = 0.5 * (std::sqrt(5.0) - 1.0);
      double c = r - g * (r - l), d = l + g * (r - l);
      double fc = phi(c), fd = phi(d);
      for (int it = 0; it < 80 && r - l > 1e-14 * (1.0 + std::fabs(arg)); ++it) {
        if (fc >= fd) {
          r = d;
          d = c;
          fd = fc;
          c = r - g * (r - l);
          fc = phi(c);
        } else {
          l = c;
          c = d;
          fc = fd;
          d = l + g * (r - l);
          fd = phi(d);
        }
      }
      for (auto [x, v] : {std::pair{c, fc}, std::pair{d, fd}})
        if (v > best) {
          best = v;
          arg = x;
        }
    }
    return {arg, best};
  }
}

}  // namespace

double pontryagin_H(double t, const Vec& x, const Vec& u, const Vec& p, double lambda0, const ControlProblem& prob) {
  double h = weighted(lambda0, prob, t, prob.eval_f(t, x, u));
  if (p.size()) h += p.dot(prob.eval_phi(t, x, u));
  return h;
}

Vec pontryagin_H_x(double t, const Vec& x, const Vec& u, const Vec& p, double lambda0, const ControlProblem& prob) {
  Vec fx = prob.eval_f_x(t, x, u);
  Vec r = prob.eval_phi_x(t, x, u).transpose() * p;
  for (int i = 0; i < prob.n; ++i) r[i] += weighted(lambda0, prob, t, fx[i]);
  return r;
}

Vec pontryagin_H_u(double t, const Vec& x, const Vec& u, const Vec& p, double lambda0, const ControlProblem& prob) {
  Vec fu = prob.eval_f_u(t, x, u);
  Vec r = prob.eval_phi_u(t, x, u).transpose() * p;
  for (int j = 0; j < prob.m; ++j) r[j] += weighted(lambda0, prob, t, fu[j]);
  return r;
}

InnerMax maximize_H(double t, const Vec& x, const Vec& p, double lambda0, const ControlProblem& prob,
                    const Vec& start) {
  const int m = prob.m;
  const ControlBox& U = prob.U;
  InnerMax res;
  res.u = start;
  if (m == 0) {
    res.value = pontryagin_H(t, x, start, p, lambda0, prob);
    res.analytic = true;
    return res;
  }
  bool all_free = true;
  for (int i = 0; i < m; ++i) all_free = all_free && !std::isfinite(U.lo[i]) && !std::isfinite(U.hi[i]);

  if (prob.quadratic_in_u && (all_free || m == 1)) {
    Mat A(m, m);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) {
        double v = weighted(lambda0, prob, t, prob.f_uu[a][b].eval(t, x, start));
        for (int i = 0; i < prob.n; ++i) v += p[i] * prob.phi_uu[i][a][b].eval(t, x, start);
        A(a, b) = v;
      }
    Vec g = pontryagin_H_u(t, x, start, p, lambda0, prob);
    res.analytic = true;
    if (all_free) {
      Eigen::LLT<Mat> llt(-A);
      if (llt.info() == Eigen::Success && (-A).diagonal().minCoeff() > 0.0) {
        res.u = start + llt.solve(g);
      } else if (A.cwiseAbs().maxCoeff() == 0.0 && g.cwiseAbs().maxCoeff() == 0.0) {
        res.u = start;
      } else {
        int i = 0;
        g.cwiseAbs().maxCoeff(&i);
        unbounded(t, i, g[i] >= 0 ? 1.0 : -1.0);
      }
      res.value = pontryagin_H(t, x, res.u, p, lambda0, prob);
      return res;
    }
    // m == 1 with at least one finite end.
    const double a = A(0, 0), gg = g[0], s = start[0];
    const double lo = inner_lo(U, 0), hi = inner_hi(U, 0);
    auto H1 = [&](double v) {
      Vec u(1);
      u[0] = v;
      return pontryagin_H(t, x, u, p, lambda0, prob);
    };
    if (a < 0.0) {
      double v = std::clamp(s - gg / a, lo, hi);
      res.u[0] = v;
      res.value = H1(v);
      return res;
    }
    // Convex or linear: the sup sits at an end of the interval.
    if (!std::isfinite(lo) && (a > 0.0 || gg < 0.0)) unbounded(t, 0, -1.0);
    if (!std::isfinite(hi) && (a > 0.0 || gg > 0.0)) unbounded(t, 0, 1.0);
    double best = -kInf, arg = s;
    for (double v : {lo, hi, s}) {
      if (!std::isfinite(v)) continue;
      double h = H1(v);
      if (h > best) {
        best = h;
        arg = v;
      }
    }
    res.u[0] = arg;
    res.value = best;
    return res;
  }

  // Numeric: cyclic coordinate ascent with a scan and golden-section per coordinate.
  Vec u = start;
  for (int i = 0; i < m; ++i) u[i] = std::clamp(u[i], inner_lo(U, i), inner_hi(U, i));
  double value = safe_H(t, x, u, p, lambda0, prob);
  const int sweeps = m == 1 ? 1 : 8;
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    double before = value;
    for (int i = 0; i < m; ++i) {
      auto phi = [&](double v) {
        Vec w = u;
        w[i] = v;
        return safe_H(t, x, w, p, lambda0, prob);
      };
      auto [arg, best] = maximize_1d(phi, inner_lo(U, i), inner_hi(U, i), u[i], t, i);
      if (best > value) {
        u[i] = arg;
        value = best;
      }
    }
    if (value - before <= 1e-15 * (1.0 + std::fabs(value))) break;
  }
  res.u = u;
  res.value = value;
  return res;
}

}  // namespace ihoc
