#include "ihoc/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "ihoc/error.hpp"

namespace ihoc {

double tail_truncation(const WeightSpec& w, double tol) {
  if (std::isinf(tol) && tol > 0) return 1.0;
  if (!w.has_tail_bound()) throw Error(ErrorKind::MissingTailBound, "no tail bound declared for " + w.label);
  static const double mult[] = {1, 1.5, 2, 2.5, 3, 4, 5, 6, 7, 8, 9};
  double decade = 1.0;
  for (int k = 0; k <= 8; ++k, decade *= 10.0)
    for (double c : mult) {
      double T = c * decade;
      if (w.tail_bound(T) < tol) return T;
    }
  throw Error(ErrorKind::DivergentTail,
              "tail of " + w.label + " stays above " + std::to_string(tol) + " up to T = 1e9");
}

std::vector<Vec> integrate_state(const ControlProblem& prob, const TimeGrid& grid, const Vec& x0, const ControlLaw& u,
                                 const OdeOptions& opt, OdeStats* stats) {
  if (x0.size() != prob.n) throw Error(ErrorKind::DimensionMismatch, "initial state has wrong dimension");
  std::vector<Vec> xs;
  xs.reserve(grid.size());
  xs.push_back(x0);
  for (std::size_t k = 0; k < grid.cells(); ++k) {
    Rhs f = [&](double t, const Vec& x, Vec& dx) { dx = prob.eval_phi(t, x, u(k, t)); };
    xs.push_back(integrate_cell(f, grid[k], grid[k + 1], xs.back(), opt, stats));
  }
  return xs;
}

namespace {

void require_feasible(const ControlProblem& prob, const Vec& u, double t) {
  if (!prob.U.contains(u, 1e-12)) {
    throw Error(ErrorKind::InvalidArgument, "control outside U at t=" + std::to_string(t));
  }
}

}  // namespace

CandidateProcess solve_state(const ControlProblem& prob, const std::vector<Vec>& u, const Vec& x0, const TimeGrid& grid,
                             const OdeOptions& opt) {
  if (u.size() != grid.size()) throw Error(ErrorKind::DimensionMismatch, "control samples do not match the grid");
  for (std::size_t k = 0; k < u.size(); ++k) {
    if (u[k].size() != prob.m) throw Error(ErrorKind::DimensionMismatch, "control sample has wrong dimension");
    require_feasible(prob, u[k], grid[k]);
  }
  CandidateProcess c;
  c.grid = grid;
  c.u = u;
  c.x = integrate_state(prob, grid, x0, [&](std::size_t k, double) { return u[k + 1]; }, opt);
  return c;
}

CandidateProcess solve_state(const ControlProblem& prob, const std::vector<Expression>& u, const Vec& x0,
                             const TimeGrid& grid, const OdeOptions& opt) {
  if (static_cast<int>(u.size()) != prob.m)
    throw Error(ErrorKind::DimensionMismatch, "control law has wrong dimension");
  CandidateProcess c;
  c.grid = grid;
  ClosedForm cf;
  cf.u = u;
  c.closed = cf;
  c.u.reserve(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    c.u.push_back(ClosedForm::eval(u, grid[k]));
    require_feasible(prob, c.u.back(), grid[k]);
  }
  c.x = integrate_state(prob, grid, x0, [&](std::size_t, double t) { return ClosedForm::eval(u, t); }, opt);
  return c;
}

std::vector<double> state_residuals(const ControlProblem& prob, const CandidateProcess& cand) {
  const TimeGrid& g = cand.grid;
  std::vector<double> res(g.cells());
  for (std::size_t k = 0; k < g.cells(); ++k) {
    const double a = g[k], w = g.width(k);
    Vec acc = Vec::Zero(prob.n);
    // Two Simpson panels per cell.
    static const double node[5] = {0.0, 0.25, 0.5, 0.75, 1.0};
    static const double weight[5] = {1.0, 4.0, 2.0, 4.0, 1.0};
    for (int i = 0; i < 5; ++i) {
      double t = a + node[i] * w;
      acc += weight[i] * prob.eval_phi(t, cand.state_at(t), cand.control_in_cell(k, t));
    }
    acc *= w / 12.0;
    Vec xa = cand.has_closed_state() ? cand.state_at(a) : cand.x[k];
    Vec xb = cand.has_closed_state() ? cand.state_at(g[k + 1]) : cand.x[k + 1];
    res[k] = (xb - xa - acc).cwiseAbs().maxCoeff();
  }
  return res;
}

Mat FundamentalMatrix::at(double t) const {
  std::size_t k = grid.locate(t);
  if (t <= grid[k] || !rhs_) return Z[k];
  if (t >= grid[k + 1]) return Z[k + 1];
  const Eigen::Index n = Z[k].rows();
  Vec y = Eigen::Map<const Vec>(Z[k].data(), n * n);
  y = integrate_cell(rhs_(k), grid[k], t, y, opt_);
  return Eigen::Map<const Mat>(y.data(), n, n);
}

Mat FundamentalMatrix::inverse(std::size_t k) const { return Eigen::PartialPivLU<Mat>(Z[k]).inverse(); }

Mat FundamentalMatrix::inverse_at(double t) const { return Eigen::PartialPivLU<Mat>(at(t)).inverse(); }

FundamentalMatrix fundamental_matrix(const ControlProblem& prob, const CandidateProcess& cand, const TimeGrid& grid,
                                     const OdeOptions& opt, double ill_threshold) {
  FundamentalMatrix F;
  F.grid = grid;
  F.opt_ = opt;
  // Pure relative error control: Z may decay or grow by many orders of magnitude.
  F.opt_.atol = 0.0;
  F.opt_.bound = std::max(opt.bound, 1e300);
  const int n = prob.n;
  const CandidateProcess* c = &cand;
  const ControlProblem* P = &prob;
  F.rhs_ = [c, P, n, grid](std::size_t k) -> Rhs {
    std::size_t kc = c->grid.locate(0.5 * (grid[k] + grid[k + 1]));
    return [c, P, n, kc](double t, const Vec& y, Vec& dy) {
      Mat A = P->eval_phi_x(t, c->state_at(t), c->control_in_cell(kc, t));
      Eigen::Map<const Mat> Z(y.data(), n, n);
      Mat D = -A.transpose() * Z;
      dy = Eigen::Map<const Vec>(D.data(), n * n);
    };
  };
  F.Z.reserve(grid.size());
  F.Z.push_back(Mat::Identity(n, n));
  Vec y = Eigen::Map<const Vec>(F.Z.back().data(), n * n);
  for (std::size_t k = 0; k < grid.cells(); ++k) {
    y = integrate_cell(F.rhs_(k), grid[k], grid[k + 1], y, F.opt_);
    F.Z.push_back(Eigen::Map<const Mat>(y.data(), n, n));
  }
  F.cond.reserve(grid.size());
  for (const Mat& Z : F.Z) {
    double c;
    if (n == 1) {
      c = Z(0, 0) == 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
    } else {
      Eigen::JacobiSVD<Mat> svd(Z);
      const Vec& s = svd.singularValues();
      c = s[n - 1] == 0.0 ? std::numeric_limits<double>::infinity() : s[0] / s[n - 1];
    }
    F.cond.push_back(c);
    F.max_cond = std::max(F.max_cond, c);
  }
  F.ill_conditioned = !(F.max_cond <= ill_threshold);
  return F;
}

namespace {

double vnorm(const Vec& v) { return v.size() == 0 ? 0.0 : v.norm(); }

}  // namespace

NormResult weighted_norm(const VecFn& x, const VecFn& dx, const WeightSpec& nu, double p, const TimeGrid& grid) {
  if (!(p >= 1.0)) throw Error(ErrorKind::InvalidExponent, "norm exponent must lie in [1, inf]");
  NormResult r;
  auto one = [&](const VecFn& fn, double& out) {
    if (std::isinf(p)) {
      double s = 0.0;
      for (double t : grid.times()) s = std::max(s, vnorm(fn(t)));
      out = s;
      r.grid_limited = true;
      return;
    }
    QuadratureResult q = integrate([&](double t) { return nu(t) * std::pow(vnorm(fn(t)), p); }, grid);
    r.finite = r.finite && q.finite;
    r.achieved_tol += q.achieved_tol;
    out = q.finite ? std::pow(std::max(q.value, 0.0), 1.0 / p) : std::numeric_limits<double>::infinity();
    if (!q.finite) r.note = q.note;
  };
  one(x, r.lp);
  if (dx) one(dx, r.deriv_lp);
  r.value = r.lp + r.deriv_lp;
  if (r.grid_limited) r.note = "p = inf: sup over the grid knots (grid-limited)";
  return r;
}

NormResult weighted_norm(const CandidateProcess& cand, const WeightSpec& nu, double p, bool with_derivative) {
  VecFn x = [&](double t) { return cand.state_at(t); };
  VecFn dx;
  if (with_derivative) dx = [&](double t) { return cand.state_rate(t); };
  return weighted_norm(x, dx, nu, p, cand.grid);
}

HolderCheck holder_pairing_check(const VecFn& x, const VecFn& y, const WeightSpec& nu, double p, const TimeGrid& grid) {
  if (!(p >= 1.0)) throw Error(ErrorKind::InvalidExponent, "Hoelder exponent must lie in [1, inf]");
  HolderCheck h;
  h.q = p == 1.0 ? std::numeric_limits<double>::infinity() : (std::isinf(p) ? 1.0 : p / (p - 1.0));
  QuadratureResult l = integrate([&](double t) { return nu(t) * std::fabs(x(t).dot(y(t))); }, grid);
  NormResult nx = weighted_norm(x, {}, nu, p, grid);
  NormResult ny = weighted_norm(y, {}, nu, h.q, grid);
  h.lhs = l.value;
  h.rhs = nx.lp * ny.lp;
  h.tol = l.achieved_tol + nx.achieved_tol * ny.lp + ny.achieved_tol * nx.lp + 1e-12 * h.rhs;
  if (!l.finite)
    h.verdict = std::isinf(h.rhs) ? Verdict::Undetermined : Verdict::Fail;
  else
    h.verdict = h.lhs <= h.rhs + h.tol ? Verdict::Pass : Verdict::Fail;
  return h;
}

}  // namespace ihoc
