#include <algorithm>
#include <cmath>
#include <limits>

#include "ihoc/error.hpp"
#include "ihoc/pmp.hpp"

namespace ihoc {

const char* to_string(AdjointRoute r) {
  switch (r) {
    case AdjointRoute::BackwardOde:
      return "backward-ode";
    case AdjointRoute::Representation:
      return "representation";
    case AdjointRoute::ClosedForm:
      return "closed-form";
  }
  return "?";
}

Vec AdjointSolution::at(double t) const {
  if (!closed.empty()) return ClosedForm::eval(closed, t);
  if (t <= 0.0) return p.front();
  if (t >= grid.T()) return p.back();
  const std::size_t k = grid.locate(t);
  const double h = grid.width(k), s = (t - grid[k]) / h;
  Vec p0 = p[k];
  if (!jump.empty() && jump[k].size()) p0 += jump[k];
  const bool hermite = pdot.size() == p.size() && pdot[k].allFinite() && pdot[k + 1].allFinite();
  if (!hermite) return (1.0 - s) * p0 + s * p[k + 1];
  const double s2 = s * s, s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * p0 + (s3 - 2 * s2 + s) * h * pdot[k] + (-2 * s3 + 3 * s2) * p[k + 1] +
         (s3 - s2) * h * pdot[k + 1];
}

double AdjointSolution::max_norm(double t_max) const {
  double m = 0.0;
  for (std::size_t k = 0; k < p.size() && grid[k] <= t_max; ++k) m = std::max(m, p[k].norm());
  return m;
}

bool AdjointSolution::trivial() const { return lambda0 == 0.0 && max_norm() == 0.0; }

namespace {

// p' = -H_x along the candidate, with the control of cell k.
Vec adjoint_rhs(const ControlProblem& prob, const CandidateProcess& cand, double lambda0, std::size_t k, double t,
                const Vec& p) {
  return -pontryagin_H_x(t, cand.state_at(t), cand.control_in_cell(k, t), p, lambda0, prob);
}

void fill_pdot(AdjointSolution& adj, const ControlProblem& prob, const CandidateProcess& cand) {
  adj.pdot.resize(adj.p.size());
  for (std::size_t k = 0; k < adj.p.size(); ++k) {
    const double t = adj.grid[k];
    std::size_t kc = std::min(cand.grid.locate(t), cand.grid.cells() - 1);
    try {
      adj.pdot[k] = adjoint_rhs(prob, cand, adj.lambda0, kc, t, adj.p[k]);
    } catch (const DomainError&) {
      adj.pdot[k] = Vec::Constant(prob.n, std::numeric_limits<double>::quiet_NaN());
    }
  }
}

double pole_exponent_of(const ControlProblem& prob, const std::function<double(double)>& g, double t1) {
  if (prob.omega.pole_exponent) return *prob.omega.pole_exponent;
  return g(t1) == 0.0 ? 0.0 : log_slope(g, t1);
}

std::vector<Vec> integrate_back(const ControlProblem& prob, const CandidateProcess& cand, double lambda0,
                                std::size_t last, const OdeOptions& opt) {
  const TimeGrid& grid = cand.grid;
  std::vector<Vec> p(grid.size(), Vec::Zero(prob.n));
  const bool pole = !std::isfinite(prob.omega(0.0));
  for (std::size_t k = last; k-- > 0;) {
    if (k == 0 && pole) {
      // Integrable singularity of omega at 0: integrate the first cell analytically.
      const double t1 = grid[1];
      const Vec x = cand.state_at(t1), u = cand.control_in_cell(0, t1);
      Vec regular = -prob.eval_phi_x(t1, x, u).transpose() * p[1];
      Vec fx = prob.eval_f_x(t1, x, u);
      Vec sing(prob.n);
      for (int i = 0; i < prob.n; ++i) {
        auto g = [&](double s) { return fx[i] == 0.0 ? 0.0 : prob.omega(s) * fx[i]; };
        double e = pole_exponent_of(prob, g, t1);
        sing[i] = fx[i] == 0.0 ? 0.0 : lambda0 * prob.omega(t1) * fx[i] * t1 / (e + 1.0);
      }
      p[0] = p[1] - (regular * t1 + sing);
      continue;
    }
    Rhs f = [&, k](double t, const Vec& y, Vec& dy) { dy = adjoint_rhs(prob, cand, lambda0, k, t, y); };
    p[k] = integrate_cell(f, grid[k + 1], grid[k], p[k + 1], opt);
  }
  return p;
}

}  // namespace

AdjointSolution adjoint_backward(const ControlProblem& prob, const CandidateProcess& cand, double lambda0,
                                 std::optional<double> T, const OdeOptions& opt) {
  if (lambda0 < 0.0) throw Error(ErrorKind::InvalidArgument, "lambda0 must be nonnegative");
  AdjointSolution adj;
  adj.grid = cand.grid;
  adj.lambda0 = lambda0;
  adj.route = AdjointRoute::BackwardOde;
  const TimeGrid& grid = cand.grid;
  std::size_t last = T ? grid.nearest(*T) : grid.size() - 1;
  if (last == 0) throw Error(ErrorKind::InvalidArgument, "terminal time must be positive");
  try {
    adj.p = integrate_back(prob, cand, lambda0, last, opt);
    std::size_t early = grid.nearest(0.8 * grid[last]);
    std::vector<Vec> q = integrate_back(prob, cand, lambda0, early, opt);
    double scale = 0.0, diff = 0.0;
    for (std::size_t k = 0; k <= last && grid[k] <= 0.5 * grid[last]; ++k) {
      scale = std::max(scale, adj.p[k].norm());
      diff = std::max(diff, (adj.p[k] - q[k]).norm());
    }
    adj.terminal_sensitivity = scale > 0.0 ? diff / scale : diff;
  } catch (const BlowUp& e) {
    throw BlowUp(std::string(e.what()) + "; the adjoint is forward-unstable, use the representation route",
                 e.escape_time());
  }
  adj.reliable_horizon = 0.5 * grid[last];
  adj.note = "p(T)=0 at T=" + format_double(grid[last]);
  fill_pdot(adj, prob, cand);
  return adj;
}

AdjointSolution adjoint_representation(const ControlProblem& prob, const CandidateProcess& cand, const OdeOptions& opt,
                                       const Tolerances& tol) {
  const TimeGrid& grid = cand.grid;
  const int n = prob.n;
  FundamentalMatrix F = fundamental_matrix(prob, cand, grid, opt, tol.ill_conditioned);
  if (F.ill_conditioned)
    throw Error(ErrorKind::IllConditioned, "fundamental matrix condition number " + format_double(F.max_cond));

  // v(s) = omega(s) Z(s)^{-1} f_x(s, x*(s), u*(s)).
  auto v = [&](std::size_t k, double s, const Mat* Zinv) -> Vec {
    Vec fx = prob.eval_f_x(s, cand.state_at(s), cand.control_in_cell(k, s));
    if (fx.cwiseAbs().maxCoeff() == 0.0) return Vec::Zero(n);
    Vec r = (Zinv ? *Zinv : F.inverse_at(s)) * fx;
    return prob.omega(s) * r;
  };

  const std::size_t N = grid.cells();
  std::vector<Vec> cell(N, Vec::Zero(n));
  std::vector<Mat> inv(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) inv[k] = F.inverse(k);
  const bool pole = !std::isfinite(prob.omega(0.0));
  Vec left = pole ? Vec::Zero(n) : v(0, 0.0, &inv[0]);
  for (std::size_t k = 0; k < N; ++k) {
    const double a = grid[k], h = grid.width(k);
    Vec right = v(k, grid[k + 1], &inv[k + 1]);
    if (k == 0 && pole) {
      for (int i = 0; i < n; ++i) {
        if (right[i] == 0.0) continue;
        auto g = [&](double s) { return v(0, s, nullptr)[i]; };
        double e = pole_exponent_of(prob, g, grid[1]);
        if (!(e > -1.0 + 1e-3)) throw Error(ErrorKind::DivergentTail, "non-integrable singularity at t=0");
        cell[0][i] = right[i] * grid[1] / (e + 1.0);
      }
    } else {
      Vec q1 = v(k, a + 0.25 * h, nullptr), m = v(k, a + 0.5 * h, nullptr), q3 = v(k, a + 0.75 * h, nullptr);
      cell[k] = (h / 12.0) * (left + 4.0 * q1 + 2.0 * m + 4.0 * q3 + right);
    }
    left = right;
  }

  // Tail beyond T per component.
  const double T = grid.T();
  std::vector<double> cum(grid.size(), 0.0);
  Vec tail = Vec::Zero(n);
  AdjointSolution adj;
  for (int i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < N; ++k) cum[k + 1] = cum[k] + cell[k][i];
    auto g = [&](double s) { return v(grid.locate(s), s, nullptr)[i]; };
    double I10 = interpolate(grid, cum, T / 10.0);
    TailAssessment ta = assess_tail(g, T, cum[N], I10);
    if (!ta.finite())
      throw Error(ErrorKind::DivergentTail,
                  "integral of omega Z^{-1} f_x does not stabilize (component " + std::to_string(i + 1) + ")");
    tail[i] = ta.remainder;
    if (ta.kind == TailKind::Extrapolated)
      adj.note += "tail extrapolated for component " + std::to_string(i + 1) + "; ";
  }

  adj.grid = grid;
  adj.lambda0 = 1.0;
  adj.route = AdjointRoute::Representation;
  adj.p.assign(grid.size(), Vec::Zero(n));
  Vec rev = tail;
  adj.p[N] = -F.Z[N] * rev;
  for (std::size_t k = N; k-- > 0;) {
    rev += cell[k];
    adj.p[k] = -F.Z[k] * rev;
  }
  adj.reliable_horizon = T;
  adj.note += "condition number of Z up to " + format_double(F.max_cond);
  fill_pdot(adj, prob, cand);
  return adj;
}

AdjointSolution adjoint_closed_form(const ControlProblem& prob, const CandidateProcess& cand,
                                    const std::vector<Expression>& p, double lambda0) {
  if (static_cast<int>(p.size()) != prob.n)
    throw Error(ErrorKind::DimensionMismatch, "closed-form adjoint has wrong size");
  AdjointSolution adj;
  adj.grid = cand.grid;
  adj.lambda0 = lambda0;
  adj.route = AdjointRoute::ClosedForm;
  adj.closed = p;
  std::vector<Expression> dp;
  for (const auto& e : p) dp.push_back(e.derivative(Var::t()));
  for (std::size_t k = 0; k < cand.grid.size(); ++k) {
    adj.p.push_back(ClosedForm::eval(p, cand.grid[k]));
    adj.pdot.push_back(ClosedForm::eval(dp, cand.grid[k]));
  }
  adj.reliable_horizon = cand.grid.T();
  return adj;
}

double adjoint_deviation(const AdjointSolution& a, const AdjointSolution& b, double t_max) {
  double scale = 0.0, diff = 0.0;
  for (std::size_t k = 0; k < a.p.size() && a.grid[k] <= t_max; ++k) {
    scale = std::max(scale, a.p[k].norm());
    diff = std::max(diff, (a.p[k] - b.at(a.grid[k])).norm());
  }
  return scale > 0.0 ? diff / scale : diff;
}

}  // namespace ihoc
