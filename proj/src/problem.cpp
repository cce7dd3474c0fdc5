#include "ihoc/problem.hpp"

#include <cmath>
#include <limits>

#include "ihoc/error.hpp"

namespace ihoc {

ControlBox ControlBox::whole(int m) {
  ControlBox b;
  const double inf = std::numeric_limits<double>::infinity();
  b.lo.assign(m, -inf);
  b.hi.assign(m, inf);
  b.lo_open.assign(m, true);
  b.hi_open.assign(m, true);
  return b;
}

bool ControlBox::bounded(int i) const { return std::isfinite(lo[i]) && std::isfinite(hi[i]); }

bool ControlBox::contains(const Vec& u, double tol) const {
  if (u.size() != dim()) return false;
  for (int i = 0; i < dim(); ++i) {
    if (lo_open[i] ? !(u[i] > lo[i] - tol) : !(u[i] >= lo[i] - tol)) return false;
    if (hi_open[i] ? !(u[i] < hi[i] + tol) : !(u[i] <= hi[i] + tol)) return false;
  }
  return true;
}

void ControlProblem::finalize() {
  if (n < 1) throw Error(ErrorKind::DimensionMismatch, "n must be at least 1");
  if (m < 0) throw Error(ErrorKind::DimensionMismatch, "m must be nonnegative");
  if (x0.size() != n)
    throw Error(ErrorKind::DimensionMismatch,
                "x0 has " + std::to_string(x0.size()) + " entries, n = " + std::to_string(n));
  if (static_cast<int>(phi.size()) != n)
    throw Error(ErrorKind::DimensionMismatch,
                "dynamics define " + std::to_string(phi.size()) + " components, n = " + std::to_string(n));
  if (U.dim() != m)
    throw Error(ErrorKind::DimensionMismatch,
                "control set has " + std::to_string(U.dim()) + " coordinates, m = " + std::to_string(m));
  f = f.with_dims(n, m);
  for (auto& e : phi) e = e.with_dims(n, m);
  for (auto& e : g) {
    e = e.with_dims(n, m);
    if (e.depends_on_control()) throw Error(ErrorKind::InvalidArgument, "state constraint depends on u: " + e.str());
  }

  auto fill = [&](std::vector<Expression>& slot, std::vector<bool> given, const Expression& e, Var::Kind kind,
                  int count) {
    slot.resize(count);
    given.resize(count, false);
    for (int j = 0; j < count; ++j) slot[j] = given[j] ? slot[j].with_dims(n, m) : e.derivative(Var{kind, j});
  };
  fill(f_x, f_x_given, f, Var::State, n);
  fill(f_u, f_u_given, f, Var::Control, m);
  phi_x.resize(n);
  phi_u.resize(n);
  phi_x_given.resize(n);
  phi_u_given.resize(n);
  for (int i = 0; i < n; ++i) {
    fill(phi_x[i], phi_x_given[i], phi[i], Var::State, n);
    fill(phi_u[i], phi_u_given[i], phi[i], Var::Control, m);
  }
  f_uu.assign(m, std::vector<Expression>(m));
  phi_uu.assign(n, std::vector<std::vector<Expression>>(m, std::vector<Expression>(m)));
  quadratic_in_u = true;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      f_uu[a][b] = f_u[a].derivative(Var::u(b));
      quadratic_in_u = quadratic_in_u && !f_uu[a][b].depends_on_control();
      for (int i = 0; i < n; ++i) {
        phi_uu[i][a][b] = phi_u[i][a].derivative(Var::u(b));
        quadratic_in_u = quadratic_in_u && !phi_uu[i][a][b].depends_on_control();
      }
    }
  g_x.resize(g.size());
  g_x_given.resize(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) fill(g_x[j], g_x_given[j], g[j], Var::State, n);
}

Vec ControlProblem::eval_phi(double t, const Vec& x, const Vec& u) const {
  Vec r(n);
  for (int i = 0; i < n; ++i) r[i] = phi[i].eval(t, x, u);
  return r;
}

Vec ControlProblem::eval_f_x(double t, const Vec& x, const Vec& u) const {
  Vec r(n);
  for (int i = 0; i < n; ++i) r[i] = f_x[i].eval(t, x, u);
  return r;
}

Vec ControlProblem::eval_f_u(double t, const Vec& x, const Vec& u) const {
  Vec r(m);
  for (int j = 0; j < m; ++j) r[j] = f_u[j].eval(t, x, u);
  return r;
}

Mat ControlProblem::eval_phi_x(double t, const Vec& x, const Vec& u) const {
  Mat r(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r(i, j) = phi_x[i][j].eval(t, x, u);
  return r;
}

Mat ControlProblem::eval_phi_u(double t, const Vec& x, const Vec& u) const {
  Mat r(n, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) r(i, j) = phi_u[i][j].eval(t, x, u);
  return r;
}

Vec ControlProblem::eval_g(double t, const Vec& x) const {
  Vec r(l());
  Vec none = Vec::Zero(m);
  for (int j = 0; j < l(); ++j) r[j] = g[j].eval(t, x, none);
  return r;
}

Mat ControlProblem::eval_g_x(double t, const Vec& x) const {
  Mat r(l(), n);
  Vec none = Vec::Zero(m);
  for (int j = 0; j < l(); ++j)
    for (int i = 0; i < n; ++i) r(j, i) = g_x[j][i].eval(t, x, none);
  return r;
}

}  // namespace ihoc
