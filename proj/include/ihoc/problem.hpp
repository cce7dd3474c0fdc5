#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ihoc/expr.hpp"
#include "ihoc/weights.hpp"

namespace ihoc {

enum class Sense { Min, Max };

/// Box control set; bounds may be infinite and each end open or closed.
struct ControlBox {
  std::vector<double> lo, hi;
  std::vector<bool> lo_open, hi_open;
  bool convex = true;

  static ControlBox whole(int m);
  int dim() const { return static_cast<int>(lo.size()); }
  bool bounded(int i) const;
  bool contains(const Vec& u, double tol = 0.0) const;
  bool is_singleton(int i) const { return lo[i] == hi[i]; }
};

/// Problem record in the minimization convention: when sense is Max the
/// integrand f (and any user Jacobian of f) has been negated at load.
struct ControlProblem {
  std::string name;
  int n = 0;
  int m = 0;
  Sense sense = Sense::Min;
  double p_exp = 2.0;
  Vec x0;
  Expression f;
  std::vector<Expression> phi;
  std::vector<Expression> f_x, f_u;                   // gradients
  std::vector<std::vector<Expression>> phi_x, phi_u;  // phi_x[i][j] = d phi_i / d x_j
  // Second u-derivatives; quadratic_in_u when none of them depends on u.
  std::vector<std::vector<Expression>> f_uu;
  std::vector<std::vector<std::vector<Expression>>> phi_uu;
  bool quadratic_in_u = false;
  std::vector<Expression> g;
  std::vector<std::vector<Expression>> g_x;
  ControlBox U;
  WeightSpec omega;
  WeightSpec nu;
  std::optional<WeightSpec> eta;
  std::vector<std::string> user_jacobians;  // entries supplied in the source
  // Which Jacobian entries came from the source; finalize() derives the rest.
  std::vector<bool> f_x_given, f_u_given;
  std::vector<std::vector<bool>> phi_x_given, phi_u_given, g_x_given;

  /// Validates dimensions and derives every Jacobian entry still missing.
  void finalize();

  double eval_f(double t, const Vec& x, const Vec& u) const { return f.eval(t, x, u); }
  Vec eval_phi(double t, const Vec& x, const Vec& u) const;
  Vec eval_f_x(double t, const Vec& x, const Vec& u) const;
  Vec eval_f_u(double t, const Vec& x, const Vec& u) const;
  Mat eval_phi_x(double t, const Vec& x, const Vec& u) const;
  Mat eval_phi_u(double t, const Vec& x, const Vec& u) const;
  Vec eval_g(double t, const Vec& x) const;
  Mat eval_g_x(double t, const Vec& x) const;  // l x n
  int l() const { return static_cast<int>(g.size()); }
};

/// Parses the sectioned problem format ([problem], [dynamics], [objective],
/// [space], [controls], [constraints]). See README for the grammar.
ControlProblem parse_problem(std::string_view source);

}  // namespace ihoc
