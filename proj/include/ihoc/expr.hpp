#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace ihoc {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct Var {
  enum Kind { Time, State, Control };
  Kind kind = Time;
  int index = 0;  // zero-based for State/Control

  static Var t() { return {Time, 0}; }
  static Var x(int i) { return {State, i}; }
  static Var u(int j) { return {Control, j}; }
};

namespace detail {
struct Node;
struct Program;
}  // namespace detail

/// Scalar expression over t, x1..xn, u1..um. Grammar: numbers, pi, + - * / ^
/// (right associative, binds tighter than unary minus), and the functions
/// exp, ln, sqrt, sin, cos, abs, sign, pow(a, b).
///
/// Evaluation outside the domain (ln of a nonpositive argument, sqrt of a
/// negative one, division by zero, negative base with non-integer power)
/// throws DomainError carrying (t, x, u).
class Expression {
 public:
  Expression();

  static Expression parse(std::string_view text, int n = 0, int m = 0, int line = 1, int column_offset = 0);
  static Expression constant(double value, int n = 0, int m = 0);
  static Expression variable(Var v, int n, int m);

  double operator()(double t, const double* x, const double* u) const;
  double eval(double t, const Vec& x, const Vec& u) const;
  // Shorthand for expressions of t alone.
  double at(double t) const { return (*this)(t, nullptr, nullptr); }

  Expression derivative(Var v) const;
  bool depends_on(Var v) const;
  bool depends_on_state() const;
  bool depends_on_control() const;
  bool is_constant() const;
  double constant_value() const;  // only meaningful when is_constant()

  Expression negated() const;
  Expression plus(const Expression& other) const;
  Expression times(const Expression& other) const;
  Expression with_dims(int n, int m) const;

  std::string str() const;
  int n() const { return n_; }
  int m() const { return m_; }

 private:
  Expression(std::shared_ptr<const detail::Node> root, int n, int m);

  std::shared_ptr<const detail::Node> root_;
  std::shared_ptr<const detail::Program> program_;
  int n_ = 0;
  int m_ = 0;
};

}  // namespace ihoc
