#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ihoc/expr.hpp"
#include "ihoc/grid.hpp"
#include "ihoc/limits.hpp"
#include "ihoc/report.hpp"

namespace ihoc {

/// A scalar weight (nu, eta) or distribution function (omega) on [0, inf).
struct WeightSpec {
  std::string label;
  std::function<double(double)> value;
  std::function<double(double)> derivative;  // empty: finite differences
  std::function<double(double)> tail_bound;  // empty: no declared integrability
  std::optional<double> pole_exponent;       // w(t) ~ c t^e at 0

  double operator()(double t) const { return value(t); }
  double deriv(double t) const;
  bool has_analytic_derivative() const { return static_cast<bool>(derivative); }
  bool has_tail_bound() const { return static_cast<bool>(tail_bound); }

  /// Step of the central difference used when no derivative is supplied.
  static double fd_step(double t);
  static const char* fd_rule();

  static WeightSpec exp_decay(double a);
  static WeightSpec power(double a);
  static WeightSpec weibull(double k);
  static WeightSpec from_expression(const Expression& e, std::optional<Expression> tail = std::nullopt,
                                    std::optional<double> pole = std::nullopt, std::string label = {});
};

/// Parses `exp_decay a`, `power a`, `weibull k` or `expr(E) [tail(E)] [pole(e)]`.
WeightSpec parse_weight_spec(std::string_view text, int line = 1, int column_offset = 0);

struct PropertyVerdict {
  Verdict verdict = Verdict::Undetermined;
  std::vector<Witness> witnesses;
  std::string note;
};

struct PropertyReport {
  std::string label;
  std::map<std::string, PropertyVerdict> verdicts;
  double K_estimate = 0.0;
  std::string derivative_note;
  double integral = 0.0;  // integral of the function when computed
  bool integral_finite = true;
  std::vector<std::pair<double, double>> partials;

  Verdict verdict(const std::string& key) const;
  bool all_pass() const;
};

/// Default property grid: 0 plus 2047 log-spaced points in [1e-12, 50].
TimeGrid default_property_grid();

PropertyReport check_weight_properties(const WeightSpec& nu, const TimeGrid& grid, Mode mode, double tol);
PropertyReport check_distribution(const WeightSpec& omega, const TimeGrid& grid, double tol);
/// F6: eta positive, continuous and nonincreasing.
PropertyReport check_radius(const WeightSpec& eta, const TimeGrid& grid);

struct DominanceResult {
  Verdict verdict = Verdict::Undetermined;
  double residual = 0.0;  // value of the integral (inf when divergent)
  double q = 0.0;
  std::vector<std::pair<double, double>> partials;
  std::string note;
};

/// Checks nu^{1-q} omega^q in L1 with q = p/(p-1).
DominanceResult check_dominance(const WeightSpec& nu, const WeightSpec& omega, double p,
                                const TimeGrid& grid = default_property_grid());

}  // namespace ihoc
