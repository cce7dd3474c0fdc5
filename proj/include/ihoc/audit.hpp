#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ihoc/candidate.hpp"
#include "ihoc/integrate.hpp"
#include "ihoc/problem.hpp"
#include "ihoc/report.hpp"
#include "ihoc/weights.hpp"

namespace ihoc {

/// Deterministic points of the closed unit ball in R^dim: the centre, the 2 dim
/// axis extremes, then a Kronecker (additive recurrence) fill. `seed` shifts
/// the fill so neighbouring knots see different points.
std::vector<Vec> tube_points(int dim, std::size_t seed, int count);

struct AssumptionReport {
  Mode mode = Mode::Strong;
  double gamma = 0.0;
  // Keys: A0..A3 (strong) or B0..B2 (weak), sub-keys A2.majorant, A2.growth
  // (B2.majorant, B2.growth), and F when constraints are present.
  std::map<std::string, PropertyVerdict> verdicts;
  double C0 = 0.0;
  double K = 0.0;
  std::vector<double> L;  // majorant at the knots of `grid`
  TimeGrid grid;
  double L_integral = 0.0;  // integral of omega * L
  bool L_integral_finite = true;
  std::vector<std::pair<double, double>> L_partials;
  PropertyReport nu_report, omega_report;
  std::optional<PropertyReport> eta_report;
  std::vector<std::string> notes;

  Verdict verdict(const std::string& key) const;
  /// True when every top-level assumption (A0..A3 or B0..B2) is passing.
  bool satisfied() const;
};

AssumptionReport audit_assumptions(const ControlProblem& prob, const CandidateProcess& cand, double gamma, Mode mode,
                                   int samples = 32, const Tolerances& tol = {});

struct ActiveSet {
  std::vector<int> indices;                     // zero-based j in I
  std::vector<std::vector<std::size_t>> times;  // knots where |g_j| <= tol, per j in indices
  std::vector<double> max_value;                // max over the grid of g_j, for every j
};

ActiveSet active_indices(const ControlProblem& prob, const CandidateProcess& cand, double tol = 1e-8);

/// Condition (F): every active constraint is strictly negative somewhere.
PropertyVerdict slater_check(const ControlProblem& prob, const CandidateProcess& cand, const ActiveSet& I,
                             double tol = 1e-8);

struct GradientDiagnostic {
  Verdict verdict = Verdict::Undetermined;  // Pass: finite, Fail: divergent
  double value = 0.0;                       // integral of omega <f_x, xi>
  TailKind tail = TailKind::Divergent;
  std::vector<std::pair<double, double>> partials;
  // (lambda, difference quotient of the truncated objective) when finite
  std::vector<std::pair<double, double>> quotients;
  double agreement = 0.0;  // |last quotient - value| / (1 + |value|)
  std::string note;
};

GradientDiagnostic check_objective_gradient(const ControlProblem& prob, const CandidateProcess& cand, const VecFn& xi,
                                            const std::vector<double>& steps = {1e-2, 1e-3, 1e-4});

/// Largest relative deviation of every Jacobian entry from a Richardson
/// central difference over `points` random tube points.
struct JacobianCheck {
  double max_rel_error = 0.0;
  std::string worst;
  std::size_t points = 0;
  std::size_t entries = 0;
};

JacobianCheck check_jacobians(const ControlProblem& prob, const CandidateProcess& cand, double gamma,
                              std::size_t points = 100, unsigned seed = 7);

}  // namespace ihoc
