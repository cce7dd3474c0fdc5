#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "ihoc/candidate.hpp"
#include "ihoc/ode.hpp"
#include "ihoc/problem.hpp"
#include "ihoc/quadrature.hpp"
#include "ihoc/report.hpp"

namespace ihoc {

/// Smallest T of the form {1, 1.5, 2, 2.5, 3, 4, ..., 9} x 10^k (k >= 0) with
/// tail_bound(T) < tol. An infinite tol gives T = 1.
double tail_truncation(const WeightSpec& w, double tol);

/// Control as a function of (cell index, t); t lies in [t_k, t_{k+1}].
using ControlLaw = std::function<Vec(std::size_t cell, double t)>;

/// State at every knot. Cells are integrated one at a time so control jumps
/// at knots are never stepped across.
std::vector<Vec> integrate_state(const ControlProblem& prob, const TimeGrid& grid, const Vec& x0, const ControlLaw& u,
                                 const OdeOptions& opt = {}, OdeStats* stats = nullptr);

/// Left-continuous control samples u[k] at the knots.
CandidateProcess solve_state(const ControlProblem& prob, const std::vector<Vec>& u, const Vec& x0, const TimeGrid& grid,
                             const OdeOptions& opt = {});
/// Control given in closed form (expressions of t).
CandidateProcess solve_state(const ControlProblem& prob, const std::vector<Expression>& u, const Vec& x0,
                             const TimeGrid& grid, const OdeOptions& opt = {});

/// Per cell: ||x(t_{k+1}) - x(t_k) - integral of phi over the cell|| (max norm).
std::vector<double> state_residuals(const ControlProblem& prob, const CandidateProcess& cand);

/// Normalized fundamental matrix of z' = -phi_x^T z along a candidate.
class FundamentalMatrix {
 public:
  TimeGrid grid;
  std::vector<Mat> Z;
  std::vector<double> cond;
  double max_cond = 1.0;
  bool ill_conditioned = false;

  /// Z(t) between knots, integrated from the knot at or before t.
  Mat at(double t) const;
  /// Z(t)^{-1} by LU with partial pivoting.
  Mat inverse_at(double t) const;
  Mat inverse(std::size_t k) const;

 private:
  friend FundamentalMatrix fundamental_matrix(const ControlProblem&, const CandidateProcess&, const TimeGrid&,
                                              const OdeOptions&, double);
  std::function<Rhs(std::size_t)> rhs_;
  OdeOptions opt_;
};

/// Ill-conditioning (cond > threshold) is flagged, not thrown; callers that
/// need the inverse raise IllConditioned.
FundamentalMatrix fundamental_matrix(const ControlProblem& prob, const CandidateProcess& cand, const TimeGrid& grid,
                                     const OdeOptions& opt = {}, double ill_threshold = 1e12);

struct NormResult {
  double value = 0.0;     // W^1_p(nu) norm when the derivative was included, else L_p(nu)
  double lp = 0.0;        // ||x||_{L_p(nu)}
  double deriv_lp = 0.0;  // ||x'||_{L_p(nu)}
  bool finite = true;
  bool grid_limited = false;  // p = inf: grid sup under-approximates the ess sup
  double achieved_tol = 0.0;
  std::string note;
};

using VecFn = std::function<Vec(double)>;

/// L_p(nu) norm (and W^1_p(nu) with dx); p = inf is the sup over the knots.
NormResult weighted_norm(const VecFn& x, const VecFn& dx, const WeightSpec& nu, double p, const TimeGrid& grid);
NormResult weighted_norm(const CandidateProcess& cand, const WeightSpec& nu, double p, bool with_derivative);

struct HolderCheck {
  Verdict verdict = Verdict::Undetermined;
  double lhs = 0.0;  // ||<x, y>||_{L_1(nu)}
  double rhs = 0.0;  // ||x||_{L_p(nu)} ||y||_{L_q(nu)}
  double tol = 0.0;
  double q = 0.0;
};

HolderCheck holder_pairing_check(const VecFn& x, const VecFn& y, const WeightSpec& nu, double p, const TimeGrid& grid);

/// CSV with columns t, <names...>, values written with 17 significant digits.
void write_series_csv(const std::string& path, const std::vector<std::string>& names, const TimeGrid& grid,
                      const std::vector<Vec>& values);
std::string format_double(double v);

}  // namespace ihoc
