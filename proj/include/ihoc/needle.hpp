#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "ihoc/candidate.hpp"
#include "ihoc/integrate.hpp"
#include "ihoc/problem.hpp"
#include "ihoc/report.hpp"

namespace ihoc {

/// Half-open interval [a, b).
struct Interval {
  double a = 0.0;
  double b = 0.0;
  double length() const { return b - a; }
  bool contains(double t) const { return t >= a && t < b; }
};

/// Equal-slot set families on [t0, t1]: the interval is cut into N cells of
/// width h, every cell into m slots of width h/m, and M_i(alpha) is the union
/// over cells of [slot start, slot start + alpha h).
struct NeedleFamily {
  double t0 = 0.0, t1 = 1.0;
  int m = 1;
  int N = 1;

  double h() const { return (t1 - t0) / N; }
  /// M_i(alpha), i zero-based; alpha must lie in [0, 1/m].
  std::vector<Interval> set(int i, double alpha) const;
  double measure(int i, double alpha) const;
  bool contains(int i, double alpha, double t) const;
  /// Every endpoint of M_i(alpha_i) for all i, sorted.
  std::vector<double> breakpoints(const std::vector<double>& alpha) const;
};

NeedleFamily build_family(double t0, double t1, int m, int N);

/// Validates alpha in [0, 1/m] (InvalidArgument otherwise).
void check_alpha(const NeedleFamily& fam, double alpha);

/// u_alpha(t) = u*(t) + sum_i chi_{M_i(alpha_i)}(t) (u_i(t) - u*(t)).
struct PerturbedControl {
  VecFn base;
  std::vector<VecFn> donors;
  NeedleFamily family;
  std::vector<double> alpha;

  PerturbedControl(VecFn base, std::vector<VecFn> donors, NeedleFamily family, std::vector<double> alpha);
  Vec operator()(double t) const;
  /// Index of the set containing t, or -1.
  int active(double t) const;
};

struct EstimateRecord {
  Verdict verdict = Verdict::Undetermined;
  double lhs = 0.0;        // max over t of the approximation defect
  double delta_emp = 0.0;  // lhs / |alpha - alpha'| (0 when alpha = alpha')
  double bound = 0.0;      // delta |alpha - alpha'|
  double t_worst = 0.0;
};

/// max over t of |int_{t0}^t (chi_{M_i(alpha)} - chi_{M_i(alpha')}) y - (alpha - alpha') int_{t0}^t y|
/// by cumulative summation over the family's breakpoints, each piece split `sub` times.
EstimateRecord verify_estimate(const NeedleFamily& fam, int i, const std::function<double(double)>& y, double alpha,
                               double alpha_prime, double delta, int sub = 16);

struct LinearizationRecord {
  Verdict verdict = Verdict::Undetermined;
  std::vector<double> alphas;
  std::vector<double> errors;  // max over [0, t1] of |x_alpha - x* - alpha y|
  std::vector<double> ratios;  // errors / alpha
  double fit_c = 0.0;          // ratio ~ delta_fit + c alpha
  double fit_delta = 0.0;
  double fit_residual = 0.0;
  double delta = 0.0;
  std::string note;
};

/// Compares x_alpha from the perturbed control with x* + alpha y, where y solves
/// the variational equation y' = phi_x y + sum_i (phi(u_i) - phi(u*)), over
/// alpha_k = alpha0 / 2^k. Every set uses the same alpha.
LinearizationRecord verify_linearization(const ControlProblem& prob, const CandidateProcess& cand,
                                         const NeedleFamily& fam, const std::vector<VecFn>& donors, double alpha0,
                                         double delta, int levels = 4, const OdeOptions& opt = {});

struct LusinMask {
  std::vector<std::pair<double, bool>> mask;  // (t, t in K) per knot
  std::vector<Interval> excluded;
  double excluded_mass = 0.0;
  double sup_on_K = 0.0;
};

/// K = [0, T] minus neighbourhoods of the non-finite samples of w, each chosen
/// as wide as possible on the grid while the excluded mass stays below epsilon.
LusinMask lusin_concentrate(const std::function<double(double)>& w, const TimeGrid& grid, double epsilon);

void write_family_csv(const std::string& path, const NeedleFamily& fam, const std::vector<double>& alpha);
void write_mask_csv(const std::string& path, const LusinMask& mask);

}  // namespace ihoc
