#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "ihoc/audit.hpp"
#include "ihoc/candidate.hpp"
#include "ihoc/integrate.hpp"
#include "ihoc/problem.hpp"
#include "ihoc/report.hpp"

namespace ihoc {

/// H(t,x,u,p,l0) = -l0 omega(t) f(t,x,u) + <p, phi(t,x,u)>.
double pontryagin_H(double t, const Vec& x, const Vec& u, const Vec& p, double lambda0, const ControlProblem& prob);
Vec pontryagin_H_x(double t, const Vec& x, const Vec& u, const Vec& p, double lambda0, const ControlProblem& prob);
Vec pontryagin_H_u(double t, const Vec& x, const Vec& u, const Vec& p, double lambda0, const ControlProblem& prob);

/// Maximizer of H over the control box. Quadratic-in-u problems are solved in
/// closed form; everything else by a dense scan with golden-section refinement
/// per coordinate (cyclic when m > 1).
struct InnerMax {
  Vec u;
  double value = 0.0;
  bool analytic = false;
};

InnerMax maximize_H(double t, const Vec& x, const Vec& p, double lambda0, const ControlProblem& prob, const Vec& start);

enum class AdjointRoute { BackwardOde, Representation, ClosedForm };
const char* to_string(AdjointRoute r);

struct Atom {
  double t = 0.0;
  double mass = 0.0;
};

/// Adjoint on a grid. With atoms the adjoint is left-continuous and of bounded
/// variation: knot values include the atoms sitting on that knot.
struct AdjointSolution {
  TimeGrid grid;
  std::vector<Vec> p;
  std::vector<Vec> pdot;  // derivative samples from the adjoint equation
  std::vector<Vec> jump;  // p(t_k+) - p(t_k) at knots carrying atoms; empty without atoms
  double lambda0 = 1.0;
  AdjointRoute route = AdjointRoute::BackwardOde;
  std::vector<std::vector<Atom>> measures;  // per constraint j
  std::vector<Expression> closed;           // closed-form p when route is ClosedForm
  double terminal_sensitivity = 0.0;        // backward route: change when restarting at 0.8 T
  double reliable_horizon = 0.0;            // knots beyond this are dominated by the truncation
  std::string note;

  /// p(t): closed form, else cubic Hermite from (p, pdot) inside the cell.
  Vec at(double t) const;
  double max_norm(double t_max = std::numeric_limits<double>::infinity()) const;
  bool trivial() const;
};

AdjointSolution adjoint_backward(const ControlProblem& prob, const CandidateProcess& cand, double lambda0,
                                 std::optional<double> T = std::nullopt, const OdeOptions& opt = {});
AdjointSolution adjoint_representation(const ControlProblem& prob, const CandidateProcess& cand,
                                       const OdeOptions& opt = {}, const Tolerances& tol = {});
AdjointSolution adjoint_closed_form(const ControlProblem& prob, const CandidateProcess& cand,
                                    const std::vector<Expression>& p, double lambda0);

/// One row of a certificate.
struct ConditionRecord {
  std::string name;
  Verdict premise = Verdict::Pass;
  Verdict verdict = Verdict::Undetermined;
  double residual = 0.0;
  double tolerance = 0.0;
  std::vector<Witness> witnesses;
  std::string note;
  std::vector<double> series;  // residual per knot (empty when not meaningful)
};

ConditionRecord check_adjoint_residual(const ControlProblem& prob, const CandidateProcess& cand,
                                       const AdjointSolution& adj, const Tolerances& tol = {});
ConditionRecord check_integral_adjoint(const ControlProblem& prob, const CandidateProcess& cand,
                                       const AdjointSolution& adj, const Tolerances& tol = {});
ConditionRecord check_maximum_condition(const ControlProblem& prob, const CandidateProcess& cand,
                                        const AdjointSolution& adj, const Tolerances& tol = {});
ConditionRecord check_weak_inequality(const ControlProblem& prob, const CandidateProcess& cand,
                                      const AdjointSolution& adj, const Tolerances& tol = {});

struct TestFunction {
  std::string label;
  VecFn x;
};

/// x*, the unit constants and nu^{-1/p} (1+t)^{-1} e_i.
std::vector<TestFunction> transversality_battery(const ControlProblem& prob, const CandidateProcess& cand);

struct TransversalityRecords {
  ConditionRecord pairing;
  ConditionRecord decay;
  std::vector<std::pair<std::string, DecayTest>> pairing_tests;  // one per test function, x* first
};

TransversalityRecords check_transversality(const ControlProblem& prob, const CandidateProcess& cand,
                                           const AdjointSolution& adj, Mode mode,
                                           const std::vector<TestFunction>& tests, const Tolerances& tol = {});

ConditionRecord check_michel(const ControlProblem& prob, const CandidateProcess& cand, const AdjointSolution& adj,
                             Mode mode, const Tolerances& tol = {});

/// Condition (S) along the open-loop optimal control.
struct NormalityResult {
  ConditionRecord record;
  double C_s = 0.0;
  double decay_rate = 0.0;        // c in mu(t) = exp(-c t); negative for growing deviations
  std::vector<double> deviation;  // max over zeta of |x(t;zeta) - x*(t)| / |zeta - x0|
};

NormalityResult check_normality(const ControlProblem& prob, const CandidateProcess& cand, double delta,
                                const OdeOptions& opt = {});

struct CertificateOptions {
  double gamma = 0.1;
  double lambda0 = 1.0;
  bool lambda0_given = false;
  double delta = 1e-3;  // radius of the initial-state perturbation for (S)
  Tolerances tol;
  std::vector<std::vector<Atom>> atoms;    // per constraint
  std::vector<Expression> closed_adjoint;  // oracle, optional
  int tube_samples = 32;
};

struct CertificateReport {
  Mode mode = Mode::Strong;
  double lambda0 = 1.0;
  AssumptionReport audit;
  std::vector<ConditionRecord> conditions;
  std::optional<AdjointSolution> backward, representation, oracle;
  const AdjointSolution* primary() const;
  double route_deviation = std::numeric_limits<double>::quiet_NaN();
  double oracle_deviation = std::numeric_limits<double>::quiet_NaN();
  std::vector<Witness> michel_info;
  std::optional<NormalityResult> normality;  // condition (S)
  std::vector<std::pair<std::string, DecayTest>> pairing_tests;
  std::vector<std::string> notes;
  Verdict overall = Verdict::Undetermined;
  std::string status;  // pass | fail | assumptions-violated

  const ConditionRecord* find(const std::string& name) const;
  Verdict verdict(const std::string& name) const;
};

CertificateReport verify_certificate(const ControlProblem& prob, const CandidateProcess& cand, Mode mode,
                                     const CertificateOptions& opt = {});

/// Structured text: one block per condition (name, premise, verdict, residual, tolerance).
std::string format_certificate(const CertificateReport& report);
/// Residual time series of every condition that has one: columns t, <condition names...>.
void write_certificate_csv(const std::string& path, const CertificateReport& report, const TimeGrid& grid);

/// Sup-norm deviation of two adjoints over knots with t <= t_max, relative to max |a|.
double adjoint_deviation(const AdjointSolution& a, const AdjointSolution& b, double t_max);

}  // namespace ihoc
