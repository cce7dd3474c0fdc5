#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ihoc/error.hpp"
#include "ihoc/pmp.hpp"
#include "ihoc/quadrature.hpp"

namespace ihoc {

const AdjointSolution* CertificateReport::primary() const {
  if (representation) return &*representation;
  if (backward) return &*backward;
  if (oracle) return &*oracle;
  return nullptr;
}

const ConditionRecord* CertificateReport::find(const std::string& name) const {
  for (const auto& c : conditions)
    if (c.name == name) return &c;
  return nullptr;
}

Verdict CertificateReport::verdict(const std::string& name) const {
  const ConditionRecord* c = find(name);
  return c ? c->verdict : Verdict::Undetermined;
}

namespace {

ConditionRecord not_applicable(std::string name, std::string why) {
  ConditionRecord r;
  r.name = std::move(name);
  r.premise = Verdict::Fail;
  r.verdict = Verdict::NotApplicable;
  r.note = std::move(why);
  return r;
}

}  // namespace

CertificateReport verify_certificate(const ControlProblem& prob, const CandidateProcess& cand, Mode mode,
                                     const CertificateOptions& opt) {
  CertificateReport rep;
  rep.mode = mode;
  const Tolerances& tol = opt.tol;
  rep.audit = audit_assumptions(prob, cand, opt.gamma, mode, opt.tube_samples, tol);

  rep.normality = check_normality(prob, cand, opt.delta);
  const bool S = passing(rep.normality->record.verdict);
  rep.lambda0 = opt.lambda0_given ? opt.lambda0 : 1.0;
  if (!S && !opt.lambda0_given)
    rep.notes.push_back(
        "(S) fails: normality is not guaranteed; certificate run with lambda0 = 1, "
        "rerun with --lambda0 0 for the abnormal case");

  if (rep.lambda0 == 1.0) {
    try {
      rep.representation = adjoint_representation(prob, cand, {}, tol);
    } catch (const Error& e) {
      rep.notes.push_back(std::string("representation route unavailable: ") + e.what());
    }
  }
  try {
    rep.backward = adjoint_backward(prob, cand, rep.lambda0);
    if (rep.backward->terminal_sensitivity > tol.route_agreement)
      rep.notes.push_back("backward route depends on the truncation: restart at 0.8T changes p by " +
                          format_double(rep.backward->terminal_sensitivity) + " (relative) on [0, T/2]");
  } catch (const Error& e) {
    rep.notes.push_back(std::string("backward route unavailable: ") + e.what());
  }
  if (!opt.closed_adjoint.empty()) rep.oracle = adjoint_closed_form(prob, cand, opt.closed_adjoint, rep.lambda0);

  const AdjointSolution* prim = rep.primary();
  if (!prim) {
    rep.overall = Verdict::Undetermined;
    rep.status = "fail";
    rep.notes.push_back("no adjoint could be computed");
    return rep;
  }
  const double half = 0.5 * cand.grid.T();
  if (rep.representation && rep.backward)
    rep.route_deviation = adjoint_deviation(*rep.representation, *rep.backward, half);
  if (rep.oracle && prim != &*rep.oracle) rep.oracle_deviation = adjoint_deviation(*rep.oracle, *prim, half);

  AdjointSolution adj = *prim;
  adj.measures = opt.atoms;

  rep.conditions.push_back(check_adjoint_residual(prob, cand, adj, tol));
  rep.conditions.push_back(check_integral_adjoint(prob, cand, adj, tol));
  if (mode == Mode::Strong)
    rep.conditions.push_back(check_maximum_condition(prob, cand, adj, tol));
  else
    rep.conditions.push_back(not_applicable("maximum_condition", "weak mode uses the variational inequality"));
  rep.conditions.push_back(check_weak_inequality(prob, cand, adj, tol));

  TransversalityRecords tr = check_transversality(prob, cand, adj, mode, transversality_battery(prob, cand), tol);
  rep.pairing_tests = tr.pairing_tests;
  if (prob.p_exp == 2.0) {
    // Membership of p in L2(nu^-1) can only be observed up to the horizon.
    QuadOptions qo;
    qo.with_tail = false;
    const QuadratureResult n2 = integrate([&](double t) { return adj.at(t).squaredNorm() / prob.nu(t); }, adj.grid, qo);
    tr.decay.note += "; ||p||_{L2(nu^-1)} on [0, T] = " + format_double(std::sqrt(std::max(0.0, n2.truncated))) +
                     " (grid-limited: finite up to T only)";
  }
  rep.conditions.push_back(tr.pairing);
  rep.conditions.push_back(tr.decay);
  rep.conditions.push_back(check_michel(prob, cand, adj, mode, tol));

  ConditionRecord nr;
  nr.name = "normality_representation";
  nr.premise = S ? Verdict::Pass : Verdict::Fail;
  nr.tolerance = tol.route_agreement;
  if (!S) {
    nr.verdict = Verdict::NotApplicable;
    nr.note = "(S) fails";
  } else if (!rep.representation) {
    nr.verdict = Verdict::Fail;
    nr.note = "(S) holds but the representation integral could not be evaluated";
  } else {
    const AdjointSolution* other = rep.backward ? &*rep.backward : (rep.oracle ? &*rep.oracle : nullptr);
    if (!other) {
      nr.verdict = Verdict::Undetermined;
      nr.note = "no second route to compare with";
    } else {
      nr.residual = adjoint_deviation(*rep.representation, *other, half);
      nr.verdict = std::isfinite(nr.residual) && nr.residual <= nr.tolerance ? Verdict::Pass : Verdict::Fail;
      nr.note = std::string("representation vs ") + to_string(other->route) + " on [0, T/2]";
    }
  }
  rep.conditions.push_back(nr);

  bool all = true;
  for (const auto& c : rep.conditions) {
    if (c.verdict == Verdict::NotApplicable) continue;
    if (!passing(c.verdict)) all = false;
  }
  rep.overall = all ? Verdict::Pass : Verdict::Fail;
  rep.status = !rep.audit.satisfied() ? "assumptions-violated" : (all ? "pass" : "fail");
  return rep;
}

std::string format_certificate(const CertificateReport& r) {
  std::ostringstream os;
  os << "certificate\n";
  os << "  mode: " << to_string(r.mode) << "\n";
  os << "  lambda0: " << format_double(r.lambda0) << "\n";
  if (const AdjointSolution* p = r.primary()) os << "  adjoint route: " << to_string(p->route) << "\n";
  if (std::isfinite(r.route_deviation)) os << "  route deviation: " << format_double(r.route_deviation) << "\n";
  if (std::isfinite(r.oracle_deviation)) os << "  oracle deviation: " << format_double(r.oracle_deviation) << "\n";
  if (r.normality) {
    os << "\ncondition_S\n  verdict: " << to_string(r.normality->record.verdict)
       << "\n  note: " << r.normality->record.note << "\n";
  }
  for (const auto& c : r.conditions) {
    os << "\n" << c.name << "\n";
    os << "  premise: " << to_string(c.premise) << "\n";
    os << "  verdict: " << to_string(c.verdict) << "\n";
    os << "  residual: " << format_double(c.residual) << "\n";
    os << "  tolerance: " << format_double(c.tolerance) << "\n";
    if (!c.note.empty()) os << "  note: " << c.note << "\n";
    for (const auto& w : c.witnesses) {
      os << "  witness: t=" << format_double(w.t) << " value=" << format_double(w.value);
      if (!w.note.empty()) os << " (" << w.note << ")";
      os << "\n";
    }
  }
  if (!r.pairing_tests.empty()) {
    os << "\npairing tests\n";
    for (const auto& [label, d] : r.pairing_tests)
      os << "  <p, " << label << ">: " << to_string(d.verdict) << " at T: " << format_double(d.q[2]) << "\n";
  }
  for (const auto& n : r.notes) os << "\nnote: " << n << "\n";
  os << "\noverall: " << to_string(r.overall) << "\nstatus: " << r.status << "\n";
  return os.str();
}

void write_certificate_csv(const std::string& path, const CertificateReport& report, const TimeGrid& grid) {
  std::vector<std::string> names;
  std::vector<const std::vector<double>*> cols;
  for (const auto& c : report.conditions)
    if (c.series.size() == grid.size()) {
      names.push_back(c.name);
      cols.push_back(&c.series);
    }
  std::vector<Vec> rows(grid.size(), Vec::Zero(static_cast<int>(cols.size())));
  for (std::size_t k = 0; k < grid.size(); ++k)
    for (std::size_t j = 0; j < cols.size(); ++j) rows[k][static_cast<int>(j)] = (*cols[j])[k];
  write_series_csv(path, names, grid, rows);
}

}  // namespace ihoc
