#include <algorithm>
#include <cmath>
#include <limits>

#include "ihoc/error.hpp"
#include "ihoc/pmp.hpp"

namespace ihoc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> to_std(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Witness witness_at(const CandidateProcess& cand, double t, double value, std::string note = {}) {
  Witness w;
  w.t = t;
  w.value = value;
  w.x = to_std(cand.state_at(t));
  w.u = to_std(cand.control_at(t));
  w.note = std::move(note);
  return w;
}

Vec right_value(const AdjointSolution& adj, std::size_t k) {
  if (!adj.closed.empty()) return adj.p[k];
  Vec p = adj.p[k];
  if (!adj.jump.empty() && adj.jump[k].size()) p += adj.jump[k];
  return p;
}

// p on the open cell (t_k, t_{k+1}); the left end uses the right limit.
Vec p_in_cell(const AdjointSolution& adj, std::size_t k, double t) {
  if (t <= adj.grid[k]) return right_value(adj, k);
  return adj.at(t);
}

// Integral of H_x over cell k by 5-point Simpson. NaN when omega or H_x is not
// finite somewhere in the cell (pole of omega at 0).
Vec cell_H_x(const ControlProblem& prob, const CandidateProcess& cand, const AdjointSolution& adj, std::size_t k) {
  const double a = cand.grid[k], h = cand.grid.width(k);
  static const double w[5] = {1, 4, 2, 4, 1};
  Vec sum = Vec::Zero(prob.n);
  for (int i = 0; i < 5; ++i) {
    const double t = a + 0.25 * i * h;
    Vec g;
    try {
      g = pontryagin_H_x(t, cand.state_at(t), cand.control_in_cell(k, t), p_in_cell(adj, k, t), adj.lambda0, prob);
    } catch (const DomainError&) {
      return Vec::Constant(prob.n, kNaN);
    }
    if (!g.allFinite()) return Vec::Constant(prob.n, kNaN);
    sum += w[i] * g;
  }
  return (h / 12.0) * sum;
}

double p_scale(const AdjointSolution& adj) {
  double m = adj.max_norm();
  return m > 0.0 ? m : 1.0;
}

double horizon(const AdjointSolution& adj) { return adj.reliable_horizon > 0.0 ? adj.reliable_horizon : adj.grid.T(); }

Verdict decide_tol(double value, double tol) {
  return std::isfinite(value) && value <= tol ? Verdict::Pass : Verdict::Fail;
}

std::string decay_text(const DecayTest& d) {
  return "q(" + format_double(d.t[0]) + ")=" + format_double(d.q[0]) + ", q(" + format_double(d.t[1]) +
         ")=" + format_double(d.q[1]) + ", q(" + format_double(d.t[2]) + ")=" + format_double(d.q[2]);
}

}  // namespace

ConditionRecord check_adjoint_residual(const ControlProblem& prob, const CandidateProcess& cand,
                                       const AdjointSolution& adj, const Tolerances& tol) {
  ConditionRecord rec;
  rec.name = "adjoint_residual";
  rec.tolerance = tol.adjoint_residual;
  const TimeGrid& grid = cand.grid;
  const double scale = p_scale(adj);
  rec.series.assign(grid.size(), 0.0);
  double worst = 0.0;
  std::size_t worst_k = 0, skipped = 0;
  for (std::size_t k = 0; k < grid.cells(); ++k) {
    Vec I = cell_H_x(prob, cand, adj, k);
    if (!I.allFinite()) {
      ++skipped;
      continue;
    }
    // p' = -H_x, so p(t_{k+1}) - p(t_k+) + integral of H_x vanishes.
    // Rounding in the knot values is not charged to the cell (matters for tiny cells near 0).
    const Vec pk = right_value(adj, k);
    const double floor = 8.0 * std::numeric_limits<double>::epsilon() * (pk.norm() + adj.p[k + 1].norm());
    const double r = std::max(0.0, (adj.p[k + 1] - pk + I).norm() - floor) / grid.width(k) / scale;
    rec.series[k + 1] = r;
    if (r > worst) {
      worst = r;
      worst_k = k + 1;
    }
  }
  rec.residual = worst;
  rec.verdict = decide_tol(worst, rec.tolerance);
  if (rec.verdict == Verdict::Fail)
    rec.witnesses.push_back(witness_at(cand, grid[worst_k], worst, "largest cell residual"));
  if (skipped) rec.note = std::to_string(skipped) + " cell(s) at a pole of omega skipped";
  if (adj.trivial()) {
    rec.verdict = Verdict::Fail;
    rec.note += (rec.note.empty() ? "" : "; ") + std::string("trivial multiplier (lambda0 = 0 and p = 0)");
  }
  return rec;
}

ConditionRecord check_integral_adjoint(const ControlProblem& prob, const CandidateProcess& cand,
                                       const AdjointSolution& adj, const Tolerances& tol) {
  ConditionRecord rec;
  rec.name = "integral_adjoint_residual";
  rec.tolerance = tol.adjoint_residual;
  const TimeGrid& grid = cand.grid;
  const std::size_t N = grid.cells();
  const int l = prob.l();
  if (!adj.measures.empty() && static_cast<int>(adj.measures.size()) != l)
    throw Error(ErrorKind::InvalidMeasure, "one atom list per state constraint expected");

  // Atoms snapped to knots: jump contribution nu g_x mass at that knot.
  std::vector<Vec> atom(grid.size(), Vec::Zero(prob.n));
  for (int j = 0; j < static_cast<int>(adj.measures.size()); ++j) {
    for (const Atom& a : adj.measures[j]) {
      if (!(a.mass >= 0.0) || !std::isfinite(a.mass))
        throw Error(ErrorKind::InvalidMeasure, "atom masses must be finite and nonnegative");
      if (a.t < 0.0 || a.t > grid.T()) throw Error(ErrorKind::InvalidMeasure, "atom outside the grid horizon");
      const std::size_t k = grid.nearest(a.t);
      const Vec x = cand.state_at(grid[k]);
      const double gj = prob.eval_g(grid[k], x)[j];
      if (std::fabs(gj) > tol.activity)
        throw Error(ErrorKind::AtomOffActiveSet, "atom of constraint " + std::to_string(j + 1) + " at t=" +
                                                     format_double(grid[k]) + " where g=" + format_double(gj));
      atom[k] += prob.nu(grid[k]) * a.mass * prob.eval_g_x(grid[k], x).row(j).transpose();
    }
  }

  // Reverse accumulation from T: R(t_k) = p(t_k) - p(T) - int_{t_k}^T H_x + sum of atoms in [t_k, T).
  const double scale = p_scale(adj);
  rec.series.assign(grid.size(), 0.0);
  Vec integral = Vec::Zero(prob.n), atoms = Vec::Zero(prob.n);
  double worst = 0.0;
  std::size_t worst_k = N;
  for (std::size_t k = N; k-- > 0;) {
    Vec I = cell_H_x(prob, cand, adj, k);
    if (!I.allFinite()) break;  // pole cell: the residual stops at t_1
    integral += I;
    atoms += atom[k];
    const double r = (adj.p[k] - adj.p[N] - integral + atoms).norm() / scale;
    rec.series[k] = r;
    if (r > worst) {
      worst = r;
      worst_k = k;
    }
  }
  rec.residual = worst;
  rec.verdict = decide_tol(worst, rec.tolerance);
  if (rec.verdict == Verdict::Fail) rec.witnesses.push_back(witness_at(cand, grid[worst_k], worst));
  rec.note = "measured relative to the horizon T=" + format_double(grid.T());
  return rec;
}

ConditionRecord check_maximum_condition(const ControlProblem& prob, const CandidateProcess& cand,
                                        const AdjointSolution& adj, const Tolerances& tol) {
  ConditionRecord rec;
  rec.name = "maximum_condition";
  rec.tolerance = tol.maximum;
  const TimeGrid& grid = cand.grid;
  rec.series.assign(grid.size(), 0.0);
  double worst = 0.0;
  std::size_t skipped = 0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double t = grid[k];
    if (!std::isfinite(prob.omega(t))) {
      ++skipped;
      continue;
    }
    const Vec x = cand.state_at(t), u = cand.control_at_knot(k);
    const double Hstar = pontryagin_H(t, x, u, adj.p[k], adj.lambda0, prob);
    InnerMax best = maximize_H(t, x, adj.p[k], adj.lambda0, prob, u);
    const double gap = (best.value - Hstar) / (1.0 + std::fabs(Hstar));
    rec.series[k] = gap;
    if (gap > worst) {
      worst = gap;
      if (gap > rec.tolerance) {
        Witness w = witness_at(cand, t, gap, "maximizer u=" + format_double(best.u[0]));
        rec.witnesses.assign(1, w);
      }
    }
  }
  rec.residual = worst;
  rec.verdict = decide_tol(worst, rec.tolerance);
  if (skipped) rec.note = std::to_string(skipped) + " knot(s) at a pole of omega skipped";
  return rec;
}

ConditionRecord check_weak_inequality(const ControlProblem& prob, const CandidateProcess& cand,
                                      const AdjointSolution& adj, const Tolerances& tol) {
  ConditionRecord rec;
  rec.name = "weak_inequality";
  rec.tolerance = tol.weak_inequality;
  if (!prob.U.convex) {
    rec.premise = Verdict::Fail;
    rec.verdict = Verdict::NotApplicable;
    rec.note = "control set not convex";
    return rec;
  }
  const TimeGrid& grid = cand.grid;
  const ControlBox& U = prob.U;
  rec.series.assign(grid.size(), 0.0);
  double worst = 0.0;
  std::size_t skipped = 0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double t = grid[k];
    if (!std::isfinite(prob.omega(t))) {
      ++skipped;
      continue;
    }
    const Vec u = cand.control_at_knot(k);
    const Vec g = pontryagin_H_u(t, cand.state_at(t), u, adj.p[k], adj.lambda0, prob);
    double s = 0.0;
    for (int i = 0; i < prob.m; ++i) {
      // sup over [lo, hi] of g_i (v - u_i); an unbounded side g_i points to contributes |g_i|.
      double c = 0.0;
      if (g[i] > 0.0) c = std::isfinite(U.hi[i]) ? g[i] * (U.hi[i] - u[i]) : g[i];
      if (g[i] < 0.0) c = std::isfinite(U.lo[i]) ? g[i] * (U.lo[i] - u[i]) : -g[i];
      s += std::max(c, 0.0);
    }
    rec.series[k] = s;
    if (s > worst) {
      worst = s;
      if (s > rec.tolerance) rec.witnesses.assign(1, witness_at(cand, t, s, "H_u=" + format_double(g[0])));
    }
  }
  rec.residual = worst;
  rec.verdict = decide_tol(worst, rec.tolerance);
  if (skipped) rec.note = std::to_string(skipped) + " knot(s) at a pole of omega skipped";
  return rec;
}

std::vector<TestFunction> transversality_battery(const ControlProblem& prob, const CandidateProcess& cand) {
  std::vector<TestFunction> out;
  out.push_back({"x*", [&cand](double t) { return cand.state_at(t); }});
  for (int i = 0; i < prob.n; ++i) {
    out.push_back({"e" + std::to_string(i + 1), [i, n = prob.n](double) {
                     Vec e = Vec::Zero(n);
                     e[i] = 1.0;
                     return e;
                   }});
  }
  const double pe = prob.p_exp;
  for (int i = 0; i < prob.n; ++i) {
    out.push_back({"nu^(-1/p)(1+t)^(-1) e" + std::to_string(i + 1), [i, n = prob.n, pe, &prob](double t) {
                     Vec e = Vec::Zero(n);
                     const double scale = std::isfinite(pe) ? std::pow(prob.nu(t), -1.0 / pe) : 1.0;
                     e[i] = scale / (1.0 + t);
                     return e;
                   }});
  }
  return out;
}

TransversalityRecords check_transversality(const ControlProblem& prob, const CandidateProcess& cand,
                                           const AdjointSolution& adj, Mode mode,
                                           const std::vector<TestFunction>& tests, const Tolerances& tol) {
  (void)cand;
  TransversalityRecords out;
  const double T = horizon(adj);

  ConditionRecord& pr = out.pairing;
  pr.name = "transversality_pairing";
  pr.tolerance = tol.limit;
  pr.verdict = Verdict::Pass;
  for (const TestFunction& f : tests) {
    DecayTest d = three_decade_decay([&](double t) { return adj.at(t).dot(f.x(t)); }, T, tol.limit);
    out.pairing_tests.emplace_back(f.label, d);
    pr.residual = std::max(pr.residual, std::isfinite(d.q[2]) ? d.q[2] : std::numeric_limits<double>::infinity());
    if (!passing(d.verdict)) {
      pr.verdict = Verdict::Fail;
      Witness w;
      w.t = d.t[2];
      w.value = d.q[2];
      w.note = "<p, " + f.label + ">: " + decay_text(d);
      pr.witnesses.push_back(w);
    }
  }
  pr.note = "finite test battery of " + std::to_string(tests.size()) + " functions";

  ConditionRecord& dr = out.decay;
  dr.name = "transversality_decay";
  dr.tolerance = tol.limit;
  std::function<double(double)> q;
  if (mode == Mode::Weak) {
    q = [&](double t) { return adj.at(t).norm(); };
    dr.note = "|p(t)|";
  } else if (prob.p_exp == 2.0) {
    q = [&](double t) { return adj.at(t).squaredNorm() / prob.nu(t); };
    dr.note = "|p(t)|^2 / nu(t)";
  } else {
    q = [&](double t) { return adj.at(t).norm() / prob.nu(t); };
    dr.note = "|p(t)| / nu(t)";
  }
  DecayTest d = three_decade_decay(q, T, tol.limit);
  dr.verdict = passing(d.verdict) ? Verdict::Pass : Verdict::Fail;
  dr.residual = d.q[2];
  dr.note += ": " + decay_text(d);
  if (dr.verdict == Verdict::Fail) {
    Witness w;
    w.t = d.t[2];
    w.value = d.q[2];
    dr.witnesses.push_back(w);
  }
  return out;
}

ConditionRecord check_michel(const ControlProblem& prob, const CandidateProcess& cand, const AdjointSolution& adj,
                             Mode mode, const Tolerances& tol) {
  ConditionRecord rec;
  rec.name = "michel";
  rec.tolerance = tol.limit;
  const double T = horizon(adj);
  const double Tw = cand.grid.T();
  std::vector<std::pair<std::string, DecayTest>> premises;
  auto w2 = [&](double t) {
    const double w = prob.omega(t);
    return w * w / prob.nu(t);
  };
  if (mode == Mode::Strong && prob.p_exp != 2.0) {
    premises.emplace_back("omega/nu",
                          three_decade_decay([&](double t) { return prob.omega(t) / prob.nu(t); }, Tw, tol.limit));
  } else {
    premises.emplace_back("omega^2/nu", three_decade_decay(w2, Tw, tol.limit));
  }
  if (mode == Mode::Weak)
    premises.emplace_back(
        "nu |u*|^2",
        three_decade_decay([&](double t) { return prob.nu(t) * cand.control_at(t).squaredNorm(); }, Tw, tol.limit));
  std::string premise_text;
  rec.premise = Verdict::Pass;
  for (const auto& [label, d] : premises) {
    premise_text += label + " -> 0: " + to_string(d.verdict) + " (" + decay_text(d) + "); ";
    if (!passing(d.verdict)) rec.premise = Verdict::Fail;
  }

  DecayTest h = three_decade_decay(
      [&](double t) { return pontryagin_H(t, cand.state_at(t), cand.control_at(t), adj.at(t), adj.lambda0, prob); }, T,
      tol.limit);
  rec.residual = h.q[2];
  const std::string h_text = "H -> 0: " + std::string(to_string(h.verdict)) + " (" + decay_text(h) + ")";
  if (rec.premise != Verdict::Pass) {
    rec.verdict = Verdict::NotApplicable;
    rec.note = premise_text + "informative " + h_text;
    return rec;
  }
  rec.verdict = passing(h.verdict) ? Verdict::Pass : Verdict::Fail;
  rec.note = premise_text + h_text;
  if (rec.verdict == Verdict::Fail) {
    Witness w;
    w.t = h.t[2];
    w.value = h.q[2];
    rec.witnesses.push_back(w);
  }
  return rec;
}

NormalityResult check_normality(const ControlProblem& prob, const CandidateProcess& cand, double delta,
                                const OdeOptions& opt) {
  NormalityResult res;
  ConditionRecord& rec = res.record;
  rec.name = "condition_S";
  const TimeGrid& grid = cand.grid;
  if (delta == 0.0) {
    rec.verdict = Verdict::Pass;
    rec.note = "delta = 0: vacuous";
    res.deviation.assign(grid.size(), 0.0);
    return res;
  }
  if (!(delta > 0.0)) throw Error(ErrorKind::InvalidArgument, "delta must be nonnegative");
  ControlLaw law = [&cand](std::size_t k, double t) { return cand.control_in_cell(k, t); };
  std::vector<Vec> ref;
  std::vector<std::vector<Vec>> runs;
  try {
    ref = integrate_state(prob, grid, prob.x0, law, opt);
    for (int i = 0; i < prob.n; ++i)
      for (double s : {1.0, -1.0}) {
        Vec z = prob.x0;
        z[i] += s * delta;
        runs.push_back(integrate_state(prob, grid, z, law, opt));
      }
  } catch (const BlowUp& e) {
    rec.verdict = Verdict::Fail;
    Witness w;
    w.t = e.escape_time();
    w.value = std::numeric_limits<double>::infinity();
    w.note = "perturbed solution escapes";
    rec.witnesses.push_back(w);
    rec.residual = std::numeric_limits<double>::infinity();
    rec.note = std::string("no solution on [0, inf) from a perturbed initial state: ") + e.what();
    return res;
  } catch (const DomainError& e) {
    rec.verdict = Verdict::Fail;
    rec.note = std::string("perturbed solution leaves the domain: ") + e.what();
    return res;
  }
  res.deviation.assign(grid.size(), 0.0);
  for (std::size_t k = 0; k < grid.size(); ++k)
    for (const auto& r : runs) res.deviation[k] = std::max(res.deviation[k], (r[k] - ref[k]).norm() / delta);

  // Fit ln D = ln C - c t over [T/10, T].
  const double T = grid.T();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  bool vanished = false;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (grid[k] < T / 10.0) continue;
    if (res.deviation[k] <= 0.0) {
      vanished = true;
      continue;
    }
    const double y = std::log(res.deviation[k]);
    sx += grid[k];
    sy += y;
    sxx += grid[k] * grid[k];
    sxy += grid[k] * y;
    ++cnt;
  }
  double c = 0.0;
  if (cnt >= 2 && sxx * cnt - sx * sx > 0.0) c = -(cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  res.decay_rate = c;
  double Cs = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) Cs = std::max(Cs, res.deviation[k] * std::exp(c * grid[k]));
  res.C_s = Cs;

  auto g = [&](double s) {
    const double D = interpolate(grid, res.deviation, s);
    return prob.nu(s) * D * D;
  };
  QuadOptions qo;
  qo.pole_exponent = 0.0;
  QuadratureResult q = integrate(g, grid, qo);
  rec.residual = q.value;
  rec.verdict = q.finite && std::isfinite(Cs) ? Verdict::Pass : Verdict::Fail;
  rec.note = "C_s=" + format_double(Cs) + ", decay rate c=" + format_double(c) +
             ", integral of nu D^2 = " + format_double(q.value) + " (tail " + to_string(q.tail_assessment.kind) + ")";
  if (vanished) rec.note += "; deviation vanishes on part of [T/10, T]";
  rec.series = res.deviation;
  return res;
}

}  // namespace ihoc
