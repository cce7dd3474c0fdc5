#include "ihoc/audit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "ihoc/error.hpp"

namespace ihoc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> as_std(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Witness witness(double t, double value, const Vec& x, const Vec& u, std::string note = {}) {
  return Witness{t, value, as_std(x), as_std(u), std::move(note)};
}

// Moves u into the closure of U, backing off open bounds slightly.
Vec into_box(const ControlBox& U, Vec u) {
  for (int i = 0; i < U.dim(); ++i) {
    double lo = U.lo[i], hi = U.hi[i];
    if (U.lo_open[i] && std::isfinite(lo)) lo += 1e-12 * (1.0 + std::fabs(lo));
    if (U.hi_open[i] && std::isfinite(hi)) hi -= 1e-12 * (1.0 + std::fabs(hi));
    u[i] = std::clamp(u[i], lo, std::max(lo, hi));
  }
  return u;
}

Verdict combine(std::initializer_list<Verdict> vs) {
  bool undetermined = false;
  for (Verdict v : vs) {
    if (v == Verdict::Fail) return Verdict::Fail;
    if (!passing(v) && v != Verdict::NotApplicable) undetermined = true;
  }
  return undetermined ? Verdict::Undetermined : Verdict::Pass;
}

Verdict weights_verdict(const PropertyReport& r) {
  bool undetermined = false;
  for (const auto& [key, pv] : r.verdicts) {
    if (pv.verdict == Verdict::Fail) return Verdict::Fail;
    if (!passing(pv.verdict) && pv.verdict != Verdict::NotApplicable) undetermined = true;
  }
  return undetermined ? Verdict::Undetermined : Verdict::Pass;
}

// Tracks a growth ratio over time: a constant bound exists when the ratio over
// the last decade stays within 1.5x of its sup over [0, T/10].
struct GrowthFit {
  explicit GrowthFit(std::string l) : label(std::move(l)) {}
  std::string label;
  double head = 0.0, tail = 0.0;
  Witness tail_witness, bad;
  bool non_finite = false;

  void add(double t, double T, double r, const Vec& x, const Vec& u) {
    if (!std::isfinite(r)) {
      if (!non_finite) bad = witness(t, r, x, u, label + " not finite");
      non_finite = true;
      return;
    }
    if (t <= T / 10.0)
      head = std::max(head, r);
    else if (r > tail) {
      tail = r;
      tail_witness = witness(t, r, x, u, label);
    }
  }
  bool ok() const { return !non_finite && tail <= 1.5 * head + 1e-12; }
  double constant() const { return std::max(head, tail); }
};

struct Tube {
  const ControlProblem& prob;
  const CandidateProcess& cand;
  double gamma;
  Mode mode;
  int samples;

  double radius(double t) const { return mode == Mode::Strong ? gamma : gamma * (*prob.eta)(t); }

  template <class F>
  void visit(double t, std::size_t seed, F&& fn) const {
    const int n = prob.n, m = prob.m;
    const int dim = mode == Mode::Strong ? n : n + m;
    const Vec xs = cand.state_at(t);
    const Vec us = cand.control_at(t);
    const double r = radius(t);
    for (const Vec& q : tube_points(dim, seed, samples)) {
      Vec x = xs + r * q.head(n);
      Vec u = mode == Mode::Strong ? us : into_box(prob.U, us + r * q.tail(m));
      fn(x, u);
    }
  }
};

}  // namespace

std::vector<Vec> tube_points(int dim, std::size_t seed, int count) {
  std::vector<Vec> pts;
  if (count <= 0) return pts;
  pts.push_back(Vec::Zero(dim));
  for (int i = 0; i < dim && static_cast<int>(pts.size()) + 1 < count; ++i) {
    Vec e = Vec::Zero(dim);
    e[i] = 1.0;
    pts.push_back(e);
    pts.push_back(-e);
  }
  static const double primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};
  std::size_t j = seed * static_cast<std::size_t>(count) + 1;
  while (static_cast<int>(pts.size()) < count) {
    Vec c(dim);
    for (int i = 0; i < dim; ++i) {
      double a = std::sqrt(primes[i % 16]) + (i / 16);
      double v = static_cast<double>(j) * a;
      c[i] = 2.0 * (v - std::floor(v)) - 1.0;
    }
    double nrm = c.norm();
    if (nrm > 1.0) c /= nrm;
    pts.push_back(c);
    ++j;
  }
  return pts;
}

Verdict AssumptionReport::verdict(const std::string& key) const {
  auto it = verdicts.find(key);
  return it == verdicts.end() ? Verdict::NotApplicable : it->second.verdict;
}

bool AssumptionReport::satisfied() const {
  const char* keys_strong[] = {"A0", "A1", "A2", "A3"};
  const char* keys_weak[] = {"B0", "B1", "B2"};
  if (mode == Mode::Strong) {
    for (const char* k : keys_strong)
      if (!passing(verdict(k)) && verdict(k) != Verdict::NotApplicable) return false;
  } else {
    for (const char* k : keys_weak)
      if (!passing(verdict(k)) && verdict(k) != Verdict::NotApplicable) return false;
  }
  return true;
}

AssumptionReport audit_assumptions(const ControlProblem& prob, const CandidateProcess& cand, double gamma, Mode mode,
                                   int samples, const Tolerances& tol) {
  if (!(gamma > 0.0)) throw Error(ErrorKind::InvalidArgument, "gamma must be positive");
  if (mode == Mode::Weak && !prob.eta) throw Error(ErrorKind::InvalidArgument, "weak mode needs a radius eta");
  AssumptionReport rep;
  rep.mode = mode;
  rep.gamma = gamma;
  rep.grid = cand.grid;
  const TimeGrid& grid = cand.grid;
  const double T = grid.T();
  const bool strong = mode == Mode::Strong;
  const std::string P = strong ? "A" : "B";

  // Assumption 0: weight, distribution and radius properties.
  TimeGrid pgrid = TimeGrid::log_uniform(T, 2048);
  rep.nu_report = check_weight_properties(prob.nu, pgrid, mode, tol.limit);
  rep.omega_report = check_distribution(prob.omega, pgrid, tol.limit);
  Verdict v0 = combine({weights_verdict(rep.nu_report), weights_verdict(rep.omega_report)});
  if (!strong) {
    rep.eta_report = check_radius(*prob.eta, pgrid);
    v0 = combine({v0, weights_verdict(*rep.eta_report)});
  }
  {
    PropertyVerdict pv{v0, {}, strong ? "E1-E6 on nu and omega" : "F1-F6 on nu, omega and eta"};
    for (const auto* r : {&rep.nu_report, &rep.omega_report}) {
      for (const auto& [key, p] : r->verdicts)
        if (p.verdict == Verdict::Fail)
          for (Witness w : p.witnesses) {
            w.note = key + (w.note.empty() ? "" : ": " + w.note);
            pv.witnesses.push_back(w);
          }
    }
    if (rep.eta_report)
      for (const auto& [key, p] : rep.eta_report->verdicts)
        if (p.verdict == Verdict::Fail) pv.witnesses.insert(pv.witnesses.end(), p.witnesses.begin(), p.witnesses.end());
    rep.verdicts[P + "0"] = pv;
  }
  rep.K = rep.nu_report.K_estimate;

  if (!strong) {
    for (std::size_t k = 0; k < grid.size(); ++k) {
      Vec xs = cand.state_at(grid[k]);
      double scale = std::max(xs.size() ? xs.cwiseAbs().maxCoeff() : 0.0, std::numeric_limits<double>::min());
      double r = gamma * (*prob.eta)(grid[k]);
      if (!(r > std::numeric_limits<double>::epsilon() * scale))
        throw Error(ErrorKind::EmptyTube, "gamma*eta(t) = " + std::to_string(r) + " at t=" + std::to_string(grid[k]) +
                                              " is below the resolution of x*(t)");
    }
  }

  Tube tube{prob, cand, gamma, mode, samples};
  const std::size_t stride = std::max<std::size_t>(1, grid.size() / 1024);

  // Assumption 1: continuity probe.
  {
    PropertyVerdict pv{Verdict::NoCounterexample, {}, "measurability in t assumed; continuity in (x,u) probed"};
    auto values = [&](double t, const Vec& x, const Vec& u) {
      std::vector<double> out;
      out.push_back(prob.eval_f(t, x, u));
      Vec a = prob.eval_phi(t, x, u), b = prob.eval_f_x(t, x, u);
      Mat c = prob.eval_phi_x(t, x, u);
      out.insert(out.end(), a.data(), a.data() + a.size());
      out.insert(out.end(), b.data(), b.data() + b.size());
      out.insert(out.end(), c.data(), c.data() + c.size());
      return out;
    };
    const int dim = prob.n + prob.m;
    for (std::size_t k = 0; k < grid.size() && pv.verdict != Verdict::Fail; k += stride * 4) {
      const double t = grid[k];
      tube.visit(t, k, [&](const Vec& x, const Vec& u) {
        if (pv.verdict == Verdict::Fail) return;
        try {
          auto v0 = values(t, x, u);
          for (int d = 0; d < dim; ++d) {
            Vec x1 = x, u1 = u, x2 = x, u2 = u;
            // Step relative to the coordinate so states decaying towards 0 are probed at their own scale.
            const double c = d < prob.n ? std::fabs(x[d]) : std::fabs(u[d - prob.n]);
            double h = 1e-7 * (c > 0.0 ? c : 1.0);
            if (d < prob.n) {
              x1[d] += h;
              x2[d] += h / 10;
            } else {
              u1[d - prob.n] += h;
              u2[d - prob.n] += h / 10;
            }
            if (!prob.U.contains(u1) || !prob.U.contains(u2)) continue;
            auto v1 = values(t, x1, u1), v2 = values(t, x2, u2);
            for (std::size_t i = 0; i < v0.size(); ++i) {
              double j1 = std::fabs(v1[i] - v0[i]), j2 = std::fabs(v2[i] - v0[i]);
              if (j1 > 1e-3 * (1.0 + std::fabs(v0[i])) && j2 > 0.5 * j1) {
                pv.verdict = Verdict::Fail;
                pv.witnesses.push_back(witness(t, j2, x, u, "jump that does not shrink with the step"));
                return;
              }
            }
          }
        } catch (const DomainError&) {
          // Outside the domain; the majorant check reports it.
        }
      });
    }
    rep.verdicts[P + "1"] = pv;
  }

  // Assumption 2: majorant L and growth constants.
  GrowthFit g_phi("|phi|/(1+|x|" + std::string(strong ? ")" : "+|u|)"));
  GrowthFit g_jac(strong ? "|phi_x|" : "|(phi_x, phi_u)|");
  std::optional<Witness> first_bad_L;
  auto majorant = [&](double t, std::size_t seed) {
    double L = 0.0;
    tube.visit(t, seed, [&](const Vec& x, const Vec& u) {
      if (!std::isfinite(L)) return;
      try {
        double f = prob.eval_f(t, x, u);
        double s = f * f + prob.eval_f_x(t, x, u).squaredNorm();
        if (!strong) s += prob.eval_f_u(t, x, u).squaredNorm();
        double v = std::sqrt(s);
        L = std::isfinite(v) ? std::max(L, v) : kInf;
      } catch (const DomainError&) {
        L = kInf;
      }
      if (!std::isfinite(L) && !first_bad_L)
        first_bad_L = witness(t, L, x, u, "integrand leaves its domain in the tube");
    });
    return L;
  };
  rep.L.resize(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double t = grid[k];
    rep.L[k] = majorant(t, k);
    if (k % stride) continue;
    tube.visit(t, k, [&](const Vec& x, const Vec& u) {
      try {
        double denom = 1.0 + x.norm() + (strong ? 0.0 : u.norm());
        g_phi.add(t, T, prob.eval_phi(t, x, u).norm() / denom, x, u);
        double j = prob.eval_phi_x(t, x, u).squaredNorm();
        if (!strong) j += prob.eval_phi_u(t, x, u).squaredNorm();
        g_jac.add(t, T, std::sqrt(j), x, u);
      } catch (const DomainError&) {
        g_phi.add(t, T, kInf, x, u);
      }
    });
  }
  QuadOptions qo;
  qo.pole_exponent = prob.omega.pole_exponent;
  auto wL = [&](double t) {
    double w = prob.omega(t);
    if (!std::isfinite(w)) return w;
    double L = majorant(t, grid.locate(t));
    return w == 0.0 ? 0.0 : w * L;
  };
  QuadratureResult q = integrate(wL, grid, qo);
  rep.L_integral = q.value;
  rep.L_integral_finite = q.finite && std::isfinite(q.value);
  rep.L_partials = q.partials;
  PropertyVerdict maj{rep.L_integral_finite ? Verdict::Pass : Verdict::Fail, {}, {}};
  if (!rep.L_integral_finite) {
    if (first_bad_L)
      maj.witnesses.push_back(*first_bad_L);
    else {
      std::size_t k = grid.size() - 1;
      maj.witnesses.push_back(witness(grid[k], q.value, cand.state_at(grid[k]), cand.control_at(grid[k]),
                                      "integral of omega*L still growing at T"));
    }
    maj.note = q.note.empty() ? "omega*L not integrable" : q.note;
  } else {
    maj.note = "integral of omega*L = " + format_double(q.value) + " (tail " + to_string(q.tail_assessment.kind) + ")";
  }
  PropertyVerdict growth{g_phi.ok() && g_jac.ok() ? Verdict::Pass : Verdict::Fail, {}, {}};
  for (const GrowthFit* g : {&g_phi, &g_jac}) {
    if (g->non_finite)
      growth.witnesses.push_back(g->bad);
    else if (!g->ok())
      growth.witnesses.push_back(g->tail_witness);
  }
  growth.note = "C0 fit: " + format_double(g_phi.constant()) + " / " + format_double(g_jac.constant());
  rep.C0 = std::max(g_phi.constant(), g_jac.constant());
  rep.verdicts[P + "2.majorant"] = maj;
  rep.verdicts[P + "2.growth"] = growth;
  PropertyVerdict a2{combine({maj.verdict, growth.verdict}), {}, "majorant and growth"};
  a2.witnesses = maj.witnesses;
  a2.witnesses.insert(a2.witnesses.end(), growth.witnesses.begin(), growth.witnesses.end());
  rep.verdicts[P + "2"] = a2;

  // Assumption 3 (strong only): state constraints.
  if (strong) {
    if (prob.l() == 0) {
      rep.verdicts["A3"] = {Verdict::NotApplicable, {}, "no state constraints"};
    } else {
      GrowthFit g_val("|g|/(1+|x|)"), g_grad("|g_x|"), g_lip("nu |g_x - g_x'| / |x - x'|");
      for (std::size_t k = 0; k < grid.size(); k += stride) {
        const double t = grid[k];
        const Vec xs = cand.state_at(t);
        const Mat Gs = prob.eval_g_x(t, xs);
        const double nu = prob.nu(t);
        Vec none = Vec::Zero(prob.m);
        for (const Vec& q : tube_points(prob.n, k, samples)) {
          Vec x = xs + gamma * q;
          Vec g = prob.eval_g(t, x);
          Mat G = prob.eval_g_x(t, x);
          g_val.add(t, T, g.cwiseAbs().maxCoeff() / (1.0 + x.norm()), x, none);
          g_grad.add(t, T, G.norm(), x, none);
          double d = (x - xs).norm();
          if (d > 0) g_lip.add(t, T, nu * (G - Gs).norm() / d, x, none);
        }
      }
      PropertyVerdict a3{g_val.ok() && g_grad.ok() && g_lip.ok() ? Verdict::Pass : Verdict::Fail, {}, {}};
      for (const GrowthFit* g : {&g_val, &g_grad, &g_lip})
        if (!g->ok()) a3.witnesses.push_back(g->non_finite ? g->bad : g->tail_witness);
      rep.C0 = std::max({rep.C0, g_val.constant(), g_grad.constant(), g_lip.constant()});
      rep.verdicts["A3"] = a3;
    }
    if (prob.l() > 0) {
      ActiveSet I = active_indices(prob, cand, tol.activity);
      rep.verdicts["F"] = slater_check(prob, cand, I, tol.activity);
    }
  }
  return rep;
}

ActiveSet active_indices(const ControlProblem& prob, const CandidateProcess& cand, double tol) {
  ActiveSet s;
  const TimeGrid& grid = cand.grid;
  s.max_value.assign(prob.l(), -kInf);
  std::vector<std::vector<std::size_t>> near(prob.l());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    Vec g = prob.eval_g(grid[k], cand.state_at(grid[k]));
    for (int j = 0; j < prob.l(); ++j) {
      if (g[j] > tol) throw InfeasibleState(j, grid[k], g[j]);
      s.max_value[j] = std::max(s.max_value[j], g[j]);
      if (std::fabs(g[j]) <= tol) near[j].push_back(k);
    }
  }
  for (int j = 0; j < prob.l(); ++j) {
    if (s.max_value[j] >= -tol) {
      s.indices.push_back(j);
      s.times.push_back(near[j]);
    }
  }
  return s;
}

PropertyVerdict slater_check(const ControlProblem& prob, const CandidateProcess& cand, const ActiveSet& I, double tol) {
  PropertyVerdict pv{Verdict::Pass, {}, I.indices.empty() ? "no active constraints" : ""};
  const TimeGrid& grid = cand.grid;
  for (int j : I.indices) {
    bool found = false;
    for (std::size_t k = 0; k < grid.size() && !found; ++k) {
      Vec x = cand.state_at(grid[k]);
      double g = prob.eval_g(grid[k], x)[j];
      if (g < -tol) {
        found = true;
        pv.witnesses.push_back(witness(grid[k], g, x, Vec(), "g" + std::to_string(j + 1) + " < 0"));
      }
    }
    if (!found) {
      pv.verdict = Verdict::Fail;
      pv.witnesses.push_back(witness(grid.T(), I.max_value[j], cand.state_at(grid.T()), Vec(),
                                     "g" + std::to_string(j + 1) + " never strictly negative"));
    }
  }
  return pv;
}

GradientDiagnostic check_objective_gradient(const ControlProblem& prob, const CandidateProcess& cand, const VecFn& xi,
                                            const std::vector<double>& steps) {
  GradientDiagnostic d;
  const TimeGrid& grid = cand.grid;
  QuadOptions qo;
  qo.pole_exponent = prob.omega.pole_exponent;
  auto g = [&](double t) {
    double w = prob.omega(t);
    if (!std::isfinite(w)) return w;
    double v = prob.eval_f_x(t, cand.state_at(t), cand.control_at(t)).dot(xi(t));
    return v == 0.0 ? 0.0 : w * v;
  };
  QuadratureResult q = integrate(g, grid, qo);
  d.value = q.value;
  d.tail = q.tail_assessment.kind;
  d.partials = q.partials;
  if (!q.finite || !std::isfinite(q.value)) {
    d.verdict = Verdict::Fail;
    d.note = "divergent: " + (q.note.empty() ? std::string("partial integrals keep growing") : q.note);
    return d;
  }
  d.verdict = Verdict::Pass;
  QuadOptions trunc = qo;
  trunc.with_tail = false;
  auto J = [&](double lambda) {
    auto h = [&](double t) {
      double w = prob.omega(t);
      if (!std::isfinite(w)) return w;
      double v = prob.eval_f(t, cand.state_at(t) + lambda * xi(t), cand.control_at(t));
      return v == 0.0 ? 0.0 : w * v;
    };
    return integrate(h, grid, trunc).value;
  };
  try {
    double J0 = J(0.0);
    // The truncated gradient is what the quotients approximate.
    double ref = q.truncated;
    for (double lambda : steps) d.quotients.emplace_back(lambda, (J(lambda) - J0) / lambda);
    if (!d.quotients.empty()) d.agreement = std::fabs(d.quotients.back().second - ref) / (1.0 + std::fabs(ref));
  } catch (const DomainError& e) {
    d.note = std::string("difference quotient left the domain: ") + e.what();
  }
  return d;
}

JacobianCheck check_jacobians(const ControlProblem& prob, const CandidateProcess& cand, double gamma,
                              std::size_t points, unsigned seed) {
  JacobianCheck jc;
  std::mt19937_64 rng(seed);
  const double T = std::min(cand.grid.T(), 20.0);
  std::uniform_real_distribution<double> ut(0.0, T), ub(-1.0, 1.0);
  const int n = prob.n, m = prob.m;

  // Ridders' extrapolation of central differences. The starting step is halved
  // until the stencil lies inside the domain; when the tableau's own error
  // estimate stays large (a nearby singularity) it restarts from a step 8 times
  // smaller and keeps the estimate with the smallest error.
  auto ridders = [](const std::function<double(double)>& D, double h, double& err) {
    constexpr int levels = 10;
    constexpr double con = 1.4, con2 = con * con;
    double a[levels][levels];
    a[0][0] = D(h);
    double best = a[0][0];
    err = std::numeric_limits<double>::infinity();
    for (int i = 1; i < levels; ++i) {
      h /= con;
      a[0][i] = D(h);
      double fac = con2;
      for (int j = 1; j <= i; ++j) {
        a[j][i] = (a[j - 1][i] * fac - a[j - 1][i - 1]) / (fac - 1.0);
        fac *= con2;
        const double e = std::max(std::fabs(a[j][i] - a[j - 1][i]), std::fabs(a[j][i] - a[j - 1][i - 1]));
        if (e <= err) {
          err = e;
          best = a[j][i];
        }
      }
      if (std::fabs(a[i][i] - a[i - 1][i - 1]) >= 2.0 * err) break;
    }
    return best;
  };
  auto rich = [&](const std::function<double(double)>& F, double z) {
    auto D = [&](double s) { return (F(z + s) - F(z - s)) / (2.0 * s); };
    double h = 0.05 * std::max(1.0, std::fabs(z));
    for (int k = 0;; ++k) {
      try {
        D(h);
        break;
      } catch (const DomainError&) {
        if (k == 60) throw;
        h *= 0.5;
      }
    }
    double best = 0.0, best_err = std::numeric_limits<double>::infinity();
    for (int restart = 0; restart < 8; ++restart, h /= 8.0) {
      double err = 0.0;
      const double d = ridders(D, h, err);
      if (err < best_err) {
        best_err = err;
        best = d;
      }
      if (best_err <= 1e-10 * std::max(1.0, std::fabs(best))) break;
    }
    return best;
  };
  auto compare = [&](double a, double fd, const std::string& name) {
    double rel = std::fabs(a - fd) / std::max({std::fabs(a), std::fabs(fd), 1e-8});
    ++jc.entries;
    if (rel > jc.max_rel_error) {
      jc.max_rel_error = rel;
      jc.worst = name;
    }
  };

  std::size_t attempts = 0;
  while (jc.points < points && attempts < 20 * points) {
    ++attempts;
    double t = ut(rng);
    Vec x = cand.state_at(t), u = cand.control_at(t);
    for (int i = 0; i < n; ++i) x[i] += gamma * ub(rng);
    for (int j = 0; j < m; ++j) u[j] += gamma * ub(rng);
    u = into_box(prob.U, u);
    try {
      // Keep only points where the whole stencil stays inside the domain.
      std::vector<std::pair<double, double>> results;
      std::vector<std::string> names;
      auto entry = [&](const Expression& F, const Expression& dF, bool state, int idx, const std::string& name) {
        double z = state ? x[idx] : u[idx];
        auto fn = [&](double s) {
          Vec xx = x, uu = u;
          (state ? xx[idx] : uu[idx]) = s;
          return F.eval(t, xx, uu);
        };
        results.emplace_back(dF.eval(t, x, u), rich(fn, z));
        names.push_back(name);
      };
      for (int i = 0; i < n; ++i) entry(prob.f, prob.f_x[i], true, i, "f_x" + std::to_string(i + 1));
      for (int j = 0; j < m; ++j) entry(prob.f, prob.f_u[j], false, j, "f_u" + std::to_string(j + 1));
      for (int r = 0; r < n; ++r) {
        for (int i = 0; i < n; ++i)
          entry(prob.phi[r], prob.phi_x[r][i], true, i, "phi" + std::to_string(r + 1) + "_x" + std::to_string(i + 1));
        for (int j = 0; j < m; ++j)
          entry(prob.phi[r], prob.phi_u[r][j], false, j, "phi" + std::to_string(r + 1) + "_u" + std::to_string(j + 1));
      }
      for (int r = 0; r < prob.l(); ++r)
        for (int i = 0; i < n; ++i)
          entry(prob.g[r], prob.g_x[r][i], true, i, "g" + std::to_string(r + 1) + "_x" + std::to_string(i + 1));
      for (std::size_t e = 0; e < results.size(); ++e) compare(results[e].first, results[e].second, names[e]);
      ++jc.points;
    } catch (const DomainError&) {
    }
  }
  return jc;
}

}  // namespace ihoc
