#include "ihoc/sufficiency.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ihoc/audit.hpp"
#include "ihoc/error.hpp"

namespace ihoc {

double hamiltonian_sup(double t, const Vec& x, const Vec& p, const ControlProblem& prob, const Vec& start) {
  return maximize_H(t, x, p, 1.0, prob, start).value;
}

double hamiltonian_sup(double t, const Vec& x, const Vec& p, const ControlProblem& prob) {
  Vec u = Vec::Zero(prob.m);
  for (int i = 0; i < prob.m; ++i) {
    double lo = prob.U.lo[i], hi = prob.U.hi[i];
    if (lo > 0.0) u[i] = prob.U.lo_open[i] ? lo + 1e-9 * (1.0 + std::fabs(lo)) : lo;
    if (hi < 0.0) u[i] = prob.U.hi_open[i] ? hi - 1e-9 * (1.0 + std::fabs(hi)) : hi;
  }
  return hamiltonian_sup(t, x, p, prob, u);
}

ConcavityReport check_arrow(const ControlProblem& prob, const CandidateProcess& cand, const AdjointSolution& adj,
                            double gamma, Mode mode, const Tolerances& tol, std::size_t max_slices) {
  if (mode == Mode::Weak && !prob.eta) throw Error(ErrorKind::InvalidArgument, "weak mode needs a radius eta");
  ConcavityReport rep;
  rep.mode = mode;
  rep.gamma = gamma;
  const TimeGrid& grid = cand.grid;
  const int n = prob.n;
  const std::size_t K = grid.size();
  const std::size_t slices = std::min(max_slices, K);
  std::size_t skipped = 0;
  bool any_fail = false, any_undetermined = false;

  for (std::size_t s = 0; s < slices; ++s) {
    const std::size_t k = slices == 1 ? 0 : s * (K - 1) / (slices - 1);
    const double t = grid[k];
    if (!std::isfinite(prob.omega(t))) {
      ++skipped;
      continue;
    }
    ConcavitySlice sl;
    sl.t = t;
    const Vec xs = cand.state_at(t), p = adj.p[k], ustar = cand.control_at_knot(k);
    const double r = mode == Mode::Strong ? gamma : gamma * (*prob.eta)(t);
    auto Hs = [&](const Vec& x) { return hamiltonian_sup(t, x, p, prob, ustar); };
    auto test = [&](const Vec& a, const Vec& b) {
      const double h1 = Hs(a), h2 = Hs(b), hm = Hs(0.5 * (a + b));
      const double v = 0.5 * (h1 + h2) - hm;
      ++sl.pairs;
      if (sl.pairs == 1 || v > sl.worst) {
        sl.worst = v;
        sl.x1 = a;
        sl.x2 = b;
      }
      return v <= tol.concavity * (1.0 + std::fabs(hm));
    };
    bool ok = true;
    try {
      // Symmetric pairs about x*, then low-discrepancy pairs.
      std::vector<Vec> pts = tube_points(n, k, 64);
      int used = 0;
      for (std::size_t i = 1; i < pts.size() && used < 32; ++i, ++used)
        ok = test(xs + r * pts[i], xs - r * pts[i]) && ok;
      for (std::size_t i = 0; used < 64; ++i, ++used) {
        const Vec& a = pts[(2 * i + 1) % pts.size()];
        const Vec& b = pts[(2 * i + 2) % pts.size()];
        ok = test(xs + r * a, xs + r * b) && ok;
      }
      if (n == 1) {
        std::vector<double> h(9);
        for (int j = 0; j < 9; ++j) {
          Vec x = xs;
          x[0] += r * (j - 4) / 4.0;
          h[j] = Hs(x);
        }
        for (int j = 1; j < 8; ++j) {
          const double d2 = h[j - 1] - 2.0 * h[j] + h[j + 1];
          if (d2 > tol.concavity * (1.0 + std::fabs(h[j]))) {
            ok = false;
            sl.note =
                "positive second difference " + format_double(d2) + " at offset " + format_double(r * (j - 4) / 4.0);
          }
        }
      }
      sl.verdict = ok ? Verdict::Pass : Verdict::Fail;
    } catch (const DomainError& e) {
      sl.verdict = Verdict::Undetermined;
      sl.note = std::string("tube leaves the domain: ") + e.what();
    }
    if (sl.verdict == Verdict::Fail) any_fail = true;
    if (sl.verdict == Verdict::Undetermined) any_undetermined = true;
    if (rep.slices.empty() || sl.worst > rep.worst) {
      rep.worst = sl.worst;
      rep.worst_slice = rep.slices.size();
    }
    rep.slices.push_back(std::move(sl));
  }
  rep.overall =
      any_fail ? Verdict::Fail : (any_undetermined || rep.slices.empty() ? Verdict::Undetermined : Verdict::Pass);
  rep.note = std::to_string(rep.slices.size()) + " time slices";
  if (adj.route != AdjointRoute::Representation && prob.l() == 0)
    rep.note += ", adjoint in ODE form (" + std::string(to_string(adj.route)) +
                ") taken as equivalent to the integral-equation form without state constraints";
  if (skipped) rep.note += ", " + std::to_string(skipped) + " at a pole of omega skipped";
  return rep;
}

std::string format_concavity(const ConcavityReport& r) {
  std::ostringstream os;
  os << "sufficiency\n";
  os << "  mode: " << to_string(r.mode) << "\n";
  os << "  gamma: " << format_double(r.gamma) << "\n";
  os << "  verdict: " << to_string(r.overall) << "\n";
  os << "  worst midpoint violation: " << format_double(r.worst) << "\n";
  if (!r.slices.empty()) {
    const ConcavitySlice& w = r.slices[r.worst_slice];
    os << "  at t: " << format_double(w.t) << "\n";
    if (w.x1.size()) os << "  witness pair: x1=" << format_double(w.x1[0]) << " x2=" << format_double(w.x2[0]) << "\n";
    if (!w.note.empty()) os << "  slice note: " << w.note << "\n";
  }
  os << "  note: " << r.note << "\n";
  return os.str();
}

}  // namespace ihoc
