#include "ihoc/needle.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "ihoc/error.hpp"
#include "ihoc/quadrature.hpp"

namespace ihoc {

NeedleFamily build_family(double t0, double t1, int m, int N) {
  if (!std::isfinite(t0) || !std::isfinite(t1) || !(t1 > t0))
    throw Error(ErrorKind::InvalidInterval, "needle interval needs finite t0 < t1");
  if (m < 1 || N < 1) throw Error(ErrorKind::InvalidArgument, "needle family needs m >= 1 and N >= 1");
  NeedleFamily f;
  f.t0 = t0;
  f.t1 = t1;
  f.m = m;
  f.N = N;
  return f;
}

void check_alpha(const NeedleFamily& fam, double alpha) {
  if (!(alpha >= 0.0) || alpha > 1.0 / fam.m)
    throw Error(ErrorKind::InvalidArgument, "alpha = " + format_double(alpha) + " outside [0, 1/m]");
}

std::vector<Interval> NeedleFamily::set(int i, double alpha) const {
  check_alpha(*this, alpha);
  if (i < 0 || i >= m) throw Error(ErrorKind::InvalidArgument, "set index out of range");
  std::vector<Interval> out;
  if (alpha == 0.0) return out;
  const double w = h();
  out.reserve(N);
  for (int j = 0; j < N; ++j) {
    const double start = t0 + j * w + i * (w / m);
    out.push_back({start, start + alpha * w});
  }
  return out;
}

double NeedleFamily::measure(int i, double alpha) const {
  double s = 0.0;
  for (const Interval& iv : set(i, alpha)) s += iv.length();
  return s;
}

bool NeedleFamily::contains(int i, double alpha, double t) const {
  check_alpha(*this, alpha);
  if (alpha == 0.0 || t < t0 || t >= t1) return false;
  const double w = h();
  const int j = std::min(N - 1, static_cast<int>(std::floor((t - t0) / w)));
  const double start = t0 + j * w + i * (w / m);
  return t >= start && t < start + alpha * w;
}

std::vector<double> NeedleFamily::breakpoints(const std::vector<double>& alpha) const {
  std::vector<double> out{t0, t1};
  for (int i = 0; i < m && i < static_cast<int>(alpha.size()); ++i)
    for (const Interval& iv : set(i, alpha[i])) {
      out.push_back(iv.a);
      out.push_back(iv.b);
    }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

PerturbedControl::PerturbedControl(VecFn b, std::vector<VecFn> d, NeedleFamily f, std::vector<double> a)
    : base(std::move(b)), donors(std::move(d)), family(f), alpha(std::move(a)) {
  if (static_cast<int>(donors.size()) != family.m || static_cast<int>(alpha.size()) != family.m)
    throw Error(ErrorKind::DimensionMismatch, "one donor and one alpha per set expected");
  for (double x : alpha) check_alpha(family, x);
}

int PerturbedControl::active(double t) const {
  for (int i = 0; i < family.m; ++i)
    if (family.contains(i, alpha[i], t)) return i;
  return -1;
}

Vec PerturbedControl::operator()(double t) const {
  const int i = active(t);
  return i < 0 ? base(t) : donors[i](t);
}

namespace {

// Sorted union of the points with near-duplicates merged.
std::vector<double> merge_points(std::vector<double> pts) {
  std::sort(pts.begin(), pts.end());
  std::vector<double> out;
  for (double t : pts)
    if (out.empty() || t - out.back() > 1e-13 * (1.0 + std::fabs(t))) out.push_back(t);
  return out;
}

}  // namespace

EstimateRecord verify_estimate(const NeedleFamily& fam, int i, const std::function<double(double)>& y, double alpha,
                               double alpha_prime, double delta, int sub) {
  check_alpha(fam, alpha);
  check_alpha(fam, alpha_prime);
  EstimateRecord rec;
  const double da = alpha - alpha_prime;
  rec.bound = delta * std::fabs(da);
  std::vector<double> pts{fam.t0, fam.t1};
  for (int j = 0; j <= fam.N; ++j) pts.push_back(fam.t0 + j * fam.h());
  for (double a : {alpha, alpha_prime})
    for (const Interval& iv : fam.set(i, a)) {
      pts.push_back(iv.a);
      pts.push_back(iv.b);
    }
  pts = merge_points(pts);
  double D = 0.0;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    const double a = pts[k], b = pts[k + 1], mid = 0.5 * (a + b);
    const double chi = (fam.contains(i, alpha, mid) ? 1.0 : 0.0) - (fam.contains(i, alpha_prime, mid) ? 1.0 : 0.0);
    const double wgt = chi - da;
    const double hs = (b - a) / sub;
    for (int s = 0; s < sub; ++s) {
      const double l = a + s * hs, r = l + hs;
      const double I = hs / 6.0 * (y(l) + 4.0 * y(0.5 * (l + r)) + y(r));
      D += wgt * I;
      if (std::fabs(D) > rec.lhs) {
        rec.lhs = std::fabs(D);
        rec.t_worst = r;
      }
    }
  }
  rec.delta_emp = da == 0.0 ? 0.0 : rec.lhs / std::fabs(da);
  rec.verdict = rec.lhs <= rec.bound + 1e-15 ? Verdict::Pass : Verdict::Fail;
  return rec;
}

LinearizationRecord verify_linearization(const ControlProblem& prob, const CandidateProcess& cand,
                                         const NeedleFamily& fam, const std::vector<VecFn>& donors, double alpha0,
                                         double delta, int levels, const OdeOptions& opt) {
  if (static_cast<int>(donors.size()) != fam.m) throw Error(ErrorKind::DimensionMismatch, "one donor per set expected");
  if (fam.t0 < 0.0 || fam.t1 > cand.grid.T())
    throw Error(ErrorKind::InvalidInterval, "needle interval must lie inside the candidate horizon");
  check_alpha(fam, alpha0);
  if (levels < 2) throw Error(ErrorKind::InvalidArgument, "at least two alpha levels needed");
  LinearizationRecord rec;
  rec.delta = delta;

  auto ustar = [&cand](double t) { return cand.control_at(t); };
  // Control inside a cell (a, b] of a grid refined at every breakpoint.
  auto in_cell = [](const TimeGrid& g, std::size_t k, double t) {
    const double a = g[k], b = g[k + 1];
    return std::clamp(t, a + 1e-12 * (b - a), b);
  };

  // Base grid up to t1, with the candidate's knots inside.
  std::vector<double> base_pts{0.0, fam.t1};
  for (double t : cand.grid.times())
    if (t < fam.t1) base_pts.push_back(t);
  for (int j = 0; j <= fam.N; ++j) base_pts.push_back(fam.t0 + j * fam.h());

  // Variational solution y' = phi_x y + sum_i (phi(u_i) - phi(u*)) along x*.
  TimeGrid g0(merge_points(base_pts));
  Rhs var = [&](double t, const Vec& y, Vec& dy) {
    const Vec x = cand.state_at(t), u = ustar(t);
    dy = prob.eval_phi_x(t, x, u) * y;
    if (t >= fam.t0 && t <= fam.t1) {
      const Vec f0 = prob.eval_phi(t, x, u);
      for (const VecFn& d : donors) dy += prob.eval_phi(t, x, d(t)) - f0;
    }
  };

  for (int level = 0; level < levels; ++level) {
    const double alpha = alpha0 / std::pow(2.0, level);
    std::vector<double> pts = base_pts;
    for (double b : fam.breakpoints(std::vector<double>(fam.m, alpha))) pts.push_back(b);
    TimeGrid g(merge_points(pts));
    PerturbedControl pc(ustar, donors, fam, std::vector<double>(fam.m, alpha));
    ControlLaw ua = [&](std::size_t k, double t) { return pc(in_cell(g, k, t)); };
    ControlLaw u0 = [&](std::size_t k, double t) { return ustar(in_cell(g, k, t)); };
    std::vector<Vec> xa = integrate_state(prob, g, prob.x0, ua, opt);
    std::vector<Vec> xs = integrate_state(prob, g, prob.x0, u0, opt);
    std::vector<Vec> ys = solve_forward(var, g, Vec::Zero(prob.n), opt);
    double err = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) err = std::max(err, (xa[k] - xs[k] - alpha * ys[k]).norm());
    rec.alphas.push_back(alpha);
    rec.errors.push_back(err);
    rec.ratios.push_back(err / alpha);
  }

  // ratio = fit_delta + fit_c alpha by least squares.
  const double n = static_cast<double>(levels);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int k = 0; k < levels; ++k) {
    sx += rec.alphas[k];
    sy += rec.ratios[k];
    sxx += rec.alphas[k] * rec.alphas[k];
    sxy += rec.alphas[k] * rec.ratios[k];
  }
  const double den = n * sxx - sx * sx;
  rec.fit_c = den > 0.0 ? (n * sxy - sx * sy) / den : 0.0;
  rec.fit_delta = (sy - rec.fit_c * sx) / n;
  for (int k = 0; k < levels; ++k)
    rec.fit_residual = std::max(rec.fit_residual, std::fabs(rec.ratios[k] - rec.fit_delta - rec.fit_c * rec.alphas[k]));
  rec.verdict = rec.ratios.back() <= delta ? Verdict::Pass : Verdict::Fail;
  rec.note = "error/alpha at the smallest alpha: " + format_double(rec.ratios.back());
  return rec;
}

LusinMask lusin_concentrate(const std::function<double(double)>& w, const TimeGrid& grid, double epsilon) {
  if (!(epsilon > 0.0)) throw Error(ErrorKind::InvalidArgument, "epsilon must be positive");
  LusinMask out;
  const std::size_t K = grid.size();
  std::vector<double> val(K);
  std::vector<std::size_t> bad;
  for (std::size_t k = 0; k < K; ++k) {
    val[k] = std::fabs(w(grid[k]));
    if (!std::isfinite(val[k])) bad.push_back(k);
  }
  std::vector<bool> in(K, true);
  if (!bad.empty()) {
    QuadOptions qo;
    qo.with_tail = false;
    QuadratureResult q = integrate([&](double t) { return std::fabs(w(t)); }, grid, qo);
    const std::vector<double>& C = q.cumulative;
    const double share = epsilon / static_cast<double>(bad.size());
    for (std::size_t p : bad) {
      // Widen [t_lo, t_hi) around the singular knot while the mass stays below the share.
      std::size_t lo = p, hi = p;
      auto mass = [&](std::size_t a, std::size_t b) { return C[b] - C[a]; };
      if (p + 1 < K && !(mass(p, p + 1) < share) && !(p > 0 && mass(p - 1, p) < share))
        throw Error(ErrorKind::CannotConcentrate,
                    "mass of one cell at t=" + format_double(grid[p]) + " exceeds epsilon; refine the grid");
      bool grown = true;
      while (grown) {
        grown = false;
        if (hi + 1 < K && mass(lo, hi + 1) < share) {
          ++hi;
          grown = true;
        }
        if (lo > 0 && mass(lo - 1, hi) < share) {
          --lo;
          grown = true;
        }
      }
      if (!std::isfinite(mass(lo, hi)))
        throw Error(ErrorKind::CannotConcentrate, "non-integrable singularity at t=" + format_double(grid[p]));
      out.excluded.push_back({grid[lo], grid[hi]});
      out.excluded_mass += mass(lo, hi);
      for (std::size_t k = lo; k < hi; ++k) in[k] = false;
      in[p] = false;
    }
  }
  for (std::size_t k = 0; k < K; ++k) {
    out.mask.emplace_back(grid[k], in[k]);
    if (in[k]) out.sup_on_K = std::max(out.sup_on_K, val[k]);
  }
  return out;
}

void write_family_csv(const std::string& path, const NeedleFamily& fam, const std::vector<double>& alpha) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorKind::IoError, "cannot write " + path);
  os << "set,alpha,a,b\n";
  for (int i = 0; i < fam.m && i < static_cast<int>(alpha.size()); ++i)
    for (const Interval& iv : fam.set(i, alpha[i]))
      os << i + 1 << ',' << format_double(alpha[i]) << ',' << format_double(iv.a) << ',' << format_double(iv.b) << '\n';
}

void write_mask_csv(const std::string& path, const LusinMask& mask) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorKind::IoError, "cannot write " + path);
  os << "t,in_K\n";
  for (const auto& [t, in] : mask.mask) os << format_double(t) << ',' << (in ? 1 : 0) << '\n';
}

}  // namespace ihoc
