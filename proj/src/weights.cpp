#include "ihoc/weights.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>

#include "ihoc/error.hpp"
#include "ihoc/quadrature.hpp"

namespace ihoc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

void require_positive(double a, const char* what) {
  if (!(a > 0.0) || !std::isfinite(a)) throw Error(ErrorKind::InvalidArgument, std::string(what) + " must be positive");
}

Witness at(double t, double value, std::string note = {}) {
  Witness w;
  w.t = t;
  w.value = value;
  w.note = std::move(note);
  return w;
}

}  // namespace

double WeightSpec::fd_step(double t) { return 1e-5 * std::max(1.0, t); }

const char* WeightSpec::fd_rule() { return "central difference, h = 1e-5*max(1,t); one-sided 3-point for t < h"; }

double WeightSpec::deriv(double t) const {
  if (derivative) return derivative(t);
  double h = fd_step(t);
  if (t >= h) return (value(t + h) - value(t - h)) / (2.0 * h);
  return (-3.0 * value(t) + 4.0 * value(t + h) - value(t + 2.0 * h)) / (2.0 * h);
}

WeightSpec WeightSpec::exp_decay(double a) {
  require_positive(a, "exp_decay rate");
  WeightSpec w;
  w.label = "exp_decay " + fmt(a);
  w.value = [a](double t) { return std::exp(-a * t); };
  w.derivative = [a](double t) { return -a * std::exp(-a * t); };
  w.tail_bound = [a](double T) { return std::exp(-a * T) / a; };
  return w;
}

WeightSpec WeightSpec::power(double a) {
  require_positive(a, "power exponent");
  WeightSpec w;
  w.label = "power " + fmt(a);
  w.value = [a](double t) { return std::pow(1.0 + t, -a); };
  w.derivative = [a](double t) { return -a * std::pow(1.0 + t, -a - 1.0); };
  if (a > 1.0) w.tail_bound = [a](double T) { return std::pow(1.0 + T, 1.0 - a) / (a - 1.0); };
  return w;
}

WeightSpec WeightSpec::weibull(double k) {
  require_positive(k, "weibull shape");
  WeightSpec w;
  w.label = "weibull " + fmt(k);
  w.value = [k](double t) { return std::pow(t, k - 1.0) * std::exp(-std::pow(t, k)); };
  w.derivative = [k](double t) {
    double tk = std::pow(t, k);
    return std::pow(t, k - 2.0) * std::exp(-tk) * ((k - 1.0) - k * tk);
  };
  // integral of the density over [T, inf) is exp(-T^k) / k
  w.tail_bound = [k](double T) { return std::exp(-std::pow(T, k)) / k; };
  if (k < 1.0) w.pole_exponent = k - 1.0;
  return w;
}

WeightSpec WeightSpec::from_expression(const Expression& e, std::optional<Expression> tail, std::optional<double> pole,
                                       std::string label) {
  if (e.depends_on_state() || e.depends_on_control())
    throw Error(ErrorKind::InvalidArgument, "weight expression may depend on t only: " + e.str());
  WeightSpec w;
  w.label = label.empty() ? "expr(" + e.str() + ")" : std::move(label);
  w.pole_exponent = pole;
  bool has_pole = pole.has_value();
  w.value = [e, has_pole](double t) {
    try {
      return e.at(t);
    } catch (const DomainError&) {
      if (has_pole && t == 0.0) return kInf;
      throw;
    }
  };
  Expression d = e.derivative(Var::t());
  w.derivative = [d, has_pole](double t) {
    try {
      return d.at(t);
    } catch (const DomainError&) {
      if (has_pole && t == 0.0) return -kInf;
      throw;
    }
  };
  if (tail) {
    Expression b = *tail;
    w.tail_bound = [b](double T) { return b.at(T); };
  }
  return w;
}

namespace {

std::size_t matching_paren(std::string_view s, std::size_t open, int line, int col0) {
  int depth = 0;
  for (std::size_t i = open; i < s.size(); ++i) {
    if (s[i] == '(')
      ++depth;
    else if (s[i] == ')' && --depth == 0)
      return i;
  }
  throw SyntaxError("unbalanced parentheses in weight spec", line, col0 + static_cast<int>(open) + 1);
}

double parse_number(std::string_view s, std::size_t pos, int line, int col0) {
  std::string text(s);
  const char* begin = text.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end == begin) throw SyntaxError("expected a number", line, col0 + static_cast<int>(pos) + 1);
  while (*end != '\0' && std::isspace(static_cast<unsigned char>(*end))) ++end;
  if (*end != '\0')
    throw SyntaxError("trailing characters after number", line, col0 + static_cast<int>(pos + (end - begin)) + 1);
  return v;
}

std::size_t skip_ws(std::string_view s, std::size_t i) {
  while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  return i;
}

}  // namespace

WeightSpec parse_weight_spec(std::string_view text, int line, int col0) {
  std::size_t i = skip_ws(text, 0);
  std::size_t j = i;
  while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
  std::string head(text.substr(i, j - i));
  if (head == "exp_decay" || head == "power" || head == "weibull") {
    std::size_t k = skip_ws(text, j);
    double a = parse_number(text.substr(k), k, line, col0);
    if (head == "exp_decay") return WeightSpec::exp_decay(a);
    if (head == "power") return WeightSpec::power(a);
    return WeightSpec::weibull(a);
  }
  if (head != "expr") throw SyntaxError("unknown weight spec '" + head + "'", line, col0 + static_cast<int>(i) + 1);
  std::size_t open = skip_ws(text, j);
  if (open >= text.size() || text[open] != '(')
    throw SyntaxError("expected '(' after expr", line, col0 + static_cast<int>(open) + 1);
  std::size_t close = matching_paren(text, open, line, col0);
  Expression e =
      Expression::parse(text.substr(open + 1, close - open - 1), 0, 0, line, col0 + static_cast<int>(open) + 1);
  std::optional<Expression> tail;
  std::optional<double> pole;
  std::size_t pos = skip_ws(text, close + 1);
  while (pos < text.size()) {
    std::size_t w = pos;
    while (w < text.size() && std::isalpha(static_cast<unsigned char>(text[w]))) ++w;
    std::string word(text.substr(pos, w - pos));
    std::size_t o = skip_ws(text, w);
    if ((word != "tail" && word != "pole") || o >= text.size() || text[o] != '(')
      throw SyntaxError("expected tail(...) or pole(...)", line, col0 + static_cast<int>(pos) + 1);
    std::size_t c = matching_paren(text, o, line, col0);
    std::string_view inner = text.substr(o + 1, c - o - 1);
    if (word == "tail")
      tail = Expression::parse(inner, 0, 0, line, col0 + static_cast<int>(o) + 1);
    else
      pole = parse_number(inner, o + 1, line, col0);
    pos = skip_ws(text, c + 1);
  }
  return WeightSpec::from_expression(e, tail, pole,
                                     "expr(" + std::string(text.substr(open + 1, close - open - 1)) + ")");
}

Verdict PropertyReport::verdict(const std::string& key) const {
  auto it = verdicts.find(key);
  return it == verdicts.end() ? Verdict::NotApplicable : it->second.verdict;
}

bool PropertyReport::all_pass() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const auto& kv) {
    return passing(kv.second.verdict) || kv.second.verdict == Verdict::NotApplicable;
  });
}

TimeGrid default_property_grid() { return TimeGrid::log_uniform(50.0, 2048, 1e-12); }

PropertyReport check_weight_properties(const WeightSpec& nu, const TimeGrid& grid, Mode mode, double tol) {
  PropertyReport rep;
  rep.label = nu.label;
  rep.derivative_note = nu.has_analytic_derivative() ? "analytic derivative" : WeightSpec::fd_rule();
  const bool strong = mode == Mode::Strong;
  const char* k1 = strong ? "E1" : "F1";
  const char* k2 = strong ? "E2" : "F2";
  const char* k3 = strong ? "E3" : "F3";
  const char* k4 = strong ? "E4" : "F4";

  const std::size_t N = grid.size();
  std::vector<double> v(N);
  PropertyVerdict e1{Verdict::Pass, {}, {}};
  for (std::size_t k = 0; k < N; ++k) {
    v[k] = nu(grid[k]);
    if (std::isfinite(v[k]) && v[k] <= 0.0) {
      std::ostringstream os;
      os.precision(17);
      os << nu.label << " is " << v[k] << " at t=" << grid[k];
      throw Error(ErrorKind::NonPositiveWeight, os.str());
    }
    if (!std::isfinite(v[k]) && e1.verdict == Verdict::Pass) {
      e1.verdict = Verdict::Fail;
      e1.witnesses.push_back(at(grid[k], v[k], "not finite, so not continuous on [0, inf)"));
    }
  }
  rep.verdicts[k1] = e1;

  PropertyVerdict e2{Verdict::Pass, {}, {}};
  for (std::size_t k = 1; k < N; ++k) {
    if (v[k] > v[k - 1] * (1.0 + 1e-12)) {
      e2.verdict = Verdict::Fail;
      e2.witnesses.push_back(at(grid[k], v[k] - v[k - 1], "increase over the previous knot"));
      break;
    }
  }
  rep.verdicts[k2] = e2;

  // W^1_1: nu and its derivative integrable.
  PropertyVerdict e3;
  if (e1.verdict == Verdict::Fail) {
    e3.verdict = Verdict::Fail;
    e3.witnesses = e1.witnesses;
    e3.note = "nu not finite";
  } else {
    QuadOptions qo;
    qo.tail_bound = nu.tail_bound;
    QuadratureResult I = integrate([&](double t) { return nu(t); }, grid, qo);
    QuadratureResult D = integrate([&](double t) { return std::fabs(nu.deriv(t)); }, grid);
    rep.integral = I.value;
    rep.integral_finite = I.finite;
    rep.partials = I.partials;
    bool ok = I.finite && D.finite;
    e3.verdict = ok ? Verdict::Pass : Verdict::Fail;
    std::ostringstream os;
    os.precision(6);
    os << "int nu = " << I.value << " (" << (I.tail_declared ? "declared tail" : to_string(I.tail_assessment.kind))
       << "), int |nu'| = " << D.value;
    e3.note = os.str();
    if (!ok)
      e3.witnesses.push_back(at(grid.T(), I.finite ? D.truncated : I.truncated, "partial integral still growing"));
  }
  rep.verdicts[k3] = e3;

  PropertyVerdict e4{Verdict::Pass, {}, {}};
  double max_early = 0.0, K = 0.0, t_at_K = 0.0;
  bool bad = false;
  for (std::size_t k = 0; k < N; ++k) {
    double t = grid[k];
    if (!std::isfinite(v[k])) continue;
    double r = std::fabs(nu.deriv(t)) / v[k];
    if (!std::isfinite(r)) {
      bad = true;
      e4.witnesses.push_back(at(t, r, "|nu'|/nu not finite"));
      break;
    }
    if (r > K) {
      K = r;
      t_at_K = t;
    }
    if (t <= grid.T() / 10.0) max_early = std::max(max_early, r);
  }
  double rT = std::fabs(nu.deriv(grid.T())) / v.back();
  rep.K_estimate = K;
  if (bad || e1.verdict == Verdict::Fail) {
    e4.verdict = Verdict::Fail;
    if (e4.witnesses.empty()) e4.witnesses = e1.witnesses;
  } else if (rT > 1.5 * max_early && rT > 1e-300) {
    e4.verdict = Verdict::Fail;
    e4.witnesses.push_back(at(grid.T(), rT, "|nu'|/nu still growing at T"));
  }
  e4.note = "K_estimate = " + fmt(K) + " at t=" + fmt(t_at_K);
  rep.verdicts[k4] = e4;

  if (strong) {
    DecayTest d = three_decade_decay([&](double t) { return t * nu(t); }, grid.T(), tol);
    PropertyVerdict e5{d.verdict, {}, "three-decade decay of t*nu(t): " + d.note};
    if (d.verdict == Verdict::Fail) e5.witnesses.push_back(at(d.t[2], d.q[2], "t*nu(t) at T"));
    rep.verdicts["E5"] = e5;
  }
  return rep;
}

PropertyReport check_distribution(const WeightSpec& omega, const TimeGrid& grid, double) {
  PropertyReport rep;
  rep.label = omega.label;
  PropertyVerdict nonneg{Verdict::Pass, {}, {}};
  for (std::size_t k = 0; k < grid.size(); ++k) {
    double w = omega(grid[k]);
    if (w < 0.0) {
      nonneg.verdict = Verdict::Fail;
      nonneg.witnesses.push_back(at(grid[k], w, "omega < 0"));
      break;
    }
  }

  QuadOptions qo;
  qo.tail_bound = omega.tail_bound;
  qo.pole_exponent = omega.pole_exponent;
  QuadratureResult I = integrate([&](double t) { return omega(t); }, grid, qo);
  rep.integral = I.value;
  rep.partials = I.partials;
  PropertyVerdict e6;
  std::ostringstream os;
  os.precision(6);
  if (!I.finite) {
    e6.verdict = Verdict::Fail;
    e6.witnesses.push_back(at(grid.T(), I.truncated, I.note.empty() ? "partial integral diverges" : I.note));
    os << "partial integrals diverge";
  } else if (I.tail_declared) {
    e6.verdict = Verdict::Pass;
    os << "int omega = " << I.value << " (declared tail " << I.tail << ")";
  } else {
    double I100 = interpolate(grid, I.cumulative, grid.T() / 100.0);
    double I10 = interpolate(grid, I.cumulative, grid.T() / 10.0);
    double last = I.truncated - I10, previous = I10 - I100;
    if (I.tail_assessment.kind == TailKind::Stabilized) {
      e6.verdict = Verdict::Pass;
      os << "int omega = " << I.value << " (stabilized, no declared tail)";
    } else if (std::fabs(last) >= std::fabs(previous)) {
      e6.verdict = Verdict::Fail;
      e6.witnesses.push_back(at(grid.T(), I.truncated, "partial integral increments not shrinking"));
      os << "partial integrals grow without bound";
      I.finite = false;
    } else {
      throw Error(ErrorKind::MissingTailBound, omega.label + ": partial integral still growing by " +
                                                   fmt(100.0 * I.tail_assessment.growth) +
                                                   "% over the last decade; declare tail(...)");
    }
  }
  rep.integral_finite = I.finite;
  e6.note = os.str();
  rep.verdicts["E6"] = e6;
  PropertyVerdict f5{
      passing(nonneg.verdict) && passing(e6.verdict) ? Verdict::Pass : Verdict::Fail, nonneg.witnesses, {}};
  if (f5.verdict == Verdict::Fail && f5.witnesses.empty()) f5.witnesses = e6.witnesses;
  f5.note = "omega >= 0 and integrable";
  rep.verdicts["F5"] = f5;
  return rep;
}

PropertyReport check_radius(const WeightSpec& eta, const TimeGrid& grid) {
  PropertyReport rep;
  rep.label = eta.label;
  PropertyVerdict f6{Verdict::Pass, {}, "positive, continuous, nonincreasing"};
  double prev = kInf;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    double v = eta(grid[k]);
    if (std::isfinite(v) && v <= 0.0)
      throw Error(ErrorKind::NonPositiveWeight, eta.label + " is not positive at t=" + fmt(grid[k]));
    if (!std::isfinite(v)) {
      f6.verdict = Verdict::Fail;
      f6.witnesses.push_back(at(grid[k], v, "not finite"));
      break;
    }
    if (v > prev * (1.0 + 1e-12)) {
      f6.verdict = Verdict::Fail;
      f6.witnesses.push_back(at(grid[k], v - prev, "increase over the previous knot"));
      break;
    }
    prev = v;
  }
  rep.verdicts["F6"] = f6;
  return rep;
}

DominanceResult check_dominance(const WeightSpec& nu, const WeightSpec& omega, double p, const TimeGrid& grid) {
  if (!(p > 1.0) || !std::isfinite(p))
    throw Error(ErrorKind::InvalidExponent, "dominance needs 1 < p < inf, got " + fmt(p));
  DominanceResult res;
  const double q = p / (p - 1.0);
  res.q = q;
  auto g = [&](double t) { return std::pow(nu(t), 1.0 - q) * std::pow(omega(t), q); };
  QuadratureResult I = integrate(g, grid);
  res.partials = I.partials;
  res.residual = I.finite ? I.value : kInf;
  res.verdict = I.finite ? Verdict::Pass : Verdict::Fail;
  std::ostringstream os;
  os.precision(6);
  os << "q = " << q;
  if (I.pole_exponent != 0.0) os << ", local exponent at 0 = " << I.pole_exponent;
  if (!I.finite)
    os << "; " << (I.note.empty() ? "divergent" : I.note);
  else
    os << "; tail " << to_string(I.tail_assessment.kind) << ", slope " << I.tail_assessment.slope;
  res.note = os.str();
  return res;
}

}  // namespace ihoc
