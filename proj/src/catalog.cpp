#include "ihoc/catalog.hpp"

#include <algorithm>
#include <cmath>

#include "ihoc/error.hpp"
#include "ihoc/integrate.hpp"

namespace ihoc {

TimeGrid ExampleEntry::grid() const { return TimeGrid::standard(T, cells); }

CandidateProcess ExampleEntry::candidate() const { return candidate(grid()); }

CandidateProcess ExampleEntry::candidate(const TimeGrid& g) const {
  return CandidateProcess::from_closed_form(closed, g);
}

const std::vector<std::string>& example_names() {
  static const std::vector<std::string> names{
      "halkin-no-discount", "log-discount-pathology", "regulator", "log-investment", "log-decay", "weibull-nash"};
  return names;
}

namespace {

std::string num(double v) { return format_double(v); }

std::vector<Expression> exprs(std::initializer_list<std::string> texts) {
  std::vector<Expression> out;
  for (const auto& s : texts) out.push_back(Expression::parse(s));
  return out;
}

void apply(std::map<std::string, double>& params, const std::map<std::string, double>& overrides,
           const std::string& name) {
  for (const auto& [k, v] : overrides) {
    auto it = params.find(k);
    if (it == params.end())
      throw Error(ErrorKind::InvalidArgument, "example " + name + " has no parameter '" + k + "'");
    if (!std::isfinite(v)) throw Error(ErrorKind::InvalidArgument, "parameter '" + k + "' must be finite");
    it->second = v;
  }
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw Error(ErrorKind::InvalidArgument, msg);
}

ExampleEntry halkin(const std::map<std::string, double>& ov) {
  ExampleEntry e;
  e.name = "halkin-no-discount";
  e.description =
      "Minimize the integral of x with x' = -u x and no distribution function; the objective is not "
      "differentiable at the optimum and one of the natural transversality conditions fails for every "
      "multiplier.";
  e.params = {{"delta", 0.5}};
  apply(e.params, ov, e.name);
  const double d = e.params["delta"];
  require(d > 0.0 && d < 1.0, "delta must lie in (0, 1)");
  e.source =
      "[problem]\nname = halkin-no-discount\nn = 1\nm = 1\nx0 = 1\nsense = min\n"
      "[dynamics]\nphi1 = -u1*x1\n"
      "[objective]\nf = x1\nomega = expr(1)\n"
      "[space]\nnu = exp_decay 1\neta = expr(0.5*exp(-t))\n"
      "[controls]\nu1 = [" +
      num(d) + ", 1]\n";
  e.closed.x = exprs({"exp(-t)"});
  e.closed.u = exprs({"1"});
  e.closed.p = exprs({"-1"});
  e.mode = Mode::Weak;
  e.gamma = 0.5;
  e.T = 40.0;
  e.expectation = "pathological";
  e.expected_audit = Verdict::Fail;
  e.expected_gradient = Verdict::Fail;
  e.gradient_direction = exprs({"1"});
  e.expected = {{"adjoint_residual", Verdict::Pass},
                {"weak_inequality", Verdict::Pass},
                {"transversality_pairing", Verdict::Fail},
                {"transversality_decay", Verdict::Fail}};
  return e;
}

ExampleEntry log_discount(const std::map<std::string, double>& ov) {
  ExampleEntry e;
  e.name = "log-discount-pathology";
  e.description =
      "Minimize the discounted integral of ln x with x' = u - x; every trajectory keeps the objective "
      "finite, yet its derivative at the optimum diverges and the natural transversality conditions fail.";
  apply(e.params, ov, e.name);
  e.source =
      "[problem]\nname = log-discount-pathology\nn = 1\nm = 1\nx0 = 1\nsense = min\n"
      "[dynamics]\nphi1 = u1 - x1\n"
      "[objective]\nf = ln(x1)\nomega = exp_decay 1\n"
      "[space]\nnu = exp_decay 1\neta = expr(0.5*exp(-t))\n"
      "[controls]\nu1 = [0, 1]\n";
  e.closed.x = exprs({"exp(-t)"});
  e.closed.u = exprs({"0"});
  e.closed.p = exprs({"-1"});
  e.mode = Mode::Weak;
  e.gamma = 0.5;
  e.T = 40.0;
  e.expectation = "pathological";
  e.expected_audit = Verdict::Fail;
  e.expected_gradient = Verdict::Fail;
  e.gradient_direction = exprs({"1"});
  e.expected = {{"adjoint_residual", Verdict::Pass},
                {"weak_inequality", Verdict::Pass},
                {"transversality_pairing", Verdict::Fail},
                {"transversality_decay", Verdict::Fail}};
  return e;
}

ExampleEntry regulator(const std::map<std::string, double>& ov) {
  ExampleEntry e;
  e.name = "regulator";
  e.description =
      "Discounted linear-quadratic regulator x' = 2x + u with x(0) = 2 and weight nu = exp(-a t); "
      "the adjoint lies in the dual space exactly when a < 2(1 + sqrt 2).";
  e.params = {{"a", 4.5}};
  apply(e.params, ov, e.name);
  const double a = e.params["a"];
  require(a > 0.0, "a must be positive");
  e.source =
      "[problem]\nname = regulator\nn = 1\nm = 1\nx0 = 2\nsense = min\n"
      "[dynamics]\nphi1 = 2*x1 + u1\n"
      "[objective]\nf = 0.5*(x1^2 + u1^2)\nomega = exp_decay 2\n"
      "[space]\nnu = exp_decay " +
      num(a) + "\neta = expr(1)\n";
  e.closed.x = exprs({"2*exp((1 - sqrt(2))*t)"});
  e.closed.u = exprs({"-2*(1 + sqrt(2))*exp((1 - sqrt(2))*t)"});
  e.closed.p = exprs({"-2*(1 + sqrt(2))*exp(-(1 + sqrt(2))*t)"});
  e.mode = Mode::Strong;
  e.gamma = 0.1;
  e.T = 60.0;
  const bool inside = a < 2.0 * (1.0 + std::sqrt(2.0));
  e.expectation = inside ? "pass" : "fail";
  e.expected = {{"adjoint_residual", Verdict::Pass},
                {"integral_adjoint_residual", Verdict::Pass},
                {"maximum_condition", Verdict::Pass},
                {"weak_inequality", Verdict::Pass},
                {"transversality_pairing", inside ? Verdict::Pass : Verdict::Fail},
                {"transversality_decay", inside ? Verdict::Pass : Verdict::Fail},
                // omega^2 / nu = exp((a - 4) t) only vanishes for a < 4
                {"michel", a < 4.0 ? Verdict::Pass : Verdict::NotApplicable}};
  e.expected_arrow = Verdict::Pass;
  e.expected_gradient = Verdict::Pass;
  e.gradient_direction = exprs({"exp((1 - sqrt(2))*t)"});
  return e;
}

ExampleEntry log_investment(const std::map<std::string, double>& ov) {
  ExampleEntry e;
  e.name = "log-investment";
  e.description =
      "Maximize the discounted logarithm of consumption (1 - u) x with reinvestment x' = u x; the "
      "optimal saving rate is 1 - rho and the adjoint is exp(-t) / (rho x0).";
  e.params = {{"rho", 0.5}, {"x0", 1.0}};
  apply(e.params, ov, e.name);
  const double rho = e.params["rho"], x0 = e.params["x0"];
  require(rho > 0.0 && rho < 1.0, "rho must lie in (0, 1)");
  require(x0 > 0.0, "x0 must be positive");
  e.source = "[problem]\nname = log-investment\nn = 1\nm = 1\nx0 = " + num(x0) +
             "\nsense = max\n"
             "[dynamics]\nphi1 = u1*x1\n"
             "[objective]\nf = ln((1 - u1)*x1)\nomega = exp_decay " +
             num(rho) +
             "\n"
             "[space]\nnu = exp_decay " +
             num(2.0 - rho) +
             "\neta = expr(1)\n"
             "[controls]\nu1 = [0, 1)\n";
  e.closed.x = exprs({num(x0) + "*exp(" + num(1.0 - rho) + "*t)"});
  e.closed.u = exprs({num(1.0 - rho)});
  e.closed.p = exprs({"exp(-t)/" + num(rho * x0)});
  e.mode = Mode::Weak;
  e.gamma = 0.1;
  e.T = 60.0;
  // The state grows, so |(phi_x, phi_u)| = |(u, x)| has no uniform bound on the tube.
  e.expectation = "assumptions-violated";
  e.expected = {{"adjoint_residual", Verdict::Pass},
                {"integral_adjoint_residual", Verdict::Pass},
                {"maximum_condition", Verdict::NotApplicable},
                {"weak_inequality", Verdict::Pass},
                {"transversality_pairing", Verdict::Pass},
                {"transversality_decay", Verdict::Pass},
                {"michel", Verdict::NotApplicable},
                {"normality_representation", Verdict::Pass}};
  e.expected_audit = Verdict::Fail;
  e.expected_arrow = Verdict::Pass;
  e.expected_gradient = Verdict::Pass;
  e.gradient_direction = exprs({"1"});
  return e;
}

ExampleEntry log_decay(const std::map<std::string, double>& ov) {
  ExampleEntry e;
  e.name = "log-decay";
  e.description =
      "Minimize the discounted integral of ln x with x' = -u x; for rho <= 1 the objective gradient "
      "diverges, for rho > 1 the weak principle applies on a tube of radius C exp(-alpha t).";
  e.params = {{"rho", 2.0}, {"C", 0.5}, {"alpha", 1.0}};
  apply(e.params, ov, e.name);
  const double rho = e.params["rho"], C = e.params["C"], al = e.params["alpha"];
  require(rho > 0.0, "rho must be positive");
  require(C > 0.0 && C < 1.0, "C must lie in (0, 1)");
  require(al >= 1.0, "alpha must be at least 1");
  e.source =
      "[problem]\nname = log-decay\nn = 1\nm = 1\nx0 = 1\nsense = min\n"
      "[dynamics]\nphi1 = -u1*x1\n"
      "[objective]\nf = ln(x1)\nomega = exp_decay " +
      num(rho) +
      "\n"
      "[space]\nnu = exp_decay 1\neta = expr(" +
      num(C) + "*exp(-" + num(al) +
      "*t))\n"
      "[controls]\nu1 = [0, 1]\n";
  e.closed.x = exprs({"exp(-t)"});
  e.closed.u = exprs({"1"});
  e.closed.p = exprs({"-exp(" + num(1.0 - rho) + "*t)/" + num(rho)});
  e.mode = Mode::Weak;
  e.gamma = 0.5;
  e.T = 40.0;
  e.gradient_direction = exprs({"1"});
  if (rho > 1.0) {
    e.expectation = "pass";
    e.expected = {{"adjoint_residual", Verdict::Pass},
                  {"integral_adjoint_residual", Verdict::Pass},
                  {"maximum_condition", Verdict::NotApplicable},
                  {"weak_inequality", Verdict::Pass},
                  {"transversality_pairing", Verdict::Pass},
                  {"transversality_decay", Verdict::Pass},
                  {"michel", Verdict::Pass},
                  {"normality_representation", Verdict::Pass}};
    e.expected_gradient = Verdict::Pass;
    // H = -omega ln x - p x is convex in x: the Arrow condition does not certify this optimum.
    e.expected_arrow = Verdict::Fail;
  } else {
    e.expectation = "pathological";
    e.expected = {{"adjoint_residual", Verdict::Pass},
                  {"transversality_pairing", Verdict::Fail},
                  {"transversality_decay", Verdict::Fail}};
    e.expected_audit = Verdict::Fail;
    e.expected_gradient = Verdict::Fail;
  }
  return e;
}

ExampleEntry weibull_nash(const std::map<std::string, double>& ov) {
  ExampleEntry e;
  e.name = "weibull-nash";
  e.description =
      "Two-player harvesting game with Gompertz growth x' = x(alpha - r ln x) - (u1 + u2) x and Weibull "
      "(k = 1/2) discounting; player i receives price u_i / (u1 + u2) - c_i u_i and is checked with the "
      "opponent frozen at the equilibrium.";
  e.params = {{"alpha", 1.0}, {"c1", 1.0}, {"c2", 1.0}, {"p", 1.0}, {"r", 1.0}, {"x0", 1.0}, {"player", 1.0}};
  apply(e.params, ov, e.name);
  const double al = e.params["alpha"], c1 = e.params["c1"], c2 = e.params["c2"], price = e.params["p"],
               r = e.params["r"], x0 = e.params["x0"];
  const int player = static_cast<int>(e.params["player"]);
  require(al > 0.0 && c1 > 0.0 && c2 > 0.0 && price > 0.0 && r > 0.0 && x0 > 0.0, "parameters must be positive");
  require(al > 1.0 / (c1 + c2), "alpha must exceed 1/(c1 + c2)");
  require(player == 1 || player == 2, "player must be 1 or 2");
  const double s = (c1 + c2) * (c1 + c2);
  const double ci = player == 1 ? c1 : c2, cj = player == 1 ? c2 : c1;
  const double own = price * cj / s, other = price * ci / s;
  const double c0 = (al - price / (c1 + c2)) / r, z0 = std::log(x0);
  e.source = "[problem]\nname = weibull-nash\nn = 1\nm = 1\nx0 = " + num(x0) +
             "\nsense = max\n"
             "[dynamics]\nphi1 = x1*(" +
             num(al) + " - " + num(r) + "*ln(x1)) - (u1 + " + num(other) +
             ")*x1\n"
             "[objective]\nf = " +
             num(price) + "*u1/(u1 + " + num(other) + ") - " + num(ci) +
             "*u1\n"
             "omega = weibull 0.5\n"
             "[space]\nnu = power 2\n"
             "[controls]\nu1 = [0, inf)\n";
  e.closed.x = exprs({"exp(" + num(z0 - c0) + "*exp(-" + num(r) + "*t) + " + num(c0) + ")"});
  e.closed.u = exprs({num(own)});
  e.closed.p = exprs({"0"});
  e.mode = Mode::Strong;
  e.gamma = 0.1;
  e.T = 400.0;
  e.expectation = "pass";
  e.expected = {{"adjoint_residual", Verdict::Pass},
                {"integral_adjoint_residual", Verdict::Pass},
                {"maximum_condition", Verdict::Pass},
                {"weak_inequality", Verdict::Pass},
                {"transversality_pairing", Verdict::Pass},
                {"transversality_decay", Verdict::Pass},
                {"michel", Verdict::Pass},
                {"normality_representation", Verdict::Pass}};
  e.expected_gradient = Verdict::Pass;
  e.gradient_direction = exprs({"1"});
  return e;
}

}  // namespace

ExampleEntry load_example(const std::string& name, const std::map<std::string, double>& overrides) {
  ExampleEntry e;
  if (name == "halkin-no-discount")
    e = halkin(overrides);
  else if (name == "log-discount-pathology")
    e = log_discount(overrides);
  else if (name == "regulator")
    e = regulator(overrides);
  else if (name == "log-investment")
    e = log_investment(overrides);
  else if (name == "log-decay")
    e = log_decay(overrides);
  else if (name == "weibull-nash")
    e = weibull_nash(overrides);
  else
    throw Error(ErrorKind::InvalidArgument, "unknown example '" + name + "'");
  e.problem = parse_problem(e.source);
  CandidateProcess c = e.candidate();
  // Residual per cell relative to the state size, so growing states are judged fairly.
  std::vector<double> r = state_residuals(e.problem, c);
  e.self_check = 0.0;
  for (std::size_t k = 0; k < r.size(); ++k)
    e.self_check = std::max(e.self_check, r[k] / std::max(1.0, c.x[k + 1].norm()));
  if (!(e.self_check < 1e-8))
    throw Error(ErrorKind::InvalidArgument,
                "closed form of " + name + " violates the state equation by " + format_double(e.self_check));
  return e;
}

std::vector<ExampleEntry> list_examples() {
  std::vector<ExampleEntry> out;
  for (const auto& n : example_names()) out.push_back(load_example(n));
  return out;
}

}  // namespace ihoc
