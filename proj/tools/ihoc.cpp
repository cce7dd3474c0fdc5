// Command-line front end: audits, certificates, state solves, needle demos and
// the built-in example catalog.
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ihoc/audit.hpp"
#include "ihoc/catalog.hpp"
#include "ihoc/error.hpp"
#include "ihoc/integrate.hpp"
#include "ihoc/needle.hpp"
#include "ihoc/pmp.hpp"
#include "ihoc/sufficiency.hpp"

namespace fs = std::filesystem;
using namespace ihoc;

namespace {

struct RunConfig {
  std::string command;
  std::string example;
  std::string problem_path;
  std::string mode_text;
  std::optional<double> gamma;
  std::vector<std::string> tol_overrides;
  std::optional<double> tmax;
  std::optional<std::size_t> grid_cells;
  std::optional<double> lambda0;
  std::string out = ".";
  std::optional<double> rho;
  std::vector<std::string> params;
  std::vector<std::string> controls;
  std::vector<std::string> adjoint;
  // needle
  std::vector<double> interval{0.0, 1.0};
  int m = 2;
  int N = 64;
  double alpha = 0.25;
  double delta = 0.05;
};

Tolerances parse_tolerances(const std::vector<std::string>& items) {
  Tolerances tol;
  std::map<std::string, double*> fields{{"activity", &tol.activity},
                                        {"limit", &tol.limit},
                                        {"adjoint_residual", &tol.adjoint_residual},
                                        {"maximum", &tol.maximum},
                                        {"weak_inequality", &tol.weak_inequality},
                                        {"route_agreement", &tol.route_agreement},
                                        {"concavity", &tol.concavity},
                                        {"gradient", &tol.gradient},
                                        {"ill_conditioned", &tol.ill_conditioned}};
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorKind::InvalidArgument, "--tol expects NAME=VALUE, got '" + item + "'");
    auto it = fields.find(item.substr(0, eq));
    if (it == fields.end()) throw Error(ErrorKind::InvalidArgument, "unknown tolerance '" + item.substr(0, eq) + "'");
    *it->second = std::stod(item.substr(eq + 1));
  }
  return tol;
}

std::map<std::string, double> parse_params(const RunConfig& cfg) {
  std::map<std::string, double> out;
  for (const auto& item : cfg.params) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::InvalidArgument, "--param expects NAME=VALUE");
    out[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
  }
  if (cfg.rho) out["rho"] = *cfg.rho;
  return out;
}

std::string tolerance_block(const Tolerances& t) {
  std::ostringstream os;
  os << "tolerances\n"
     << "  activity: " << format_double(t.activity) << "\n"
     << "  limit: " << format_double(t.limit) << "\n"
     << "  adjoint_residual: " << format_double(t.adjoint_residual) << "\n"
     << "  maximum: " << format_double(t.maximum) << "\n"
     << "  weak_inequality: " << format_double(t.weak_inequality) << "\n"
     << "  route_agreement: " << format_double(t.route_agreement) << "\n"
     << "  concavity: " << format_double(t.concavity) << "\n"
     << "  gradient: " << format_double(t.gradient) << "\n"
     << "  ill_conditioned: " << format_double(t.ill_conditioned) << "\n";
  return os.str();
}

// Everything a run works on: the problem, its candidate and the settings.
struct Setup {
  ControlProblem prob;
  std::optional<ExampleEntry> entry;
  CandidateProcess cand;
  TimeGrid grid;
  Mode mode = Mode::Strong;
  double gamma = 0.1;
  Tolerances tol;
  std::vector<Expression> closed_adjoint;
  std::string source_label;
};

std::string read_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorKind::IoError, "cannot read " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

Setup make_setup(const RunConfig& cfg) {
  Setup s;
  s.tol = parse_tolerances(cfg.tol_overrides);
  if (!cfg.example.empty() == !cfg.problem_path.empty())
    throw Error(ErrorKind::InvalidArgument, "give exactly one of --example and --problem");
  double T = 60.0;
  std::size_t cells = 4096;
  if (!cfg.example.empty()) {
    s.entry = load_example(cfg.example, parse_params(cfg));
    s.prob = s.entry->problem;
    s.mode = s.entry->mode;
    s.gamma = s.entry->gamma;
    T = s.entry->T;
    cells = s.entry->cells;
    s.closed_adjoint = s.entry->closed.p;
    s.source_label = "example " + cfg.example;
  } else {
    s.prob = parse_problem(read_file(cfg.problem_path));
    s.source_label = "problem " + cfg.problem_path;
  }
  if (cfg.mode_text == "strong")
    s.mode = Mode::Strong;
  else if (cfg.mode_text == "weak")
    s.mode = Mode::Weak;
  else if (!cfg.mode_text.empty())
    throw Error(ErrorKind::InvalidArgument, "--mode must be strong or weak");
  // problem files carry no tube radius; examples store theirs
  if (!s.entry && !cfg.gamma && cfg.command != "solve")
    throw Error(ErrorKind::InvalidArgument, "--gamma is required with --problem");
  if (cfg.gamma) s.gamma = *cfg.gamma;
  if (cfg.tmax) T = *cfg.tmax;
  if (cfg.grid_cells) cells = *cfg.grid_cells;
  s.grid = TimeGrid::standard(T, cells);

  if (s.entry && cfg.controls.empty()) {
    s.cand = s.entry->candidate(s.grid);
  } else {
    if (static_cast<int>(cfg.controls.size()) != s.prob.m)
      throw Error(ErrorKind::DimensionMismatch,
                  "--control must be given once per control component (m = " + std::to_string(s.prob.m) + ")");
    std::vector<Expression> u;
    for (const auto& c : cfg.controls) u.push_back(Expression::parse(c));
    s.cand = solve_state(s.prob, u, s.prob.x0, s.grid);
  }
  if (!cfg.adjoint.empty()) {
    s.closed_adjoint.clear();
    for (const auto& a : cfg.adjoint) s.closed_adjoint.push_back(Expression::parse(a));
  }
  return s;
}

std::string header(const RunConfig& cfg, const Setup& s) {
  std::ostringstream os;
  os << "ihoc " << IHOC_VERSION << "\n\n";
  os << "config\n";
  os << "  command: " << cfg.command << "\n";
  os << "  source: " << s.source_label << "\n";
  if (s.entry)
    for (const auto& [k, v] : s.entry->params) os << "  param " << k << ": " << format_double(v) << "\n";
  os << "  mode: " << to_string(s.mode) << "\n";
  os << "  gamma: " << format_double(s.gamma) << "\n";
  os << "  lambda0: " << (cfg.lambda0 ? format_double(*cfg.lambda0) : std::string("auto")) << "\n";
  os << "  out: " << cfg.out << "\n\n";
  os << "grid\n";
  os << "  T: " << format_double(s.grid.T()) << "\n";
  os << "  cells: " << s.grid.cells() << "\n";
  os << "  first cell: " << format_double(s.grid.width(0)) << "\n";
  os << "  largest cell: " << format_double(s.grid.width(s.grid.cells() - 1)) << "\n\n";
  os << tolerance_block(s.tol) << "\n";
  return os.str();
}

std::string format_audit(const AssumptionReport& a) {
  std::ostringstream os;
  os << "assumptions (" << to_string(a.mode) << ", gamma " << format_double(a.gamma) << ")\n";
  for (const auto& [key, v] : a.verdicts) {
    os << "  " << key << ": " << to_string(v.verdict);
    if (!v.note.empty()) os << " (" << v.note << ")";
    os << "\n";
    for (const auto& w : v.witnesses) {
      os << "    witness t=" << format_double(w.t) << " value=" << format_double(w.value);
      if (!w.note.empty()) os << " " << w.note;
      os << "\n";
    }
  }
  os << "  satisfied: " << (a.satisfied() ? "yes" : "no") << "\n";
  return os.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  os << text;
}

void write_trajectory(const fs::path& path, const CandidateProcess& c, const AdjointSolution* adj) {
  std::vector<std::string> names;
  for (int i = 0; i < c.n(); ++i) names.push_back("x" + std::to_string(i + 1));
  for (int j = 0; j < c.m(); ++j) names.push_back("u" + std::to_string(j + 1));
  if (adj)
    for (int i = 0; i < c.n(); ++i) names.push_back("p" + std::to_string(i + 1));
  std::vector<Vec> rows;
  for (std::size_t k = 0; k < c.grid.size(); ++k) {
    Vec r(static_cast<int>(names.size()));
    int o = 0;
    for (int i = 0; i < c.n(); ++i) r[o++] = c.x[k][i];
    for (int j = 0; j < c.m(); ++j) r[o++] = c.u[k][j];
    if (adj)
      for (int i = 0; i < c.n(); ++i) r[o++] = adj->p[k][i];
    rows.push_back(r);
  }
  write_series_csv(path.string(), names, c.grid, rows);
}

// Does the run reproduce the example's stored expectation?
bool matches_expectation(const ExampleEntry& e, const CertificateReport& r, std::string& why) {
  bool ok = true;
  const bool audit_ok = r.audit.satisfied();
  if (e.expectation == "pass")
    ok = r.status == "pass";
  else if (e.expectation == "fail")
    ok = audit_ok && r.overall == Verdict::Fail;
  else if (e.expectation == "assumptions-violated")
    ok = r.status == "assumptions-violated";
  else if (e.expectation == "pathological")
    ok = !audit_ok &&
         (r.verdict("transversality_decay") == Verdict::Fail || r.verdict("transversality_pairing") == Verdict::Fail);
  if (!ok) why += "status " + r.status + " does not match expectation " + e.expectation + "; ";
  for (const auto& [name, v] : e.expected)
    if (r.verdict(name) != v) {
      ok = false;
      why += name + " is " + to_string(r.verdict(name)) + ", expected " + to_string(v) + "; ";
    }
  return ok;
}

int run_audit(const RunConfig& cfg) {
  Setup s = make_setup(cfg);
  fs::create_directories(cfg.out);
  AssumptionReport a = audit_assumptions(s.prob, s.cand, s.gamma, s.mode, 32, s.tol);
  std::string text = header(cfg, s) + format_audit(a);
  if (s.entry && !s.entry->gradient_direction.empty()) {
    const auto& dir = s.entry->gradient_direction;
    GradientDiagnostic g = check_objective_gradient(s.prob, s.cand, [&](double t) { return ClosedForm::eval(dir, t); });
    text += "\nobjective gradient\n  verdict: " + std::string(g.verdict == Verdict::Pass ? "finite" : "divergent") +
            "\n  value: " + format_double(g.value) + "\n  note: " + g.note + "\n";
  }
  write_text(fs::path(cfg.out) / "report.txt", text);
  std::cout << text;
  return 0;
}

int run_verify(const RunConfig& cfg) {
  Setup s = make_setup(cfg);
  fs::create_directories(cfg.out);
  CertificateOptions opt;
  opt.gamma = s.gamma;
  opt.tol = s.tol;
  opt.closed_adjoint = s.closed_adjoint;
  if (cfg.lambda0) {
    opt.lambda0 = *cfg.lambda0;
    opt.lambda0_given = true;
  }
  CertificateReport r = verify_certificate(s.prob, s.cand, s.mode, opt);
  std::string text = header(cfg, s) + format_audit(r.audit) + "\n" + format_certificate(r);

  const AdjointSolution* adj = r.primary();
  if (adj && r.lambda0 == 1.0) {
    try {
      ConcavityReport c = check_arrow(s.prob, s.cand, *adj, s.gamma, s.mode, s.tol);
      text += "\n" + format_concavity(c);
    } catch (const Error& e) {
      text += std::string("\nsufficiency\n  not evaluated: ") + e.what() + "\n";
    }
  }

  // Sensitivity of the tube-dependent verdicts to gamma.
  text += "\ngamma sensitivity\n";
  for (double g : {0.5 * s.gamma, s.gamma, 2.0 * s.gamma}) {
    text += "  gamma " + format_double(g) + ": ";
    try {
      AssumptionReport a = audit_assumptions(s.prob, s.cand, g, s.mode, 32, s.tol);
      text += std::string("assumptions ") + (a.satisfied() ? "satisfied" : "violated");
      if (adj && r.lambda0 == 1.0) {
        ConcavityReport c = check_arrow(s.prob, s.cand, *adj, g, s.mode, s.tol, 128);
        text += std::string(", concavity ") + to_string(c.overall);
      }
    } catch (const Error& e) {
      text += e.what();
    }
    text += "\n";
  }

  int code = 0;
  if (s.entry) {
    std::string why;
    const bool ok = matches_expectation(*s.entry, r, why);
    text += "\nexpectation: " + s.entry->expectation + "\nmatches: " + (ok ? "yes" : "no (" + why + ")") + "\n";
    code = ok ? 0 : 1;
  }
  write_text(fs::path(cfg.out) / "report.txt", text);
  write_certificate_csv((fs::path(cfg.out) / "certificate.csv").string(), r, s.grid);
  write_trajectory(fs::path(cfg.out) / "trajectory.csv", s.cand, adj);
  std::cout << text;
  return code;
}

int run_solve(const RunConfig& cfg) {
  Setup s = make_setup(cfg);
  fs::create_directories(cfg.out);
  std::vector<double> res = state_residuals(s.prob, s.cand);
  double worst = 0.0;
  for (double v : res) worst = std::max(worst, v);
  std::string text = header(cfg, s) + "state\n  x(T): " + format_double(s.cand.x.back()[0]) +
                     "\n  max cell residual: " + format_double(worst) + "\n";
  write_text(fs::path(cfg.out) / "report.txt", text);
  write_trajectory(fs::path(cfg.out) / "trajectory.csv", s.cand, nullptr);
  std::cout << text;
  return 0;
}

int run_needle(const RunConfig& cfg) {
  if (cfg.interval.size() != 2) throw Error(ErrorKind::InvalidInterval, "--interval takes two numbers");
  fs::create_directories(cfg.out);
  NeedleFamily fam = build_family(cfg.interval[0], cfg.interval[1], cfg.m, cfg.N);
  NeedleFamily fine = build_family(cfg.interval[0], cfg.interval[1], cfg.m, 2 * cfg.N);
  check_alpha(fam, cfg.alpha);
  std::ostringstream os;
  os << "ihoc " << IHOC_VERSION << "\n\nconfig\n  command: needle\n  interval: [" << format_double(fam.t0) << ", "
     << format_double(fam.t1) << "]\n  m: " << fam.m << "\n  N: " << fam.N << "\n  alpha: " << format_double(cfg.alpha)
     << "\n  delta: " << format_double(cfg.delta) << "\n\nfamily\n";
  for (int i = 0; i < fam.m; ++i)
    os << "  |M" << i + 1 << "(alpha)| = " << format_double(fam.measure(i, cfg.alpha))
       << " (alpha (t1 - t0) = " << format_double(cfg.alpha * (fam.t1 - fam.t0)) << ")\n";
  os << "\nestimate (alpha' = 0, set 1)\n";
  const std::vector<std::pair<std::string, std::function<double(double)>>> ys{
      {"1", [](double) { return 1.0; }},
      {"t", [](double t) { return t; }},
      {"sin t", [](double t) { return std::sin(t); }},
  };
  for (const auto& [label, y] : ys) {
    EstimateRecord a = verify_estimate(fam, 0, y, cfg.alpha, 0.0, cfg.delta);
    EstimateRecord b = verify_estimate(fine, 0, y, cfg.alpha, 0.0, cfg.delta);
    os << "  y = " << label << ": " << to_string(a.verdict) << ", delta_emp(N) = " << format_double(a.delta_emp)
       << ", delta_emp(2N) = " << format_double(b.delta_emp) << ", ratio = " << format_double(a.delta_emp / b.delta_emp)
       << "\n";
  }
  std::vector<double> alphas(fam.m, cfg.alpha);
  write_family_csv((fs::path(cfg.out) / "family.csv").string(), fam, alphas);
  write_text(fs::path(cfg.out) / "report.txt", os.str());
  std::cout << os.str();
  return 0;
}

int run_examples(const RunConfig&) {
  for (const ExampleEntry& e : list_examples()) {
    std::cout << e.name << "\n  " << e.description << "\n  mode: " << to_string(e.mode)
              << "\n  expectation: " << e.expectation << "\n";
    if (!e.params.empty()) {
      std::cout << "  parameters:";
      for (const auto& [k, v] : e.params) std::cout << " " << k << "=" << format_double(v);
      std::cout << "\n";
    }
  }
  return 0;
}

void add_common(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--example", cfg.example, "Built-in example name");
  sub->add_option("--problem", cfg.problem_path, "Problem file");
  sub->add_option("--mode", cfg.mode_text, "strong or weak")->check(CLI::IsMember({"strong", "weak"}));
  sub->add_option("--gamma", cfg.gamma, "Tube radius");
  sub->add_option("--tol", cfg.tol_overrides, "Tolerance override NAME=VALUE (repeatable)");
  sub->add_option("--tmax", cfg.tmax, "Horizon of the computational grid");
  sub->add_option("--grid-cells", cfg.grid_cells, "Number of grid cells");
  sub->add_option("--lambda0", cfg.lambda0, "Multiplier of the objective");
  sub->add_option("--out", cfg.out, "Output directory");
  sub->add_option("--rho", cfg.rho, "Discount parameter of the log examples");
  sub->add_option("--param", cfg.params, "Example parameter NAME=VALUE (repeatable)");
  sub->add_option("--control", cfg.controls, "Control component as an expression of t (repeatable)");
  sub->add_option("--adjoint", cfg.adjoint, "Closed-form adjoint component used as an oracle (repeatable)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical verification of infinite-horizon optimality conditions"};
  app.require_subcommand(1, 1);
  RunConfig cfg;
  CLI::App* audit = app.add_subcommand("audit", "Check the standing assumptions along a candidate");
  CLI::App* verify = app.add_subcommand("verify", "Run the necessary-condition certificate and the Arrow test");
  CLI::App* solve = app.add_subcommand("solve", "Integrate the state for a given control");
  CLI::App* needle = app.add_subcommand("needle", "Build a needle set family and check its estimates");
  CLI::App* examples = app.add_subcommand("examples", "List the built-in examples");
  for (CLI::App* sub : {audit, verify, solve}) add_common(sub, cfg);
  needle->add_option("--interval", cfg.interval, "t0 t1")->expected(2);
  needle->add_option("--m", cfg.m, "Number of sets");
  needle->add_option("--N", cfg.N, "Number of subintervals");
  needle->add_option("--alpha", cfg.alpha, "Set parameter in [0, 1/m]");
  needle->add_option("--delta", cfg.delta, "Target constant of the approximation estimate");
  needle->add_option("--out", cfg.out, "Output directory");
  CLI11_PARSE(app, argc, argv);

  try {
    if (audit->parsed()) return cfg.command = "audit", run_audit(cfg);
    if (verify->parsed()) return cfg.command = "verify", run_verify(cfg);
    if (solve->parsed()) return cfg.command = "solve", run_solve(cfg);
    if (needle->parsed()) return cfg.command = "needle", run_needle(cfg);
    if (examples->parsed()) return cfg.command = "examples", run_examples(cfg);
  } catch (const SyntaxError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
