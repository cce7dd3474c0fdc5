// Property tests for the necessary-condition checks and the Arrow test.
#include <doctest.h>

#include <cmath>
#include <optional>

#include "ihoc/audit.hpp"
#include "ihoc/catalog.hpp"
#include "ihoc/error.hpp"
#include "ihoc/integrate.hpp"
#include "ihoc/pmp.hpp"
#include "ihoc/sufficiency.hpp"
#include "../oracles.hpp"

using namespace ihoc;

namespace {

Vec scalar(double v) {
  Vec x(1);
  x << v;
  return x;
}

}  // namespace

TEST_SUITE("property: pmp") {
  TEST_CASE("adjoint routes agree on [0, T/2] when (S) holds") {
    for (const std::string name : {"regulator", "log-investment", "log-decay", "weibull-nash"}) {
      ExampleEntry e = load_example(name);
      CandidateProcess c = e.candidate();
      NormalityResult s = check_normality(e.problem, c, 1e-3);
      if (!passing(s.record.verdict)) continue;
      AdjointSolution a = adjoint_representation(e.problem, c), b = adjoint_backward(e.problem, c, 1.0);
      CHECK_MESSAGE(adjoint_deviation(a, b, 0.5 * c.grid.T()) <= 1e-5, name);
    }
  }

  TEST_CASE("scaling (lambda0, p) by c scales the maximum-condition gap by c") {
    auto g = oracle::rng(31);
    for (const std::string name : {"regulator", "halkin-no-discount", "log-investment", "weibull-nash"}) {
      ExampleEntry e = load_example(name);
      CandidateProcess c = e.candidate(TimeGrid::standard(e.T, 256));
      for (int trial = 0; trial < 20; ++trial) {
        const double t = oracle::uniform(g, 0.05, 5.0), s = oracle::uniform(g, 0.1, 10.0);
        const Vec x = c.state_at(t), u = c.control_at(t);
        const bool log_inv = name == "log-investment";
        const Vec p = scalar(log_inv ? oracle::uniform(g, 0.6, 2.0) : oracle::uniform(g, -1.0, 1.0));
        auto inner = [&](const Vec& q, double l0) -> std::optional<InnerMax> {
          try {
            return maximize_H(t, x, q, l0, e.problem, u);
          } catch (const Error& err) {
            REQUIRE(err.kind() == ErrorKind::UnboundedAbove);
            return std::nullopt;
          }
        };
        const std::optional<InnerMax> m1 = inner(p, 1.0), m2 = inner(s * p, s);
        // boundedness of the sup is itself invariant under the scaling
        REQUIRE(m1.has_value() == m2.has_value());
        if (!m1) continue;
        const double gap1 = m1->value - pontryagin_H(t, x, u, p, 1.0, e.problem);
        const double gap2 = m2->value - pontryagin_H(t, x, u, s * p, s, e.problem);
        CHECK_MESSAGE(gap2 == doctest::Approx(s * gap1).epsilon(1e-6).scale(1e-9 * s), name << " t=" << t);
        CHECK(m2->u[0] == doctest::Approx(m1->u[0]).epsilon(1e-5).scale(1.0));
      }
    }
  }

  TEST_CASE("maximum-condition gap is never below -tol") {
    auto g = oracle::rng(32);
    for (const std::string& name : example_names()) {
      ExampleEntry e = load_example(name);
      CandidateProcess c = e.candidate(TimeGrid::standard(e.T, 256));
      for (int trial = 0; trial < 30; ++trial) {
        const double t = oracle::uniform(g, 0.01, 10.0);
        const Vec x = c.state_at(t) + scalar(0.05 * oracle::uniform(g, -1, 1) * std::abs(c.state_at(t)[0]));
        const Vec p = scalar(name == "log-investment" ? oracle::uniform(g, 0.5, 2.0) : oracle::uniform(g, -2, 2));
        Vec u = c.control_at(t);
        if (std::isfinite(e.problem.U.lo[0]) && std::isfinite(e.problem.U.hi[0]))
          u[0] = oracle::uniform(g, e.problem.U.lo[0], e.problem.U.hi[0] - (e.problem.U.hi_open[0] ? 1e-3 : 0.0));
        try {
          const double H = pontryagin_H(t, x, u, p, 1.0, e.problem);
          InnerMax m = maximize_H(t, x, p, 1.0, e.problem, u);
          CHECK_MESSAGE(m.value - H >= -1e-8 * (1.0 + std::abs(H)), name << " t=" << t);
        } catch (const Error& err) {
          CHECK_MESSAGE(err.kind() == ErrorKind::UnboundedAbove, name << ": " << err.what());
        }
      }
    }
  }

  TEST_CASE("certificate gap series is nonnegative up to tolerance") {
    for (const std::string name : {"regulator", "weibull-nash"}) {
      ExampleEntry e = load_example(name);
      CandidateProcess c = e.candidate();
      AdjointSolution adj = adjoint_closed_form(e.problem, c, e.closed.p, 1.0);
      ConditionRecord r = check_maximum_condition(e.problem, c, adj);
      for (double gap : r.series) CHECK(gap >= -1e-8);
    }
  }

}  // TEST_SUITE

TEST_SUITE("property: problem") {
  TEST_CASE("majorant verdict is monotone in gamma") {
    for (const std::string& name : example_names()) {
      ExampleEntry e = load_example(name);
      CandidateProcess c = e.candidate();
      const std::string key = e.mode == Mode::Strong ? "A2.majorant" : "B2.majorant";
      bool failed_larger = false;
      bool passed_larger = false;
      for (double scale : {2.0, 1.0, 0.5, 0.25}) {
        AssumptionReport r = audit_assumptions(e.problem, c, scale * e.gamma, e.mode);
        const bool pass = r.verdict(key) == Verdict::Pass;
        // once a larger tube passes, every smaller one must pass too
        if (passed_larger) CHECK_MESSAGE(pass, name << " gamma x" << scale);
        passed_larger = passed_larger || pass;
        failed_larger = failed_larger || !pass;
      }
      (void)failed_larger;
    }
  }

  TEST_CASE("active_indices never reports infeasibility on a feasible candidate") {
    auto g = oracle::rng(33);
    ExampleEntry e = load_example("regulator");
    CandidateProcess c = e.candidate(TimeGrid::standard(30.0, 512));
    for (int trial = 0; trial < 30; ++trial) {
      // g = x - b with b >= max x = 2 keeps the candidate feasible
      const double b = 2.0 + (trial % 3 == 0 ? 0.0 : oracle::uniform(g, 0.0, 3.0));
      ControlProblem p = parse_problem(e.source + "[constraints]\ng1 = x1 - " + format_double(b) + "\n");
      CHECK_NOTHROW(active_indices(p, c));
    }
  }

}  // TEST_SUITE

TEST_SUITE("property: sufficiency") {
  TEST_CASE("midpoint verdict matches the sign of the analytic second derivative") {
    // f = (k x^2 + u^2)/2 with x' = 2x + u: the sup over u is -omega k x^2/2 + (x-linear) + (x-free),
    // concave iff k > 0.
    ExampleEntry base = load_example("regulator");
    CandidateProcess c = base.candidate(TimeGrid::standard(20.0, 512));
    for (double k : {-1.0, -0.2, 0.3, 1.0, 2.0}) {
      ControlProblem p = parse_problem(
          "[problem]\nn = 1\nm = 1\nx0 = 2\n[dynamics]\nphi1 = 2*x1 + u1\n[objective]\n"
          "f = (" +
          format_double(k) +
          "*x1^2 + u1^2)/2\nomega = exp_decay 2\n"
          "[space]\nnu = exp_decay 4.5\n");
      AdjointSolution adj = adjoint_closed_form(p, c, base.closed.p, 1.0);
      ConcavityReport r = check_arrow(p, c, adj, 0.1, Mode::Strong, {}, 64);
      for (const ConcavitySlice& s : r.slices) {
        // beyond t ~ 10 the curvature exp(-2t) k falls below the relative tolerance
        if (std::exp(-2.0 * s.t) * std::abs(k) * 0.01 < 1e-7) continue;
        CHECK_MESSAGE((s.verdict == Verdict::Pass) == (k > 0), "k=" << k << " t=" << s.t);
      }
    }
  }

  TEST_CASE("adding an x-independent term to f leaves the verdict unchanged") {
    for (const std::string name : {"regulator", "log-investment", "log-decay"}) {
      ExampleEntry e = load_example(name);
      CandidateProcess c = e.candidate();
      // f + 0.3 sin(t) + 0.1 u^2 only shifts H by an x-free amount after the inner sup
      ControlProblem shifted = parse_problem([&] {
        std::string s = e.source;
        const std::size_t at = s.find("\nf = ") + 5;
        const std::size_t end = s.find('\n', at);
        return s.substr(0, at) + "(" + s.substr(at, end - at) + ") + 0.3*sin(t) + 2" + s.substr(end);
      }());
      AdjointSolution adj = adjoint_closed_form(e.problem, c, e.closed.p, 1.0);
      ConcavityReport a = check_arrow(e.problem, c, adj, e.gamma, e.mode, {}, 64);
      ConcavityReport b = check_arrow(shifted, c, adj, e.gamma, e.mode, {}, 64);
      CHECK_MESSAGE(a.overall == b.overall, name);
    }
  }

}  // TEST_SUITE
