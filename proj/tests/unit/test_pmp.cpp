#include <doctest.h>

#include <cmath>

#include "ihoc/catalog.hpp"
#include "ihoc/error.hpp"
#include "ihoc/integrate.hpp"
#include "ihoc/pmp.hpp"
#include "../oracles.hpp"

using namespace ihoc;

namespace {

Vec scalar(double v) {
  Vec x(1);
  x << v;
  return x;
}

struct Regulator {
  ExampleEntry e;
  CandidateProcess c;
  explicit Regulator(double a = 4.5, double T = 60.0, std::size_t cells = 4096)
      : e(load_example("regulator", {{"a", a}})), c(e.candidate(TimeGrid::standard(T, cells))) {}
  AdjointSolution closed() const { return adjoint_closed_form(e.problem, c, e.closed.p, 1.0); }
};

double sup_rel_error(const AdjointSolution& adj, double t_max, double (*p)(double)) {
  double worst = 0.0, scale = 0.0;
  for (std::size_t k = 0; k < adj.grid.size() && adj.grid[k] <= t_max; ++k) {
    worst = std::max(worst, std::abs(adj.p[k][0] - p(adj.grid[k])));
    scale = std::max(scale, std::abs(p(adj.grid[k])));
  }
  return worst / scale;
}

// x' = -x + u, f = u^2: f_x = 0 so the adjoint of u = 0 is zero.
ControlProblem no_state_cost() {
  return parse_problem(
      "[problem]\nn = 1\nm = 1\nx0 = 1\n[dynamics]\nphi1 = -x1 + u1\n[objective]\nf = u1^2\n"
      "omega = exp_decay 1\n[space]\nnu = exp_decay 1\n");
}

}  // namespace

TEST_SUITE("pmp") {
  TEST_CASE("Pontryagin function at the regulator's initial point") {
    Regulator r;
    const double a = -2.0 * (1.0 + oracle::sqrt2);
    const double H = pontryagin_H(0.0, scalar(2.0), scalar(a), scalar(a), 1.0, r.e.problem);
    CHECK(H == doctest::Approx(-4.0 - 4.0 * oracle::sqrt2).epsilon(1e-14));
    CHECK(H == doctest::Approx(oracle::regulator::H(0.0)).epsilon(1e-14));
    CHECK(pontryagin_H(1.0, scalar(2.0), scalar(a), scalar(0.0), 0.0, r.e.problem) == 0.0);
    // lambda0 = 0 leaves <p, phi>
    CHECK(pontryagin_H(1.0, scalar(2.0), scalar(3.0), scalar(0.5), 0.0, r.e.problem) == doctest::Approx(0.5 * 7.0));
  }

  TEST_CASE("H_x and H_u against central differences") {
    for (const std::string& name : example_names()) {
      ExampleEntry e = load_example(name);
      CandidateProcess c = e.candidate(TimeGrid::standard(e.T, 256));
      auto g = oracle::rng(3);
      for (int k = 0; k < 20; ++k) {
        const double t = oracle::uniform(g, 0.1, 5.0);
        const Vec x = c.state_at(t), u = c.control_at(t);
        const Vec p = scalar(oracle::uniform(g, -2, 2));
        const Vec Hx = pontryagin_H_x(t, x, u, p, 1.0, e.problem), Hu = pontryagin_H_u(t, x, u, p, 1.0, e.problem);
        const double hx = 1e-6 * std::max(1.0, std::abs(x[0])), hu = 1e-6 * std::max(1.0, std::abs(u[0]));
        const double fdx = (pontryagin_H(t, x + scalar(hx), u, p, 1.0, e.problem) -
                            pontryagin_H(t, x - scalar(hx), u, p, 1.0, e.problem)) /
                           (2 * hx);
        double lo = u[0] - hu, hi = u[0] + hu;
        if (e.problem.U.hi[0] < hi) hi = u[0];
        if (e.problem.U.lo[0] > lo) lo = u[0];
        const double fdu =
            (pontryagin_H(t, x, scalar(hi), p, 1.0, e.problem) - pontryagin_H(t, x, scalar(lo), p, 1.0, e.problem)) /
            (hi - lo);
        CHECK_MESSAGE(Hx[0] == doctest::Approx(fdx).epsilon(1e-6).scale(1.0), name);
        CHECK_MESSAGE(Hu[0] == doctest::Approx(fdu).epsilon(1e-5).scale(1.0), name);
      }
    }
  }

  TEST_CASE("backward route reproduces the regulator adjoint") {
    Regulator r(4.5, 30.0, 4096);
    AdjointSolution b = adjoint_backward(r.e.problem, r.c, 1.0);
    CHECK(b.route == AdjointRoute::BackwardOde);
    CHECK(b.p[0][0] == doctest::Approx(-2.0 * (1.0 + oracle::sqrt2)).epsilon(1e-5));
    CHECK(sup_rel_error(b, 10.0, oracle::regulator::p) < 1e-5);
    CHECK(b.reliable_horizon == doctest::Approx(15.0));
  }

  TEST_CASE("backward route for log-investment gives p(0) = 1/(rho x0)") {
    ExampleEntry e = load_example("log-investment");
    CandidateProcess c = e.candidate();
    AdjointSolution b = adjoint_backward(e.problem, c, 1.0);
    CHECK(b.p[0][0] == doctest::Approx(2.0).epsilon(1e-5));
  }

  TEST_CASE("no state cost gives a zero adjoint on both routes") {
    ControlProblem p = no_state_cost();
    TimeGrid g = TimeGrid::standard(30.0, 512);
    CandidateProcess c = solve_state(p, std::vector<Vec>(g.size(), scalar(0.0)), p.x0, g);
    AdjointSolution b = adjoint_backward(p, c, 1.0);
    AdjointSolution r = adjoint_representation(p, c);
    CHECK(b.max_norm() == 0.0);
    CHECK(r.max_norm() == 0.0);
    CHECK_FALSE(b.trivial());  // lambda0 = 1
  }

  TEST_CASE("representation route reproduces the regulator adjoint") {
    Regulator r;
    AdjointSolution a = adjoint_representation(r.e.problem, r.c);
    CHECK(a.route == AdjointRoute::Representation);
    CHECK(a.lambda0 == 1.0);
    CHECK(sup_rel_error(a, 10.0, oracle::regulator::p) < 1e-6);
    // interpolation between knots
    CHECK(a.at(1.2345)[0] == doctest::Approx(oracle::regulator::p(1.2345)).epsilon(1e-7));
  }

  TEST_CASE("representation route for the Nash game gives p = 0") {
    ExampleEntry e = load_example("weibull-nash");
    AdjointSolution a = adjoint_representation(e.problem, e.candidate());
    CHECK(a.max_norm() <= 1e-6);
  }

  TEST_CASE("adjoint residual") {
    Regulator r;
    AdjointSolution cf = r.closed();
    ConditionRecord ok = check_adjoint_residual(r.e.problem, r.c, cf);
    CHECK(ok.name == "adjoint_residual");
    CHECK(ok.verdict == Verdict::Pass);
    CHECK(ok.residual < 1e-6);
    CHECK(ok.series.size() == r.c.grid.size());

    SUBCASE("a constant shift is detected") {
      AdjointSolution bad = cf;
      bad.closed.clear();
      for (Vec& v : bad.p) v[0] += 0.01;
      ConditionRecord rec = check_adjoint_residual(r.e.problem, r.c, bad);
      CHECK(rec.verdict == Verdict::Fail);
      REQUIRE_FALSE(rec.witnesses.empty());
      // a shift c violates p' = -2p + omega x by 2c
      CHECK(rec.residual == doctest::Approx(0.02 / (2.0 * (1.0 + oracle::sqrt2))).epsilon(0.05));
    }
    SUBCASE("trivial multipliers are flagged") {
      AdjointSolution zero = cf;
      zero.closed.clear();
      zero.lambda0 = 0.0;
      for (Vec& v : zero.p) v.setZero();
      for (Vec& v : zero.pdot) v.setZero();
      CHECK(zero.trivial());
      ConditionRecord rec = check_adjoint_residual(r.e.problem, r.c, zero);
      CHECK(rec.residual == 0.0);
      CHECK(rec.verdict == Verdict::Fail);
      CHECK(rec.note.find("trivial") != std::string::npos);
    }
  }

  TEST_CASE("integral adjoint residual") {
    Regulator r;
    AdjointSolution cf = r.closed();
    ConditionRecord integral = check_integral_adjoint(r.e.problem, r.c, cf);
    CHECK(integral.verdict == Verdict::Pass);
    CHECK(integral.residual < 1e-8);

    SUBCASE("inactive constraint without atoms changes nothing") {
      ControlProblem p = parse_problem(r.e.source + "[constraints]\ng1 = x1 - 5\n");
      ConditionRecord rec = check_integral_adjoint(p, r.c, cf);
      CHECK(rec.residual == integral.residual);
    }
    SUBCASE("atom at t = 0 on an active constraint") {
      ControlProblem p = parse_problem(r.e.source + "[constraints]\ng1 = x1 - 2\n");
      const double mass = 0.3;
      AdjointSolution adj = cf;
      // p(0) = p(0+) - nu(0) g_x mass with nu(0) = g_x = 1
      adj.p[0][0] -= mass;
      adj.measures = {{Atom{0.0, mass}}};
      CHECK(check_integral_adjoint(p, r.c, adj).verdict == Verdict::Pass);
      adj.measures = {{Atom{0.0, 2.0 * mass}}};
      ConditionRecord wrong = check_integral_adjoint(p, r.c, adj);
      CHECK(wrong.verdict == Verdict::Fail);
      CHECK(wrong.residual == doctest::Approx(mass / (2.0 * (1.0 + oracle::sqrt2) + mass)).epsilon(1e-6));
    }
    SUBCASE("atoms off the active set or with negative mass are rejected") {
      ControlProblem p = parse_problem(r.e.source + "[constraints]\ng1 = x1 - 2\n");
      AdjointSolution adj = cf;
      adj.measures = {{Atom{5.0, 1.0}}};
      try {
        check_integral_adjoint(p, r.c, adj);
        FAIL("expected AtomOffActiveSet");
      } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::AtomOffActiveSet);
      }
      adj.measures = {{Atom{0.0, -1.0}}};
      try {
        check_integral_adjoint(p, r.c, adj);
        FAIL("expected InvalidMeasure");
      } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InvalidMeasure);
      }
    }
  }

  TEST_CASE("maximum condition") {
    Regulator r;
    AdjointSolution cf = r.closed();
    ConditionRecord rec = check_maximum_condition(r.e.problem, r.c, cf);
    CHECK(rec.verdict == Verdict::Pass);
    CHECK(rec.residual < 1e-8);

    SUBCASE("halkin: u = 1 maximizes H with p = -1") {
      ExampleEntry h = load_example("halkin-no-discount");
      CandidateProcess c = h.candidate();
      AdjointSolution adj = adjoint_closed_form(h.problem, c, h.closed.p, 1.0);
      InnerMax m = maximize_H(2.0, c.state_at(2.0), scalar(-1.0), 1.0, h.problem, scalar(0.7));
      CHECK(m.u[0] == doctest::Approx(1.0));
      CHECK(check_maximum_condition(h.problem, c, adj).verdict == Verdict::Pass);
    }
    SUBCASE("a shifted control is not a maximizer") {
      CandidateProcess c = r.c;
      c.closed->u = {Expression::parse(r.e.closed.u[0].str() + " + 1")};
      for (Vec& u : c.u) u[0] += 1.0;
      ConditionRecord bad = check_maximum_condition(r.e.problem, c, cf);
      CHECK(bad.verdict == Verdict::Fail);
      REQUIRE_FALSE(bad.witnesses.empty());
      CHECK(bad.residual > 1e-3);
    }
  }

  TEST_CASE("maximizer reports unbounded H") {
    ControlProblem p = parse_problem(
        "[problem]\nn = 1\nm = 1\nx0 = 1\n[dynamics]\nphi1 = u1\n[objective]\nf = x1\n"
        "omega = exp_decay 1\n[space]\nnu = exp_decay 1\n");
    try {
      maximize_H(0.5, scalar(1.0), scalar(1.0), 1.0, p, scalar(0.0));
      FAIL("expected UnboundedAbove");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::UnboundedAbove);
    }
  }

  TEST_CASE("maximizer on a nonquadratic problem matches a brute-force scan") {
    ExampleEntry e = load_example("log-investment");
    const double t = 1.0, x = 1.3, p = 0.7;
    InnerMax m = maximize_H(t, scalar(x), scalar(p), 1.0, e.problem, scalar(0.2));
    // H = omega ln((1-u) x) + p u x, stationary at 1 - u = omega / (p x)
    const double omega = std::exp(-0.5 * t);
    CHECK(m.u[0] == doctest::Approx(1.0 - omega / (p * x)).epsilon(1e-7));
    double best = -1e300;
    for (int i = 0; i < 100000; ++i) {
      const double u = i / 100000.0;
      best = std::max(best, omega * std::log((1 - u) * x) + p * u * x);
    }
    CHECK(m.value >= best - 1e-12);
  }

  TEST_CASE("weak inequality") {
    Regulator r;
    CHECK(check_weak_inequality(r.e.problem, r.c, r.closed()).residual < 1e-8);

    ExampleEntry li = load_example("log-investment");
    CandidateProcess lc = li.candidate();
    ConditionRecord rec = check_weak_inequality(li.problem, lc, adjoint_closed_form(li.problem, lc, li.closed.p, 1.0));
    CHECK(rec.verdict == Verdict::Pass);
    CHECK(rec.residual < 1e-8);

    SUBCASE("u* on a face with H_u pointing inward") {
      ExampleEntry h = load_example("halkin-no-discount");
      CandidateProcess c = h.candidate();
      // p = +1 gives H_u = -p x < 0 at the upper face u = 1
      AdjointSolution adj = adjoint_closed_form(h.problem, c, {Expression::parse("1")}, 1.0);
      ConditionRecord bad = check_weak_inequality(h.problem, c, adj);
      CHECK(bad.verdict == Verdict::Fail);
      REQUIRE_FALSE(bad.witnesses.empty());
    }
  }

  TEST_CASE("transversality") {
    SUBCASE("regulator a = 4.5 passes, a = 5 fails") {
      for (double a : {4.5, 5.0}) {
        Regulator r(a);
        AdjointSolution cf = r.closed();
        TransversalityRecords tr =
            check_transversality(r.e.problem, r.c, cf, Mode::Strong, transversality_battery(r.e.problem, r.c));
        const Verdict expected = a < 2.0 * (1.0 + oracle::sqrt2) ? Verdict::Pass : Verdict::Fail;
        CHECK_MESSAGE(tr.decay.verdict == expected, "a=" << a);
        CHECK(tr.pairing_tests.front().first == "x*");
        CHECK(tr.pairing_tests.front().second.verdict == Verdict::Pass);
      }
    }
    SUBCASE("halkin: |p| -> 0 fails while <p, x*> -> 0 passes") {
      ExampleEntry h = load_example("halkin-no-discount");
      CandidateProcess c = h.candidate();
      AdjointSolution adj = adjoint_closed_form(h.problem, c, h.closed.p, 1.0);
      TransversalityRecords tr =
          check_transversality(h.problem, c, adj, Mode::Weak, transversality_battery(h.problem, c));
      CHECK(tr.decay.verdict == Verdict::Fail);
      CHECK(tr.decay.residual == doctest::Approx(1.0).epsilon(1e-9));
      CHECK(tr.pairing_tests.front().second.verdict == Verdict::Pass);
      CHECK(tr.pairing.verdict == Verdict::Fail);
    }
    SUBCASE("p = 0 passes") {
      Regulator r;
      AdjointSolution zero = adjoint_closed_form(r.e.problem, r.c, {Expression::parse("0")}, 1.0);
      TransversalityRecords tr =
          check_transversality(r.e.problem, r.c, zero, Mode::Strong, transversality_battery(r.e.problem, r.c));
      CHECK(tr.decay.verdict == Verdict::Pass);
      CHECK(tr.pairing.verdict == Verdict::Pass);
    }
  }

  TEST_CASE("Michel condition") {
    SUBCASE("premise fails for a = 4.5 but H -> 0 is still reported") {
      Regulator r(4.5);
      ConditionRecord rec = check_michel(r.e.problem, r.c, r.closed(), Mode::Strong);
      CHECK(rec.premise == Verdict::Fail);
      CHECK(rec.verdict == Verdict::NotApplicable);
      CHECK(rec.note.find("informative") != std::string::npos);
      CHECK(rec.residual == doctest::Approx(std::abs(oracle::regulator::H(60.0))).epsilon(1e-3).scale(1e-60));
    }
    SUBCASE("premise holds for a = 3.9 and H -> 0") {
      Regulator r(3.9);
      ConditionRecord rec = check_michel(r.e.problem, r.c, r.closed(), Mode::Strong);
      CHECK(rec.premise == Verdict::Pass);
      CHECK(rec.verdict == Verdict::Pass);
    }
  }

  TEST_CASE("condition (S)") {
    SUBCASE("regulator deviations decay like exp((1 - sqrt 2) t)") {
      Regulator r(4.5, 30.0, 2048);
      NormalityResult n = check_normality(r.e.problem, r.c, 1e-3);
      CHECK(n.record.verdict == Verdict::Pass);
      // the control is fixed, so the deviation obeys d' = 2 d: the perturbation grows
      CHECK(n.deviation[0] == doctest::Approx(1.0));
    }
    SUBCASE("finite escape of a perturbed solution fails") {
      ControlProblem p = parse_problem(
          "[problem]\nn = 1\nm = 1\nx0 = 0\n[dynamics]\nphi1 = x1^2 + 0*u1\n"
          "[objective]\nf = x1\nomega = exp_decay 1\n[space]\nnu = exp_decay 1\n");
      TimeGrid g = TimeGrid::uniform(20.0, 400);
      CandidateProcess c = solve_state(p, std::vector<Vec>(g.size(), scalar(0.0)), p.x0, g);
      NormalityResult n = check_normality(p, c, 0.1);
      CHECK(n.record.verdict == Verdict::Fail);
      REQUIRE_FALSE(n.record.witnesses.empty());
      CHECK(n.record.witnesses[0].t == doctest::Approx(10.0).epsilon(1e-3));
    }
    SUBCASE("delta = 0 is vacuous") {
      Regulator r(4.5, 10.0, 256);
      CHECK(check_normality(r.e.problem, r.c, 0.0).record.verdict == Verdict::Pass);
    }
  }

  TEST_CASE("certificates on catalog examples") {
    SUBCASE("regulator passes and both routes agree") {
      Regulator r;
      CertificateOptions opt;
      opt.closed_adjoint = r.e.closed.p;
      CertificateReport rep = verify_certificate(r.e.problem, r.c, Mode::Strong, opt);
      CHECK(rep.status == "pass");
      CHECK(rep.overall == Verdict::Pass);
      CHECK(rep.route_deviation < 1e-5);
      CHECK(rep.oracle_deviation < 1e-5);
      CHECK(rep.verdict("michel") == Verdict::NotApplicable);
      for (const ConditionRecord& c : rep.conditions)
        if (c.premise == Verdict::Fail) CHECK_MESSAGE(c.verdict == Verdict::NotApplicable, c.name);
      const std::string text = format_certificate(rep);
      CHECK(text.find("adjoint_residual\n  premise: pass\n  verdict: pass") != std::string::npos);
    }
    SUBCASE("log-discount: assumptions violated and transversality fails") {
      ExampleEntry e = load_example("log-discount-pathology");
      CertificateOptions opt;
      opt.gamma = e.gamma;
      CertificateReport rep = verify_certificate(e.problem, e.candidate(), e.mode, opt);
      CHECK(rep.status == "assumptions-violated");
      CHECK(rep.verdict("transversality_decay") == Verdict::Fail);
    }
    SUBCASE("weibull-nash passes with p = 0") {
      ExampleEntry e = load_example("weibull-nash");
      CertificateReport rep = verify_certificate(e.problem, e.candidate(), Mode::Strong);
      CHECK(rep.status == "pass");
      REQUIRE(rep.primary() != nullptr);
      CHECK(rep.primary()->max_norm() <= 1e-6);
    }
  }

  TEST_CASE("adjoint deviation is relative to the first argument") {
    Regulator r(4.5, 10.0, 256);
    AdjointSolution a = r.closed(), b = a;
    b.closed.clear();
    for (Vec& v : b.p) v[0] *= 1.001;
    CHECK(adjoint_deviation(a, b, 10.0) == doctest::Approx(1e-3).epsilon(1e-6));
    CHECK(adjoint_deviation(a, a, 10.0) == 0.0);
  }

}  // TEST_SUITE
