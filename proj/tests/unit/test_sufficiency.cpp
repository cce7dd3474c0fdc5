#include <doctest.h>

#include <cmath>

#include "ihoc/catalog.hpp"
#include "ihoc/error.hpp"
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

TEST_SUITE("sufficiency") {
  TEST_CASE("regulator maximized Hamiltonian in closed form") {
    ExampleEntry e = load_example("regulator");
    auto g = oracle::rng(5);
    for (int k = 0; k < 50; ++k) {
      const double t = oracle::uniform(g, 0, 5), x = oracle::uniform(g, -3, 3), p = oracle::uniform(g, -3, 3);
      CHECK(hamiltonian_sup(t, scalar(x), scalar(p), e.problem) ==
            doctest::Approx(oracle::regulator::Hsup(t, x, p)).epsilon(1e-12));
    }
  }

  TEST_CASE("singleton control set: the sup is H at that control") {
    ControlProblem p = parse_problem(
        "[problem]\nn = 1\nm = 1\nx0 = 1\n[dynamics]\nphi1 = x1*u1\n[objective]\n"
        "f = x1^2 + u1\nomega = exp_decay 1\n[space]\nnu = exp_decay 1\n[controls]\nu1 = [0.5, 0.5]\n");
    const double t = 0.7, x = 1.2, q = -0.4;
    CHECK(hamiltonian_sup(t, scalar(x), scalar(q), p) ==
          doctest::Approx(-std::exp(-t) * (x * x + 0.5) + q * x * 0.5).epsilon(1e-14));
  }

  TEST_CASE("p = 0: the sup is -omega f at the minimizing control") {
    // f = (u - 0.3)^2 + cos(u) x has an interior minimizer; compare against a dense scan
    ControlProblem p = parse_problem(
        "[problem]\nn = 1\nm = 1\nx0 = 1\n[dynamics]\nphi1 = u1\n[objective]\n"
        "f = (u1 - 0.3)^4 + 0.1*cos(3*u1)*x1\nomega = exp_decay 1\n[space]\nnu = exp_decay 1\n"
        "[controls]\nu1 = [-2, 2]\n");
    const double t = 0.2, x = 0.8;
    double best = -1e300;
    for (int i = 0; i <= 400000; ++i) {
      const double u = -2.0 + 4.0 * i / 400000.0;
      best = std::max(best, -std::exp(-t) * (std::pow(u - 0.3, 4) + 0.1 * std::cos(3 * u) * x));
    }
    CHECK(hamiltonian_sup(t, scalar(x), scalar(0.0), p) == doctest::Approx(best).epsilon(1e-10));
  }

  TEST_CASE("Arrow test on the regulator passes") {
    ExampleEntry e = load_example("regulator");
    CandidateProcess c = e.candidate();
    AdjointSolution adj = adjoint_closed_form(e.problem, c, e.closed.p, 1.0);
    ConcavityReport r = check_arrow(e.problem, c, adj, e.gamma, Mode::Strong);
    CHECK(r.overall == Verdict::Pass);
    CHECK(r.slices.size() == 512);
    for (const ConcavitySlice& s : r.slices) {
      CHECK(s.verdict == Verdict::Pass);
      CHECK(s.pairs >= 64);
    }
    CHECK(format_concavity(r).find("verdict: pass") != std::string::npos);
  }

  TEST_CASE("Arrow test on log-investment passes") {
    ExampleEntry e = load_example("log-investment");
    CandidateProcess c = e.candidate();
    AdjointSolution adj = adjoint_closed_form(e.problem, c, e.closed.p, 1.0);
    CHECK(check_arrow(e.problem, c, adj, e.gamma, Mode::Weak, {}, 128).overall == Verdict::Pass);
  }

  TEST_CASE("a convex x^2 term is caught with a witness pair") {
    ExampleEntry e = load_example("regulator");
    // f = (u^2 - x^2)/2 makes the maximized Hamiltonian convex in x
    ControlProblem p = parse_problem(
        "[problem]\nn = 1\nm = 1\nx0 = 2\n[dynamics]\nphi1 = 2*x1 + u1\n[objective]\n"
        "f = (u1^2 - x1^2)/2\nomega = exp_decay 2\n[space]\nnu = exp_decay 4.5\n");
    CandidateProcess c = e.candidate();
    AdjointSolution adj = adjoint_closed_form(p, c, e.closed.p, 1.0);
    ConcavityReport r = check_arrow(p, c, adj, 0.1, Mode::Strong, {}, 64);
    CHECK(r.overall == Verdict::Fail);
    const ConcavitySlice& s = r.slices[r.worst_slice];
    CHECK(s.verdict == Verdict::Fail);
    CHECK(s.worst > 0.0);
    REQUIRE(s.x1.size() == 1);
    REQUIRE(s.x2.size() == 1);
    const double xs = c.state_at(s.t)[0];
    CHECK(std::abs(s.x1[0] - xs) <= 0.1 + 1e-12);
    CHECK(std::abs(s.x2[0] - xs) <= 0.1 + 1e-12);
    // the violation equals omega (x1 - x2)^2 / 8 for a pure x^2/2 term
    CHECK(s.worst == doctest::Approx(std::exp(-2 * s.t) * std::pow(s.x1[0] - s.x2[0], 2) / 8.0).epsilon(1e-6));
  }

  TEST_CASE("UnboundedAbove propagates") {
    ControlProblem p = parse_problem(
        "[problem]\nn = 1\nm = 1\nx0 = 1\n[dynamics]\nphi1 = u1\n[objective]\nf = x1\n"
        "omega = exp_decay 1\n[space]\nnu = exp_decay 1\n");
    CHECK_THROWS_AS(hamiltonian_sup(0.0, scalar(1.0), scalar(1.0), p), Error);
  }

}  // TEST_SUITE
