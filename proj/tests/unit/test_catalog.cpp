#include <doctest.h>

#include <cmath>
#include <set>

#include "ihoc/catalog.hpp"
#include "ihoc/error.hpp"
#include "ihoc/integrate.hpp"

using namespace ihoc;

TEST_SUITE("catalog") {
  TEST_CASE("six examples in a fixed order") {
    const std::vector<std::string> expected{
        "halkin-no-discount", "log-discount-pathology", "regulator", "log-investment", "log-decay", "weibull-nash"};
    CHECK(example_names() == expected);
    std::vector<ExampleEntry> all = list_examples();
    REQUIRE(all.size() == 6);
    std::set<std::string> expectations{"pass", "fail", "pathological", "assumptions-violated"};
    for (const ExampleEntry& e : all) {
      CHECK_FALSE(e.description.empty());
      CHECK(expectations.count(e.expectation) == 1);
      CHECK(e.self_check < 1e-8);
    }
  }

  TEST_CASE("closed forms satisfy the state equation on the default grid") {
    for (const std::string& name : example_names()) {
      ExampleEntry e = load_example(name);
      CandidateProcess c = e.candidate();
      std::vector<double> r = state_residuals(e.problem, c);
      double worst = 0.0;
      for (std::size_t k = 0; k < r.size(); ++k) worst = std::max(worst, r[k] / std::max(1.0, c.x[k + 1].norm()));
      CHECK_MESSAGE(worst < 1e-8, name);
    }
  }

  TEST_CASE("weibull-nash parameters and the alpha > 1/(c1 + c2) constraint") {
    ExampleEntry e = load_example("weibull-nash");
    for (const char* k : {"alpha", "c1", "c2", "p", "r"}) CHECK(e.params.count(k) == 1);
    CHECK(e.closed.u[0].at(0.0) == doctest::Approx(0.25));
    CHECK_THROWS_AS(load_example("weibull-nash", {{"alpha", 0.4}}), Error);
    ExampleEntry two = load_example("weibull-nash", {{"player", 2}, {"c1", 2.0}});
    // own control c1 / (c1 + c2)^2 for player 2
    CHECK(two.closed.u[0].at(0.0) == doctest::Approx(2.0 / 9.0));
  }

  TEST_CASE("log-decay branches on rho") {
    ExampleEntry weak = load_example("log-decay", {{"rho", 2.0}});
    CHECK(weak.expectation == "pass");
    CHECK(weak.mode == Mode::Weak);
    REQUIRE(weak.problem.eta.has_value());
    CHECK((*weak.problem.eta)(1.0) == doctest::Approx(0.5 * std::exp(-1.0)));
    ExampleEntry bad = load_example("log-decay", {{"rho", 0.5}});
    CHECK(bad.expectation == "pathological");
    REQUIRE(bad.expected_gradient.has_value());
    CHECK(*bad.expected_gradient == Verdict::Fail);
  }

  TEST_CASE("regulator expectation flips at 2(1 + sqrt 2)") {
    CHECK(load_example("regulator", {{"a", 4.8}}).expectation == "pass");
    CHECK(load_example("regulator", {{"a", 4.85}}).expectation == "fail");
  }

  TEST_CASE("unknown names and parameters are rejected") {
    CHECK_THROWS_AS(load_example("nosuch"), Error);
    try {
      load_example("regulator", {{"b", 1.0}});
      FAIL("expected InvalidArgument");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::InvalidArgument);
    }
    CHECK_THROWS_AS(load_example("log-investment", {{"rho", 1.5}}), Error);
  }

  TEST_CASE("max-sense examples are stored in the min convention") {
    ExampleEntry e = load_example("log-investment");
    CHECK(e.problem.sense == Sense::Max);
    Vec x(1), u(1);
    x << 2.0;
    u << 0.5;
    CHECK(e.problem.eval_f(0.0, x, u) == doctest::Approx(-std::log(1.0)));
    u << 0.75;
    CHECK(e.problem.eval_f(0.0, x, u) == doctest::Approx(-std::log(0.5)));
  }

}  // TEST_SUITE
