#include <doctest.h>

#include <cmath>

#include "ihoc/error.hpp"
#include "ihoc/weights.hpp"
#include "../oracles.hpp"

using namespace ihoc;

TEST_SUITE("weights") {
  TEST_CASE("exponential weight satisfies E1 to E5 with K close to 1") {
    PropertyReport r = check_weight_properties(WeightSpec::exp_decay(1.0), default_property_grid(), Mode::Strong, 1e-6);
    for (const char* k : {"E1", "E2", "E3", "E4", "E5"}) CHECK_MESSAGE(r.verdict(k) == Verdict::Pass, k);
    CHECK(r.K_estimate == doctest::Approx(1.0).epsilon(1e-6));
  }

  TEST_CASE("harmonic weight fails E5 with a witness near t nu(t) = 1") {
    WeightSpec nu = WeightSpec::power(1.0);
    PropertyReport r = check_weight_properties(nu, default_property_grid(), Mode::Strong, 1e-6);
    CHECK(r.verdict("E5") == Verdict::Fail);
    REQUIRE_FALSE(r.verdicts.at("E5").witnesses.empty());
    const Witness& w = r.verdicts.at("E5").witnesses.front();
    CHECK(w.value == doctest::Approx(w.t / (1.0 + w.t)).epsilon(1e-9));
    CHECK(w.value > 0.9);
  }

  TEST_CASE("power weight with a > 1 passes E1 to E5 and K close to a") {
    for (double a : {2.0, 3.0}) {
      // t nu(t) reaches 50^{1-a} at the end of the default grid
      PropertyReport r = check_weight_properties(WeightSpec::power(a), default_property_grid(), Mode::Strong, 0.2);
      for (const char* k : {"E1", "E2", "E3", "E4", "E5"})
        CHECK_MESSAGE(r.verdict(k) == Verdict::Pass, std::string(k) << " a=" << a);
      CHECK(r.K_estimate == doctest::Approx(a).epsilon(1e-6));
    }
  }

  TEST_CASE("power weight with a = 1.5 still rises across the first decade") {
    // t (1+t)^-1.5 peaks at t = 2: samples 0.27, 0.34, 0.14 at T/100, T/10, T
    PropertyReport r = check_weight_properties(WeightSpec::power(1.5), default_property_grid(), Mode::Strong, 0.2);
    CHECK(r.verdict("E5") == Verdict::Fail);
    CHECK(r.verdicts.at("E5").note.find("not decreasing") != std::string::npos);
  }

  TEST_CASE("weak mode skips E5") {
    PropertyReport r = check_weight_properties(WeightSpec::power(1.0), default_property_grid(), Mode::Weak, 1e-6);
    CHECK(r.verdicts.count("E5") == 0);
    CHECK(r.verdict("F1") == Verdict::Pass);
  }

  TEST_CASE("nonpositive weight is a hard error") {
    WeightSpec w = WeightSpec::from_expression(Expression::parse("1 - t"));
    CHECK_THROWS_AS(check_weight_properties(w, default_property_grid(), Mode::Strong, 1e-6), Error);
    try {
      check_weight_properties(w, default_property_grid(), Mode::Strong, 1e-6);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::NonPositiveWeight);
    }
  }

  TEST_CASE("distribution exp(-2t) integrates to one half") {
    PropertyReport r = check_distribution(WeightSpec::exp_decay(2.0), default_property_grid(), 1e-8);
    CHECK(r.verdict("E6") == Verdict::Pass);
    CHECK(r.verdict("F5") == Verdict::Pass);
    CHECK(r.integral == doctest::Approx(0.5).epsilon(1e-8));
  }

  TEST_CASE("constant distribution is not integrable") {
    WeightSpec one = WeightSpec::from_expression(Expression::parse("1"));
    PropertyReport r;
    try {
      r = check_distribution(one, default_property_grid(), 1e-8);
      CHECK(r.verdict("E6") == Verdict::Fail);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::MissingTailBound);
    }
  }

  TEST_CASE("Weibull k = 1/2 distribution integrates to 2 despite the pole") {
    PropertyReport r = check_distribution(WeightSpec::weibull(0.5), default_property_grid(), 1e-8);
    CHECK(r.verdict("E6") == Verdict::Pass);
    CHECK(r.integral == doctest::Approx(2.0).epsilon(1e-6));
    // independent oracle: adaptive Simpson after s = sqrt t
    const double I = 2.0 * oracle::simpson([](double s) { return std::exp(-s); }, 0.0, std::sqrt(50.0)) +
                     oracle::weibull_half_tail(50.0);
    CHECK(I == doctest::Approx(2.0).epsilon(1e-10));
  }

  TEST_CASE("radius check accepts a decreasing positive eta") {
    PropertyReport r =
        check_radius(WeightSpec::from_expression(Expression::parse("0.5*exp(-t)")), default_property_grid());
    CHECK(r.verdict("F6") == Verdict::Pass);
    PropertyReport bad = check_radius(WeightSpec::from_expression(Expression::parse("1 + t")), default_property_grid());
    CHECK(bad.verdict("F6") == Verdict::Fail);
  }

  TEST_CASE("dominance for the Weibull family has its boundary at p = 2") {
    const WeightSpec om = WeightSpec::weibull(0.5), nu = WeightSpec::power(2.0);
    CHECK(check_dominance(nu, om, 2.0).verdict == Verdict::Fail);
    CHECK(check_dominance(nu, om, 2.5).verdict == Verdict::Pass);
    CHECK(check_dominance(nu, om, 3.0).verdict == Verdict::Pass);
  }

  TEST_CASE("dominance for exponential weights passes iff a < 4") {
    const WeightSpec om = WeightSpec::exp_decay(2.0);
    CHECK(check_dominance(WeightSpec::exp_decay(3.0), om, 2.0).verdict == Verdict::Pass);
    CHECK(check_dominance(WeightSpec::exp_decay(3.9), om, 2.0).verdict == Verdict::Pass);
    CHECK(check_dominance(WeightSpec::exp_decay(4.5), om, 2.0).verdict == Verdict::Fail);
    // nu^{-1} omega^2 = exp((a - 4) t): the integral is 1 / (4 - a)
    DominanceResult r = check_dominance(WeightSpec::exp_decay(3.0), om, 2.0);
    CHECK(r.residual == doctest::Approx(1.0).epsilon(1e-6));
  }

  TEST_CASE("dominance rejects p <= 1") {
    try {
      check_dominance(WeightSpec::exp_decay(1.0), WeightSpec::exp_decay(2.0), 1.0);
      FAIL("expected InvalidExponent");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::InvalidExponent);
    }
  }

  TEST_CASE("weight spec literals parse") {
    CHECK(parse_weight_spec("exp_decay 2")(1.0) == doctest::Approx(std::exp(-2.0)));
    CHECK(parse_weight_spec("power 2")(1.0) == doctest::Approx(0.25));
    CHECK(parse_weight_spec("weibull 0.5")(4.0) == doctest::Approx(0.5 * std::exp(-2.0)));
    WeightSpec e = parse_weight_spec("expr(exp(-3*t)) tail(exp(-3*t)/3)");
    CHECK(e(1.0) == doctest::Approx(std::exp(-3.0)));
    REQUIRE(e.has_tail_bound());
    CHECK(e.tail_bound(2.0) == doctest::Approx(std::exp(-6.0) / 3.0));
    CHECK_THROWS_AS(parse_weight_spec("gauss 1"), Error);
  }

}  // TEST_SUITE
