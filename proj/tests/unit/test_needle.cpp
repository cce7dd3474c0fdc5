#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "ihoc/catalog.hpp"
#include "ihoc/error.hpp"
#include "ihoc/needle.hpp"
#include "../oracles.hpp"

using namespace ihoc;

TEST_SUITE("needle") {
  TEST_CASE("family on [0, 1] with m = 2, N = 4") {
    NeedleFamily f = build_family(0.0, 1.0, 2, 4);
    CHECK(f.h() == 0.25);
    std::vector<Interval> s0 = f.set(0, 0.25), s1 = f.set(1, 0.25);
    REQUIRE(s0.size() == 4);
    CHECK(s0[0].a == 0.0);
    CHECK(s0[0].b == 0.0625);
    CHECK(s1[0].a == 0.125);
    CHECK(s0[3].a == 0.75);
    CHECK(f.measure(0, 0.25) == 0.25);
    CHECK(f.measure(1, 0.25) == 0.25);
    // slots have width h / m = 0.125: eight of them tile [0, 1]
    CHECK(f.measure(0, 0.5) + f.measure(1, 0.5) == 1.0);
  }

  TEST_CASE("alpha = 0 gives the empty set, alpha = 1/m partitions the interval") {
    NeedleFamily f = build_family(0.0, 2.0, 3, 5);
    CHECK(f.set(1, 0.0).empty());
    CHECK(f.measure(1, 0.0) == 0.0);
    auto g = oracle::rng(9);
    for (int k = 0; k < 200; ++k) {
      const double t = oracle::uniform(g, 0.0, 2.0);
      int hits = 0;
      for (int i = 0; i < 3; ++i) hits += f.contains(i, 1.0 / 3.0, t) ? 1 : 0;
      CHECK(hits == 1);
    }
  }

  TEST_CASE("invalid arguments") {
    CHECK_THROWS_AS(build_family(1.0, 1.0, 2, 4), Error);
    try {
      build_family(2.0, 1.0, 2, 4);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::InvalidInterval);
    }
    NeedleFamily f = build_family(0.0, 1.0, 2, 4);
    try {
      f.set(0, 0.6);
      FAIL("alpha above 1/m must be rejected");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::InvalidArgument);
    }
    CHECK_THROWS_AS(check_alpha(f, -0.1), Error);
  }

  TEST_CASE("perturbed control switches to the donor on its set only") {
    NeedleFamily f = build_family(0.0, 1.0, 2, 8);
    auto base = [](double) { return Vec::Constant(1, 0.0); };
    std::vector<VecFn> donors{[](double) { return Vec::Constant(1, 1.0); },
                              [](double) { return Vec::Constant(1, 2.0); }};
    PerturbedControl u(base, donors, f, {0.25, 0.5});
    auto g = oracle::rng(4);
    for (int k = 0; k < 500; ++k) {
      const double t = oracle::uniform(g, -0.5, 1.5);
      const int a = u.active(t);
      const double expected = a < 0 ? 0.0 : (a == 0 ? 1.0 : 2.0);
      CHECK(u(t)[0] == expected);
      if (a == 0) CHECK(f.contains(0, 0.25, t));
      if (a < 0) CHECK_FALSE((f.contains(0, 0.25, t) || f.contains(1, 0.5, t)));
    }
    CHECK_THROWS_AS(PerturbedControl(base, {donors[0]}, f, {0.25}), Error);
  }

  TEST_CASE("estimate for y = 1 is bounded by |alpha - alpha'| h") {
    for (int N : {4, 16, 64}) {
      NeedleFamily f = build_family(0.0, 1.0, 2, N);
      EstimateRecord r = verify_estimate(f, 0, [](double) { return 1.0; }, 0.4, 0.1, 1.0);
      CHECK(r.lhs <= 0.3 * f.h() * (1.0 + 1e-12));
      CHECK(r.delta_emp <= 1.0 / N * (1.0 + 1e-12));
      CHECK(r.delta_emp > 0.5 / N);
    }
  }

  TEST_CASE("estimate for y = t with N = 64 passes delta = 0.05") {
    NeedleFamily f = build_family(0.0, 1.0, 2, 64);
    EstimateRecord r = verify_estimate(f, 1, [](double t) { return t; }, 0.3, 0.1, 0.05);
    CHECK(r.verdict == Verdict::Pass);
    CHECK(r.delta_emp < 1.5 / 64);
    // brute force: cumulative Riemann sums on a fine uniform grid
    const int M = 1 << 17;
    double lhs = 0.0, I = 0.0, J = 0.0;
    for (int k = 0; k < M; ++k) {
      const double t = (k + 0.5) / M;
      const double chi = (f.contains(1, 0.3, t) ? 1.0 : 0.0) - (f.contains(1, 0.1, t) ? 1.0 : 0.0);
      I += chi * t / M;
      J += t / M;
      lhs = std::max(lhs, std::abs(I - 0.2 * J));
    }
    CHECK(r.lhs == doctest::Approx(lhs).epsilon(1e-3));
  }

  TEST_CASE("alpha = alpha' gives a zero defect") {
    NeedleFamily f = build_family(0.0, 1.0, 3, 10);
    EstimateRecord r = verify_estimate(f, 2, [](double t) { return std::sin(t); }, 0.2, 0.2, 0.01);
    CHECK(r.lhs == 0.0);
    CHECK(r.delta_emp == 0.0);
    CHECK(r.verdict == Verdict::Pass);
  }

  TEST_CASE("linearization on the regulator") {
    ExampleEntry e = load_example("regulator");
    CandidateProcess c = e.candidate(TimeGrid::standard(10.0, 1024));
    auto zero = [](double) { return Vec::Constant(1, 0.0); };
    SUBCASE("donor u = 0: the error / alpha floor shrinks like 1/N") {
      double prev = 0.0;
      for (int N : {64, 256, 1024}) {
        LinearizationRecord r = verify_linearization(e.problem, c, build_family(0.0, 1.0, 1, N), {zero}, 0.1, 0.05, 3);
        REQUIRE(r.alphas.size() == 3);
        CHECK(r.alphas[1] == doctest::Approx(0.05));
        CHECK(r.fit_residual < 1e-4);
        if (prev > 0.0) CHECK(prev / r.fit_delta == doctest::Approx(4.0).epsilon(0.1));
        prev = r.fit_delta;
        CHECK(r.verdict == (r.fit_delta <= 0.05 ? Verdict::Pass : Verdict::Fail));
      }
      CHECK(prev <= 0.05);
    }
    SUBCASE("donor = u*: no perturbation at all") {
      const CandidateProcess& cc = c;
      LinearizationRecord r = verify_linearization(e.problem, c, build_family(0.0, 1.0, 1, 16),
                                                   {[&cc](double t) { return cc.control_at(t); }}, 0.1, 0.05, 3);
      for (double err : r.errors) CHECK(err <= 1e-12);
    }
  }

  TEST_CASE("Lusin set for the Weibull pole") {
    const double eps = 1e-2;
    TimeGrid g = TimeGrid::standard(50.0, 4096);
    WeightSpec om = WeightSpec::weibull(0.5);
    LusinMask m = lusin_concentrate([&](double t) { return om(t); }, g, eps);
    REQUIRE(m.excluded.size() == 1);
    CHECK(m.excluded[0].a == 0.0);
    CHECK(m.excluded_mass < eps);
    // closed-form mass of [0, e'] is 2 (1 - exp(-sqrt e'))
    const double ep = m.excluded[0].b;
    CHECK(m.excluded_mass == doctest::Approx(2.0 * (1.0 - std::exp(-std::sqrt(ep)))).epsilon(1e-4));
    CHECK(std::isfinite(m.sup_on_K));
    CHECK(m.sup_on_K == doctest::Approx(om(ep)).epsilon(1e-12));
    CHECK_FALSE(m.mask[0].second);
    CHECK(m.mask.back().second);
  }

  TEST_CASE("bounded integrands need no exclusion") {
    TimeGrid g = TimeGrid::standard(10.0, 512);
    LusinMask m = lusin_concentrate([](double t) { return std::exp(-t); }, g, 1e-6);
    CHECK(m.excluded.empty());
    CHECK(m.excluded_mass == 0.0);
    for (const auto& [t, in] : m.mask) CHECK(in);
  }

  TEST_CASE("non-integrable singularity cannot be concentrated") {
    TimeGrid g = TimeGrid::standard(10.0, 512);
    try {
      lusin_concentrate([](double t) { return 1.0 / t; }, g, 1e-3);
      FAIL("expected CannotConcentrate");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::CannotConcentrate);
    }
  }

  TEST_CASE("family and mask CSV") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path();
    NeedleFamily f = build_family(0.0, 1.0, 2, 2);
    write_family_csv((dir / "ihoc_family.csv").string(), f, {0.5, 0.25});
    std::ifstream is(dir / "ihoc_family.csv");
    std::string line;
    std::getline(is, line);
    CHECK(line == "set,alpha,a,b");
    std::getline(is, line);
    CHECK(line == "1,0.5,0,0.25");
    int rows = 1;
    while (std::getline(is, line)) ++rows;
    CHECK(rows == 4);
    fs::remove(dir / "ihoc_family.csv");
  }

}  // TEST_SUITE
