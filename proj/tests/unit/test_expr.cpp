#include <doctest.h>

#include <cmath>

#include "ihoc/error.hpp"
#include "ihoc/expr.hpp"
#include "../oracles.hpp"

using namespace ihoc;

TEST_SUITE("expr") {
  TEST_CASE("arithmetic and precedence") {
    CHECK(Expression::parse("1 + 2*3").at(0) == 7.0);
    CHECK(Expression::parse("2^3^2").at(0) == 512.0);
    CHECK(Expression::parse("-2^2").at(0) == -4.0);
    CHECK(Expression::parse("(1 - 4)/2").at(0) == -1.5);
    CHECK(Expression::parse("pi").at(0) == doctest::Approx(M_PI));
    CHECK(Expression::parse("pow(2, 10)").at(0) == 1024.0);
    CHECK(Expression::parse("abs(-3) + sign(-2)").at(0) == 2.0);
  }

  TEST_CASE("variables are bound by index") {
    Expression e = Expression::parse("t + 10*x1 + 100*x2 + 1000*u1", 2, 1);
    const double x[2] = {1.0, 2.0}, u[1] = {3.0};
    CHECK(e(0.5, x, u) == doctest::Approx(0.5 + 10 + 200 + 3000));
    CHECK(e.depends_on(Var::x(1)));
    CHECK_FALSE(Expression::parse("t*x1", 1, 1).depends_on_control());
  }

  TEST_CASE("symbolic derivatives match closed forms") {
    Expression e = Expression::parse("exp(-2*t)*x1^2/2 + ln(x1)*u1 + sin(u1)*sqrt(x1)", 1, 1);
    const double x[1] = {1.7}, u[1] = {0.3};
    const double t = 0.4;
    const double dx = std::exp(-2 * t) * x[0] + u[0] / x[0] + std::sin(u[0]) / (2 * std::sqrt(x[0]));
    const double du = std::log(x[0]) + std::cos(u[0]) * std::sqrt(x[0]);
    const double dt = -std::exp(-2 * t) * x[0] * x[0];
    CHECK(e.derivative(Var::x(0))(t, x, u) == doctest::Approx(dx).epsilon(1e-14));
    CHECK(e.derivative(Var::u(0))(t, x, u) == doctest::Approx(du).epsilon(1e-14));
    CHECK(e.derivative(Var::t())(t, x, u) == doctest::Approx(dt).epsilon(1e-14));
  }

  TEST_CASE("derivatives of every function agree with central differences") {
    const char* sources[] = {"exp(x1)", "ln(x1)",       "sqrt(x1)", "sin(x1)",       "cos(x1)",    "abs(x1)",
                             "x1^3",    "pow(x1, 2.5)", "2^x1",     "x1/(1 + x1^2)", "pow(x1, x1)"};
    auto g = oracle::rng(11);
    for (const char* s : sources) {
      Expression e = Expression::parse(s, 1, 0);
      Expression d = e.derivative(Var::x(0));
      for (int k = 0; k < 20; ++k) {
        const double x = oracle::uniform(g, 0.2, 3.0);
        const double h = 1e-5;
        const double xp = x + h, xm = x - h;
        const double fd = (e(0, &xp, nullptr) - e(0, &xm, nullptr)) / (2 * h);
        CHECK_MESSAGE(d(0, &x, nullptr) == doctest::Approx(fd).epsilon(1e-7), s << " at " << x);
      }
    }
  }

  TEST_CASE("domain errors carry the evaluation point") {
    Expression e = Expression::parse("ln(x1)", 1, 1);
    const double x[1] = {-0.5}, u[1] = {0.25};
    try {
      e(3.0, x, u);
      FAIL("expected DomainError");
    } catch (const DomainError& d) {
      CHECK(d.kind() == ErrorKind::DomainError);
      CHECK(d.t() == 3.0);
      REQUIRE(d.x().size() == 1);
      CHECK(d.x()[0] == -0.5);
      REQUIRE(d.u().size() == 1);
      CHECK(d.u()[0] == 0.25);
    }
    CHECK_THROWS_AS(Expression::parse("sqrt(t - 1)").at(0), DomainError);
    CHECK_THROWS_AS(Expression::parse("1/t").at(0), DomainError);
    CHECK_THROWS_AS(Expression::parse("(-2)^0.5").at(0), DomainError);
    CHECK(Expression::parse("(-2)^3").at(0) == -8.0);
  }

  TEST_CASE("syntax errors report line and column") {
    try {
      Expression::parse("1 + * 2", 0, 0, 4, 10);
      FAIL("expected SyntaxError");
    } catch (const SyntaxError& e) {
      CHECK(e.line() == 4);
      CHECK(e.column() > 10);
    }
    CHECK_THROWS_AS(Expression::parse("exp(1"), SyntaxError);
    CHECK_THROWS_AS(Expression::parse("foo(1)"), Error);
    try {
      Expression::parse("y1 + 1", 1, 0);
      FAIL("expected UnknownIdentifier");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::UnknownIdentifier);
    }
  }

  TEST_CASE("references beyond the declared dimensions are rejected") {
    try {
      Expression::parse("x3", 2, 0);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK((e.kind() == ErrorKind::DimensionMismatch || e.kind() == ErrorKind::UnknownIdentifier));
    }
  }

  TEST_CASE("printing round-trips") {
    Expression e = Expression::parse("-2*(1 + sqrt(2))*exp(-(1 + sqrt(2))*t)");
    Expression back = Expression::parse(e.str());
    for (double t : {0.0, 0.5, 3.0}) CHECK(back.at(t) == doctest::Approx(e.at(t)).epsilon(1e-15));
  }

  TEST_CASE("constant folding helpers") {
    Expression c = Expression::constant(2.5);
    CHECK(c.is_constant());
    CHECK(c.constant_value() == 2.5);
    Expression v = Expression::variable(Var::t(), 0, 0);
    CHECK(v.times(c).plus(c).at(2.0) == 7.5);
    CHECK(v.negated().at(2.0) == -2.0);
  }

}  // TEST_SUITE
