#include <cmath>
#include <numbers>
#include <random>

#include "catch_amalgamated.hpp"
#include "oracles.hpp"
#include "warpsol/expr.hpp"

using namespace warpsol;
using Catch::Matchers::WithinAbs;

TEST_CASE("exp jet at zero") {
  const auto j = eval_jet2(parse("exp(t)", {"t"}), {{"t", 0.0}}, {"t"});
  CHECK(j.value() == 1.0);
  CHECK(j.first(0) == 1.0);
  CHECK(j.second(0, 0) == 1.0);
}

TEST_CASE("polynomial jet") {
  const auto j = eval_jet2(parse("t^2 + 3*t", {"t"}), {{"t", 2.0}}, {"t"});
  CHECK(j.value() == 10.0);
  CHECK(j.first(0) == 7.0);
  CHECK(j.second(0, 0) == 2.0);
}

TEST_CASE("sin jet at pi/2") {
  const auto j = eval_jet2(parse("sin(t)", {"t"}), {{"t", std::numbers::pi / 2}}, {"t"});
  CHECK_THAT(j.value(), WithinAbs(1.0, 1e-15));
  CHECK_THAT(j.first(0), WithinAbs(0.0, 1e-15));
  CHECK_THAT(j.second(0, 0), WithinAbs(-1.0, 1e-15));
}

TEST_CASE("pythagorean identity") {
  const auto e = parse("sin(t)^2 + cos(t)^2", {"t"});
  const double t = 0.7;
  CHECK_THAT(e.evaluate(std::span<const double>(&t, 1)), WithinAbs(1.0, 1e-15));
}

TEST_CASE("precedence and associativity") {
  const std::vector<std::string> none;
  auto val = [&](const char* s) { return parse(s, none).evaluate({}); };
  CHECK(val("2^3^2") == 512.0);
  CHECK(val("-2^2") == -4.0);
  CHECK(val("2*3+4") == 10.0);
  CHECK(val("2+3*4") == 14.0);
  CHECK(val("8/2/2") == 2.0);
  CHECK(val("2^-1") == 0.5);
  CHECK(val("1.5e2") == 150.0);
  CHECK_THAT(val("pi"), WithinAbs(std::numbers::pi, 0));
  CHECK_THAT(val("e"), WithinAbs(std::numbers::e, 0));
}

TEST_CASE("implicit multiplication is rejected") {
  CHECK_THROWS_AS(parse("2t", {"t"}), SyntaxError);
  CHECK_THROWS_AS(parse("2 t", {"t"}), SyntaxError);
  CHECK_THROWS_AS(parse("(t)(t)", {"t"}), SyntaxError);
  CHECK_THROWS_AS(parse("t(2)", {"t"}), SyntaxError);
}

TEST_CASE("syntax errors carry offsets") {
  try {
    parse("1 + * 2", {});
    FAIL("expected a syntax error");
  } catch (const SyntaxError& e) {
    CHECK(e.offset() == 4);
  }
  CHECK_THROWS_AS(parse("", {}), SyntaxError);
  CHECK_THROWS_AS(parse("sin(t", {"t"}), SyntaxError);
  CHECK_THROWS_AS(parse("1 +", {}), SyntaxError);
}

TEST_CASE("unknown identifiers") {
  CHECK_THROWS_AS(parse("x + 1", {"t"}), UnknownIdentifier);
  CHECK_THROWS_AS(parse("foo(t)", {"t"}), UnknownIdentifier);
  try {
    parse("t + y", {"t"});
  } catch (const UnknownIdentifier& e) {
    CHECK(e.name() == "y");
    CHECK(e.offset() == 4);
  }
}

TEST_CASE("domain errors name the subexpression") {
  const auto e = parse("log(t - 1)", {"t"});
  try {
    eval_jet2(e, {{"t", 0.5}}, {"t"});
    FAIL("expected a domain error");
  } catch (const DomainError& err) {
    CHECK(err.subexpression().find("log") != std::string::npos);
  }
  CHECK_THROWS_AS(eval_jet2(parse("sqrt(t)", {"t"}), {{"t", -1.0}}, {}), DomainError);
  CHECK_THROWS_AS(eval_jet2(parse("1/t", {"t"}), {{"t", 0.0}}, {}), DomainError);
  CHECK_THROWS_AS(eval_jet2(parse("abs(t)", {"t"}), {{"t", 0.0}}, {"t"}), DomainError);
  CHECK_THROWS_AS(eval_jet2(parse("t^0.5", {"t"}), {{"t", -1.0}}, {}), DomainError);
  CHECK(eval_jet2(parse("abs(t)", {"t"}), {{"t", 0.0}}, {}).value() == 0.0);
  CHECK(eval_jet2(parse("t^3", {"t"}), {{"t", -2.0}}, {"t"}).value() == -8.0);
}

TEST_CASE("printing round-trips") {
  std::mt19937 rng(11);
  const std::vector<std::string> vars{"u", "v"};
  std::uniform_real_distribution<double> pt(-1.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    const auto e = parse(oracle::random_expression(rng, vars), vars);
    const auto again = parse(e.str(), vars);
    for (int s = 0; s < 5; ++s) {
      const double p[2] = {pt(rng), pt(rng)};
      CHECK(again.evaluate(p) == e.evaluate(p));
    }
  }
}

TEST_CASE("empty active list equals plain evaluation") {
  const auto e = parse("sin(u)*exp(v) + u^3", {"u", "v"});
  const auto j = eval_jet2(e, {{"u", 0.3}, {"v", -0.2}}, {});
  const double p[2] = {0.3, -0.2};
  CHECK(j.dim() == 0);
  CHECK(j.value() == e.evaluate(p));
}

TEST_CASE("jets agree with finite differences on random expressions") {
  std::mt19937 rng(2024);
  const std::vector<std::string> vars{"u", "v", "w"};
  std::uniform_real_distribution<double> pt(-1.0, 1.0);
  const double h = 1e-5;
  const std::size_t active[] = {0, 1, 2};
  int checked = 0;
  for (int k = 0; k < 200; ++k) {
    const auto e = parse(oracle::random_expression(rng, vars), vars);
    std::vector<double> p{pt(rng), pt(rng), pt(rng)};
    const Jet2 j = e.jet(p, active);
    for (std::size_t i = 0; i < 3; ++i) {
      auto at = [&](double d) {
        auto q = p;
        q[i] += d;
        return e.jet(q, active);
      };
      const Jet2 jp = at(h), jm = at(-h);
      const double fd = (jp.value() - jm.value()) / (2 * h);
      CHECK(std::abs(j.first(i) - fd) < 1e-6 * (1 + std::abs(j.first(i))));
      for (std::size_t m = 0; m < 3; ++m) {
        const double fd2 = (jp.first(m) - jm.first(m)) / (2 * h);
        CHECK(std::abs(j.second(i, m) - fd2) < 1e-4 * (1 + std::abs(j.second(i, m))));
        CHECK(j.second(i, m) == j.second(m, i));
      }
    }
    ++checked;
  }
  CHECK(checked == 200);
}

TEST_CASE("exp recognition") {
  CHECK(parse("exp(t)", {"t"}).is_exp_of_variable());
  CHECK_FALSE(parse("3*exp(2*t)", {"t"}).is_exp_of_variable());
  CHECK_FALSE(parse("sin(t)", {"t"}).is_exp_of_variable());
}

TEST_CASE("reserved names cannot be variables") {
  CHECK_THROWS_AS(parse("1", {"pi"}), SyntaxError);
  CHECK_THROWS_AS(parse("1", {"sin"}), SyntaxError);
}
