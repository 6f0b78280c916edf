#include <doctest.h>

#include <functional>
#include <random>

#include "canal/expr.hpp"

using namespace canal;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::InvalidConfig;
}

}  // namespace

TEST_CASE("parse and evaluate") {
  CHECK(eval(parse("2*s"), 3) == 6);
  CHECK(eval(parse("2*cosh(s)"), 0) == 2);
  CHECK(eval(parse(" 2 * sinh( s ) "), 1) == doctest::Approx(2 * std::sinh(1.0)));
  CHECK(eval(parse("-s^2"), 3) == -9);
  CHECK(eval(parse("2^-1"), 0) == 0.5);
  CHECK(eval(parse("2^3^2"), 0) == 512);
  CHECK(eval(parse("8 - 3 - 2"), 0) == 3);
  CHECK(eval(parse("8 / 4 / 2"), 0) == 1);
  CHECK(eval(parse("1 + 2*3"), 0) == 7);
  CHECK(eval(parse("sqrt(3)*cos(s)"), 0) == doctest::Approx(std::sqrt(3.0)));
  CHECK(eval(parse("s^(1/3)"), 8) == doctest::Approx(2));
  CHECK(eval(parse("1.5e-1*s"), 2) == doctest::Approx(0.3));
  CHECK(eval(parse("pi"), 0) == doctest::Approx(3.14159265358979));
}

TEST_CASE("syntax and domain errors") {
  CHECK(kind_of([] { parse("2**s"); }) == ErrorKind::SyntaxError);
  CHECK(kind_of([] { parse("2*(s"); }) == ErrorKind::SyntaxError);
  CHECK(kind_of([] { parse("s^s"); }) == ErrorKind::SyntaxError);
  CHECK(kind_of([] { parse("x+1"); }) == ErrorKind::SyntaxError);
  CHECK(kind_of([] { parse("t"); }) == ErrorKind::SyntaxError);
  CHECK(kind_of([] { parse("foo(s)"); }) == ErrorKind::UnknownFunction);
  CHECK(kind_of([] { eval(parse("sqrt(s)"), -1); }) == ErrorKind::DomainError);
  CHECK(kind_of([] { eval(parse("log(s)"), 0); }) == ErrorKind::DomainError);
  CHECK(kind_of([] { eval(parse("1/s"), 0); }) == ErrorKind::DomainError);
  try {
    parse("1 + * 2");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("byte 4") != std::string::npos);
  }
}

TEST_CASE("symbolic derivatives") {
  CHECK(to_string(differentiate(parse("2*s"))) == "2");
  CHECK(to_string(differentiate(parse("sinh(s)"))) == "cosh(s)");
  CHECK(differentiate(differentiate(parse("2*s"))).is_const(0));
  CHECK(eval(differentiate(parse("tan(s)")), 0.3) == doctest::Approx(1 / std::pow(std::cos(0.3), 2)));
  CHECK(eval(differentiate(parse("sqrt(s)")), 4) == doctest::Approx(0.25));
  CHECK(eval(differentiate(parse("log(s)")), 2) == doctest::Approx(0.5));
  CHECK(eval(differentiate(parse("tanh(s)")), 0.4) == doctest::Approx(1 - std::pow(std::tanh(0.4), 2)));
  CHECK(eval(differentiate(parse("s^(4/3)")), 8) == doctest::Approx(4.0 / 3 * 2));
}

TEST_CASE("cone inputs may use t and w") {
  Expr e = parse("cos(t)*w + s", true);
  CHECK(eval(e, 1, 0, 2) == doctest::Approx(3));
  CHECK(eval(differentiate(e), 1, 0.3, 2) == doctest::Approx(1));
}

namespace {

// random expression trees that stay finite on [0.5, 1.5]
Expr random_expr(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 9);
  std::uniform_real_distribution<double> C(-2, 2);
  switch (pick(rng)) {
    case 0: return Expr::make_const(std::round(C(rng) * 100) / 100);
    case 1: return Expr::make_var(0);
    case 2: return random_expr(rng, depth - 1) + random_expr(rng, depth - 1);
    case 3: return random_expr(rng, depth - 1) - random_expr(rng, depth - 1);
    case 4: return random_expr(rng, depth - 1) * random_expr(rng, depth - 1);
    case 5: return random_expr(rng, depth - 1) / (Expr::make_const(3) + apply(Expr::Fn::Cos, random_expr(rng, depth - 1)));
    case 6: return pow(Expr::make_const(2) + apply(Expr::Fn::Sin, random_expr(rng, depth - 1)), 1.5);
    case 7: return apply(Expr::Fn::Sinh, apply(Expr::Fn::Tanh, random_expr(rng, depth - 1)));
    case 8: return apply(Expr::Fn::Log, Expr::make_const(2) + apply(Expr::Fn::Cos, random_expr(rng, depth - 1)));
    default: return apply(Expr::Fn::Exp, apply(Expr::Fn::Sin, random_expr(rng, depth - 1))) *
                    apply(Expr::Fn::Sqrt, Expr::make_const(1) + pow(random_expr(rng, depth - 1), 2));
  }
}

}  // namespace

TEST_CASE("derivative matches central difference on random expressions") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> S(0.5, 1.5);
  for (int i = 0; i < 100; ++i) {
    Expr e = random_expr(rng, 4);
    Expr d = differentiate(e);
    double s = S(rng), h = 1e-5;
    double fd = (eval(e, s + h) - eval(e, s - h)) / (2 * h);
    double v = eval(d, s);
    CHECK(std::abs(v - fd) <= 1e-6 * (1 + std::abs(v)));
  }
}

TEST_CASE("print then parse gives the same function") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> S(0.5, 1.5);
  for (int i = 0; i < 100; ++i) {
    Expr e = random_expr(rng, 4);
    Expr back = parse(to_string(e));
    for (int k = 0; k < 5; ++k) {
      double s = S(rng);
      double a = eval(e, s), b = eval(back, s);
      CHECK(std::abs(a - b) <= 1e-14 * (1 + std::abs(a)));
    }
  }
}
