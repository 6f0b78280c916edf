#include <doctest.h>

#include <random>

#include "canal/minkowski.hpp"

using namespace canal;

TEST_CASE("inner product signature") {
  CHECK(inner(basis(0), basis(0)) == -1);
  CHECK(inner(basis(2), basis(2)) == 1);
  Vec4 v{{2, 0, 0, std::sqrt(3.0)}};
  CHECK(inner(v, v) == doctest::Approx(-1).epsilon(1e-15));
  Vec4 n{{1, 1, 0, 0}};
  CHECK(inner(n, n) == 0);
}

TEST_CASE("triple cross of basis vectors") {
  CHECK(triple_cross(basis(1), basis(2), basis(3)) == Vec4{{-1, 0, 0, 0}});
  CHECK(triple_cross(basis(0), basis(1), basis(2)) == Vec4{{0, 0, 0, -1}});
  Vec4 x{{1, 2, 3, 4}}, z{{-1, 0.5, 2, 7}};
  CHECK(triple_cross(x, x, z) == Vec4{});
}

TEST_CASE("causal character and normalisation") {
  CHECK(causal_character(basis(0)) == CausalCharacter::Timelike);
  CHECK(causal_character(basis(1)) == CausalCharacter::Spacelike);
  CHECK(causal_character(Vec4{{1, 1, 0, 0}}) == CausalCharacter::Null);
  CHECK(causal_character(Vec4{}) == CausalCharacter::Null);
  CHECK(norm(Vec4{{0, 3, 4, 0}}) == doctest::Approx(5));
  CHECK(norm(Vec4{{2, 0, 0, std::sqrt(3.0)}}) == doctest::Approx(1));
  try {
    normalize(Vec4{{1, 1, 0, 0}});
    FAIL("expected NullVector");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NullVector);
  }
  Vec4 t = normalize(Vec4{{3, 1, 0, 0}});
  CHECK(inner(t, t) == doctest::Approx(-1));
}

TEST_CASE("cross product is orthogonal and alternating") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(-3, 3);
  auto rnd = [&] { return Vec4{{U(rng), U(rng), U(rng), U(rng)}}; };
  for (int i = 0; i < 500; ++i) {
    Vec4 x = rnd(), y = rnd(), z = rnd();
    Vec4 c = triple_cross(x, y, z);
    double scale = euclid_norm(c) * (euclid_norm(x) + euclid_norm(y) + euclid_norm(z));
    for (const Vec4* v : {&x, &y, &z}) CHECK(std::abs(inner(c, *v)) <= 1e-12 * scale);
    Vec4 sw = triple_cross(y, x, z) + c;
    CHECK(euclid_norm(sw) <= 1e-12 * euclid_norm(c));
    Vec4 sw2 = triple_cross(x, z, y) + c;
    CHECK(euclid_norm(sw2) <= 1e-12 * euclid_norm(c));
  }
}

TEST_CASE("inner product is bilinear") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(-2, 2);
  for (int i = 0; i < 200; ++i) {
    Vec4 x{{U(rng), U(rng), U(rng), U(rng)}}, y{{U(rng), U(rng), U(rng), U(rng)}}, z{{U(rng), U(rng), U(rng), U(rng)}};
    double a = U(rng), b = U(rng);
    double lhs = inner(a * x + b * y, z), rhs = a * inner(x, z) + b * inner(y, z);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * (1 + std::abs(rhs)));
    CHECK(inner(x, y) == inner(y, x));
  }
}
