#include <doctest.h>

#include <cmath>

#include "canal/canal.hpp"
#include "curves.hpp"

using namespace canal;
using testcurves::family;

TEST_CASE("canal point lies on the sphere and on its characteristic") {
  for (int j = 1; j <= 4; ++j)
    for (int L : {1, -1}) {
      if (j == 1 && L == -1) continue;
      for (int sigma : {1, -1}) {
        auto cfg = family(j, L, "2*s", sigma);
        const auto& c = testcurves::by_type(j);
        for (double s : {0.5, 1.2, 2.0})
          for (double t : {-0.7, 0.3})
            for (double w : {-0.4, 0.9}) {
              NodeData nd = node_data(c, cfg, s, t, w);
              Vec4 d = nd.point - nd.beta;
              CHECK(inner(d, d) == doctest::Approx(L * nd.r * nd.r).epsilon(1e-10));
              CHECK(inner(d, nd.fr.F[0]) == doctest::Approx(-L * nd.r * nd.dr).epsilon(1e-10));
              CHECK(nd.variant == Variant::Standard);
            }
      }
    }
}

TEST_CASE("golden point of the first example") {
  auto cfg = family(1, 1);
  NodeData nd = node_data(testcurves::beta1(), cfg, 1, 0, 0);
  // V = 2 F1 + sqrt(5) F2 at the origin of the pattern
  Vec4 want = testcurves::beta1().position(1) + 2 * (2 * nd.fr.F[0] + std::sqrt(5.0) * nd.fr.F[1]);
  CHECK(euclid_norm(nd.point - want) < 1e-12);
  CHECK(nd.Q == doctest::Approx(5));
  CHECK(nd.c == 1);
  CHECK(node_data(testcurves::beta1(), family(1, -1), 1, 0, 0).c == -1);
  CHECK(node_data(testcurves::beta2(), family(3, -1), 1, 0, 0).c == 1);
  CHECK(node_data(testcurves::beta2(), family(3, 1), 1, 0, 0).c == -1);
}

TEST_CASE("alternate form when r'^2 < lambda*eps1") {
  // spacelike center, lambda = 1, slowly growing radius
  auto cfg = family(2, 1, "1 + 0.5*s");
  NodeData nd = node_data(testcurves::j2(), cfg, 0.5, 0.3, 0.4);
  CHECK(nd.variant == Variant::Alt);
  CHECK(nd.A == doctest::Approx(std::sinh(0.4)));
  Vec4 d = nd.point - nd.beta;
  CHECK(inner(d, d) == doctest::Approx(nd.r * nd.r).epsilon(1e-10));
  CHECK(inner(d, nd.fr.F[0]) == doctest::Approx(-nd.r * 0.5).epsilon(1e-10));
  cfg.variant = Variant::Standard;
  try {
    node_data(testcurves::j2(), cfg, 0.5, 0.3, 0.4);
    FAIL("standard form forced");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::VariantViolated);
  }
  auto rep = validate_config(testcurves::j2(), cfg, 0.25, 3);
  CHECK_FALSE(rep.ok);
  CHECK(rep.kind == ErrorKind::VariantViolated);
}

TEST_CASE("inadmissible configurations") {
  CHECK(validate_config(testcurves::beta1(), family(1, -1, "1"), 0.25, 3).kind == ErrorKind::InadmissibleConfig);
  CHECK_FALSE(validate_config(testcurves::beta1(), family(1, -1, "1"), 0.25, 3).ok);
  CHECK_FALSE(validate_config(testcurves::beta1(), family(1, 0), 0.25, 3).ok);
  CHECK_FALSE(validate_config(testcurves::beta1(), family(2, 1), 0.25, 3).ok);  // frame mismatch
  CHECK_FALSE(validate_config(testcurves::beta1(), family(1, 1, "s - 1"), 0.25, 3).ok);  // radius crosses zero
  // timelike center with lambda = -1 needs r'^2 > -1 always: fine for 2*s
  CHECK(validate_config(testcurves::beta1(), family(1, -1), 0.25, 3).ok);
  // sign of r'^2 - lambda*eps1 changes on the domain
  CHECK_FALSE(validate_config(testcurves::j2(), family(2, 1, "s^2"), 0.25, 3).ok);
  auto bad = family(2, 1);
  bad.sigma = 0;
  CHECK_FALSE(validate_config(testcurves::j2(), bad, 0.25, 3).ok);
}

TEST_CASE("null-cone points") {
  for (int j = 2; j <= 4; ++j) {
    const auto& c = testcurves::by_type(j);
    for (int sigma : {1, -1}) {
      auto p = nullcone_point(c, j, sigma, 0.7, -1.3, 0.8);
      CHECK(std::abs(p.residual) <= 1e-12);
      Vec4 d = p.point - c.position(0.8);
      CHECK(std::abs(inner(d, d)) <= 1e-12);
      CHECK(p.a[j - 1] == doctest::Approx(sigma * std::hypot(0.7, 1.3)));
    }
  }
  try {
    nullcone_point(testcurves::beta1(), 1, 1, 1, 1, 0);
    FAIL("j = 1");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InadmissibleConfig);
  }
  auto cfg = family(3, 0);
  cfg.cone_first = parse("cos(t)*s", true);
  cfg.cone_second = parse("sin(t)*w", true);
  NodeData nd = node_data(testcurves::beta2(), cfg, 0.6, 0.2, 1.1);
  CHECK(std::abs(inner(nd.offset, nd.offset)) <= 1e-12);
}

TEST_CASE("grid sampling marks degenerate nodes") {
  auto cfg = family(1, 1);
  GridSpec g{0.25, 3, 0, 2 * M_PI, -M_PI / 2, M_PI / 2, 4, 5, 3};
  auto patch = sample_grid(testcurves::beta1(), cfg, g);
  CHECK(patch.points.size() == 60);
  int deg = 0;
  for (char d : patch.degenerate) deg += d;
  CHECK(deg == 40);  // w = +-pi/2 rows
  CHECK(patch.frames.size() == 4);
  CHECK(patch.points[patch.index(1, 2, 1)] == canal_point(testcurves::beta1(), cfg, patch.s[1], patch.t[2], 0));
}

TEST_CASE("radius profiles") {
  auto e = RadiusProfile::parse("s^2");
  CHECK(e.dr(3) == doctest::Approx(6));
  CHECK(e.ddr(3) == doctest::Approx(2));
  CHECK_FALSE(e.is_constant());
  CHECK(RadiusProfile::parse("3").is_constant());
  CHECK(RadiusProfile::constant(2).r(10) == 2);
  // Hermite reproduces a quintic exactly
  std::vector<double> S, R, D, A;
  for (int i = 0; i <= 4; ++i) {
    double s = 0.5 * i;
    S.push_back(s), R.push_back(std::pow(s, 5) + 1), D.push_back(5 * std::pow(s, 4)), A.push_back(20 * std::pow(s, 3));
  }
  auto tab = RadiusProfile::tabulated(S, R, D, A);
  for (double s : {0.1, 0.77, 1.31, 1.99}) {
    CHECK(tab.r(s) == doctest::Approx(std::pow(s, 5) + 1).epsilon(1e-10));
    CHECK(tab.dr(s) == doctest::Approx(5 * std::pow(s, 4)).epsilon(1e-11));
    CHECK(tab.ddr(s) == doctest::Approx(20 * std::pow(s, 3)).epsilon(1e-10));
  }
  try {
    tab.r(2.5);
    FAIL("outside table");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::OutOfDomain);
  }
}
