#include <doctest.h>

#include <cmath>

#include "canal/curvature.hpp"
#include "curves.hpp"

using namespace canal;
using testcurves::family;

namespace {

struct Golden {
  int j, lambda;
  double s, t, w;
  double K, H, mu3, det_g;
};

// exact values from a symbolic evaluation of the construction
const Golden goldens[] = {
    {1, 1, 1, 0, 0, 0.087868698009786782146, 0.45049159734638237619, 0.35147479203914712858, -22665.727652959385668},
    {1, -1, 1, 0, 0, -0.18582575694955840007, -0.58110100926607786675, -0.74330302779823360026, 1824.4363997054361562},
    {3, 1, 1, 0, 0, 0, -1.0 / 3, 0, -432},
    {3, -1, 1, 0, 0, 0, 1.0 / 3, 0, 2000},
    {1, 1, 1.2, 0.5, 0.3, 0.050941148468982846463, 0.37558478283822484299, 0.29342101518134119563, NAN},
    {1, -1, 1.2, 0.5, 0.3, -0.10722356919147417707, -0.48364703062540819776, -0.61760775854289125995, NAN},
    {3, 1, 1.2, 0.5, 0.3, -0.048201011937425001002, -0.37032372069763377970, -0.27763782875956800577, NAN},
    {3, -1, 1.2, 0.5, 0.3, 0.20461813411877984298, 0.67064459528583507630, 1.1786004525241718956, NAN},
};

}  // namespace

TEST_CASE("closed-form goldens") {
  for (const auto& g : goldens) {
    CAPTURE(g.j);
    CAPTURE(g.lambda);
    CAPTURE(g.s);
    auto rep = closed_form(testcurves::by_type(g.j), family(g.j, g.lambda), g.s, g.t, g.w);
    CHECK(std::abs(rep.K - g.K) <= 1e-9);
    CHECK(std::abs(rep.H - g.H) <= 1e-9);
    CHECK(std::abs(rep.mu[2] - g.mu3) <= 1e-9);
    // c = eps3*eps4*lambda^j: +lambda on the first helix, -lambda on the second
    double r = 2 * g.s, c = g.j == 1 ? g.lambda : -g.lambda;
    CHECK(rep.mu[0] == doctest::Approx(c / r).epsilon(1e-10));
    CHECK(rep.mu[1] == doctest::Approx(c / r).epsilon(1e-10));
    if (!std::isnan(g.det_g)) CHECK(rep.det_g == doctest::Approx(g.det_g).epsilon(1e-12));
    CHECK(inner(rep.N, rep.N) == doctest::Approx(g.lambda).epsilon(1e-10));
  }
}

TEST_CASE("numeric route reproduces the goldens") {
  for (const auto& g : goldens) {
    CAPTURE(g.j);
    CAPTURE(g.lambda);
    auto rep = numeric(testcurves::by_type(g.j), family(g.j, g.lambda), g.s, g.t, g.w);
    CHECK(std::abs(rep.K - g.K) <= 1e-4);
    CHECK(std::abs(rep.H - g.H) <= 1e-4);
    CHECK(std::abs(rep.mu[2] - g.mu3) <= 1e-4);
  }
}

TEST_CASE("fundamental forms of the first example at the pattern origin") {
  auto rep = closed_form(testcurves::beta1(), family(1, 1), 1, 0, 0);
  Mat3 g, h;
  g << 80.47853801045868, 52.37229365663817, 0, 52.37229365663817, 20, 0, 0, 0, 20;
  h << 48.65534878832896, 26.186146828319085, 0, 26.186146828319085, 10, 0, 0, 0, 10;
  CHECK((rep.g - g).cwiseAbs().maxCoeff() <= 1e-9);
  CHECK((rep.h - h).cwiseAbs().maxCoeff() <= 1e-9);
  CHECK(rep.S(1, 0) == doctest::Approx(0.38893029).epsilon(1e-7));
  CHECK(rep.S(1, 1) == doctest::Approx(0.5));
  CHECK(rep.S(2, 2) == doctest::Approx(0.5));
  auto neg = closed_form(testcurves::beta1(), family(1, -1), 1, 0, 0);
  CHECK(neg.S(1, 0) == doctest::Approx(0.637116881).epsilon(1e-7));
  auto b2 = closed_form(testcurves::beta2(), family(3, 1), 1, 0, 0);
  CHECK(b2.S(1, 0) == doctest::Approx(0.21821789).epsilon(1e-7));
  CHECK(b2.S(2, 0) == doctest::Approx(-0.188982237).epsilon(1e-7));
  auto b2n = closed_form(testcurves::beta2(), family(3, -1), 1, 0, 0);
  CHECK(b2n.S(1, 0) == doctest::Approx(2.492523298).epsilon(1e-7));
  CHECK(b2n.S(2, 0) == doctest::Approx(0.188982237).epsilon(1e-7));
}

TEST_CASE("closed form matches the numeric route on every family and branch") {
  const char* radii[] = {"2*s", "1 + s^2", "3 - 0.2*s"};
  for (int j = 1; j <= 4; ++j)
    for (int L : {1, -1})
      for (int sigma : {1, -1})
        for (const char* rad : radii) {
          if (j == 1 && L == -1 && std::string(rad) == "3 - 0.2*s") continue;
          auto cfg = family(j, L, rad, sigma);
          const auto& c = testcurves::by_type(j);
          if (!validate_config(c, cfg, 0.5, 1.5).ok) continue;
          CAPTURE(j);
          CAPTURE(L);
          CAPTURE(sigma);
          CAPTURE(rad);
          for (double s : {0.6, 1.3})
            for (double t : {-0.5, 0.8})
              for (double w : {-0.3, 0.6}) {
                if (!std::isfinite(s)) continue;
                auto cf = closed_form(c, cfg, s, t, w);
                auto nu = numeric(c, cfg, s, t, w);
                double scale = 1 + std::abs(cf.K) + std::abs(cf.H);
                CHECK(std::abs(cf.K - nu.K) <= 1e-4 * scale);
                CHECK(std::abs(cf.H - nu.H) <= 1e-4 * scale);
                CHECK(nu.eps_N == L);
              }
        }
}

TEST_CASE("alternate form agrees with the numeric route") {
  auto cfg = family(2, 1, "1 + 0.5*s");
  for (double t : {-0.4, 0.5})
    for (double w : {0.3, -0.8}) {
      auto cf = closed_form(testcurves::j2(), cfg, 0.7, t, w);
      auto nu = numeric(testcurves::j2(), cfg, 0.7, t, w);
      CHECK(std::abs(cf.K - nu.K) <= 1e-4 * (1 + std::abs(cf.K)));
      CHECK(std::abs(cf.H - nu.H) <= 1e-4 * (1 + std::abs(cf.H)));
      CHECK(cf.det_g == doctest::Approx(nu.det_g).epsilon(1e-5));
    }
}

TEST_CASE("tubular tables") {
  const double k1 = std::sqrt(7.0);
  for (int j = 1; j <= 4; ++j)
    for (int L : {1, -1}) {
      if (j == 1 && L == -1) continue;
      auto cfg = family(j, L, "0.3");
      const auto& c = testcurves::by_type(j);
      double kk = frenet(c, 0.4).k1;
      if (j == 1 || j == 3) CHECK(kk == doctest::Approx(k1));
      for (double t : {-0.6, 0.4})
        for (double w : {-0.2, 0.7}) {
          auto tab = tubular_curvatures(j, L, 0.3, kk, t, w);
          auto cf = closed_form(c, cfg, 0.4, t, w);
          auto nu = numeric(c, cfg, 0.4, t, w);
          CAPTURE(j);
          CAPTURE(L);
          CHECK(tab.K == doctest::Approx(cf.K).epsilon(1e-10));
          CHECK(tab.H == doctest::Approx(cf.H).epsilon(1e-10));
          CHECK(std::abs(tab.K - nu.K) <= 1e-4 * (1 + std::abs(tab.K)));
          CHECK(std::abs(tab.H - nu.H) <= 1e-4 * (1 + std::abs(tab.H)));
        }
    }
  try {
    tubular_curvatures(1, -1, 1, 1, 0, 0);
    FAIL("T^{1;-1}");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InadmissibleConfig);
  }
  try {
    tubular_curvatures(1, 1, 1, -1, 0, 0);
    FAIL("focal");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::PoleAtNode);
  }
}

TEST_CASE("shape operator helpers") {
  Mat3 g = Mat3::Identity(), h;
  h << 2, 0, 0, 0, 1, 0, 0, 0, 1;
  auto mu = principal_curvatures(shape_operator(g, h));
  CHECK(mu[0] == 1);
  CHECK(mu[1] == 1);
  CHECK(mu[2] == 2);
  Mat3 rot;
  rot << 0, -1, 0, 1, 0, 0, 0, 0, 1;
  try {
    principal_curvatures(rot);
    FAIL("complex");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ComplexEigenvalues);
  }
  try {
    shape_operator(Mat3::Zero(), h);
    FAIL("singular");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SingularMetric);
  }
  try {
    closed_form(testcurves::beta2(), family(3, 0), 1, 0, 0);
    FAIL("null family");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InadmissibleConfig);
  }
}
