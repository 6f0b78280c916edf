#pragma once

#include <Eigen/Dense>
#include <boost/multiprecision/float128.hpp>
#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <type_traits>
#include <utility>

#include "canal.hpp"

namespace canal {

using Mat3 = Eigen::Matrix3d;

enum class Route { ClosedForm, Numeric };

struct CurvatureReport {
  Mat3 g = Mat3::Zero(), h = Mat3::Zero(), S = Mat3::Zero();
  Vec4 N;
  int eps_N = 1;
  double K = 0, H = 0;
  std::array<double, 3> mu{};
  double f = 0, A = 0;
  double det_g = 0;
  Route route = Route::ClosedForm;
};

// S = g^-1 h
inline Mat3 shape_operator(const Mat3& g, const Mat3& h) {
  double scale = g.cwiseAbs().maxCoeff();
  if (std::abs(g.determinant()) <= 1e-12 * scale * scale * scale)
    throw Error(ErrorKind::SingularMetric, "first fundamental form is singular");
  return g.partialPivLu().solve(h);
}

// eigenvalues of a general 3x3, ordered (double root, double root, simple root)
inline std::array<double, 3> principal_curvatures(const Mat3& S) {
  Eigen::EigenSolver<Mat3> es(S, false);
  auto ev = es.eigenvalues();
  std::array<double, 3> v{};
  for (int i = 0; i < 3; ++i) {
    double scale = 1 + std::abs(ev[i]);
    if (std::abs(ev[i].imag()) > 1e-7 * scale)
      throw Error(ErrorKind::ComplexEigenvalues, "shape operator has complex eigenvalues");
    v[i] = ev[i].real();
  }
  // the closest pair is the double root
  int odd = 0;
  double best = std::abs(v[1] - v[2]);
  if (std::abs(v[0] - v[2]) < best) best = std::abs(v[0] - v[2]), odd = 1;
  if (std::abs(v[0] - v[1]) < best) odd = 2;
  std::array<double, 3> out{};
  int n = 0;
  for (int i = 0; i < 3; ++i)
    if (i != odd) out[n++] = v[i];
  std::sort(out.begin(), out.begin() + 2);
  out[2] = v[odd];
  return out;
}

namespace detail {

inline double fip(const FrenetFrame& fr, const std::array<double, 4>& x, const std::array<double, 4>& y) {
  double v = 0;
  for (int i = 0; i < 4; ++i) v += fr.eps[i] * x[i] * y[i];
  return v;
}

// derivative along s of sum x_i F_i when the coefficients are frozen
inline std::array<double, 4> frenet_turn(const FrenetFrame& fr, const std::array<double, 4>& x) {
  const auto& e = fr.eps;
  return {e[2] * e[3] * fr.k1 * x[1], fr.k1 * x[0] + e[0] * e[3] * fr.k2 * x[2],
          fr.k2 * x[1] + e[0] * e[1] * fr.k3 * x[3], fr.k3 * x[2]};
}

}  // namespace detail

// g and h from the exact tangent vectors written in frame coordinates
inline std::pair<Mat3, Mat3> frame_forms(const NodeData& nd, int lambda) {
  const auto& fr = nd.fr;
  const int e1 = fr.eps[0];
  double drho = (nd.variant == Variant::Standard ? 1.0 : -1.0) * nd.dr * nd.ddr / nd.rho;
  std::array<double, 4> V{}, Vs{}, Vt{}, Vw{};
  V[0] = -lambda * e1 * nd.dr;
  for (int m = 1; m < 4; ++m) V[m] = nd.rho * nd.a[m];
  auto turn = detail::frenet_turn(fr, V);
  for (int m = 0; m < 4; ++m) {
    Vs[m] = (m == 0 ? -lambda * e1 * nd.ddr : drho * nd.a[m]) + turn[m];
    Vt[m] = nd.rho * nd.a_t[m];
    Vw[m] = nd.rho * nd.a_w[m];
  }
  std::array<std::array<double, 4>, 3> C, Vd = {Vs, Vt, Vw};
  for (int m = 0; m < 4; ++m) {
    C[0][m] = (m == 0 ? 1.0 : 0.0) + nd.dr * V[m] + nd.r * Vs[m];
    C[1][m] = nd.r * Vt[m];
    C[2][m] = nd.r * Vw[m];
  }
  Mat3 g, h;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      g(a, b) = detail::fip(fr, C[a], C[b]);
      h(a, b) = nd.c * detail::fip(fr, C[a], Vd[b]);
    }
  h = 0.5 * (h + h.transpose()).eval();
  return {g, h};
}

namespace detail {

// coefficient tables of the standard families; R carries the branch sign
inline void standard_tables(int j, int l, double r, double rp, double rpp, double k1, double k2, double k3, double t,
                            double w, double R, Mat3& g, Mat3& h, double& S11) {
  using std::cos, std::sin, std::cosh, std::sinh;
  double q = R * R;
  g.setZero();
  h.setZero();
  if (j == 1) {
    double ct = cos(t), st = sin(t), cw = cos(w), sw = sin(w);
    g(0, 0) = q / 4 * (r * r * (4 * k2 * k2 * cw * cw - 4 * k2 * k3 * ct * sin(2 * w) -
                                (2 * cos(2 * t) * cw * cw + cos(2 * w) - 3) * k3 * k3) -
                       4 * l) -
              l * r * r * k1 * k1 * (ct * ct * cw * cw + (l * ct * ct * cw * cw - l) * rp * rp) - 2 * l * r * rpp -
              l * r * r * rpp * rpp / q - 2 * l * k1 * r * cw / R * ((l * ct + k2 * r * rp * st) * q + l * r * rpp * ct);
    g(0, 1) = r * r * (k2 * q * cw - l * k1 * rp * R * st - k3 * q * ct * sw) * cw;
    g(0, 2) = r * r * (k3 * q * st - l * k1 * rp * R * ct * sw);
    g(1, 1) = q * r * r * cw * cw;
    g(2, 2) = q * r * r;
    h(0, 0) = l * r * q / 4 *
                  (4 * k2 * k2 * cw * cw - (cos(2 * t) + 2 * ct * ct * cos(2 * w) - 3) * k3 * k3 -
                   4 * k2 * k3 * ct * sin(2 * w)) -
              l * k1 * k1 * r * (l * ct * ct * cw * cw + (ct * ct * cw * cw - 1) * rp * rp) - rpp - r * rpp * rpp / q -
              l * k1 * cw / R * ((ct + 2 * l * k2 * r * rp * st) * q + 2 * r * rpp * ct);
    h(0, 1) = l * r * (cw * k2 * q - l * k1 * st * rp * R - ct * k3 * sw * q) * cw;
    h(0, 2) = l * r * (k3 * q * st - l * k1 * rp * R * ct * sw);
    h(1, 1) = l * r * q * cw * cw;
    h(2, 2) = l * r * q;
    double den = q + r * (l * k1 * R * ct * cw + rpp);
    S11 = (l * k1 * k1 * r * q * ct * ct * cw * cw + l * rpp * (q + r * rpp) + k1 * R * (q + 2 * r * rpp) * ct * cw) /
          (den * den);
  } else if (j == 2) {
    double ct = cosh(t), st = sinh(t), cw = cosh(w), sw = sinh(w);
    g(0, 0) = 0.25 * (4 - 4 * l * rp * rp +
                      r * r * q *
                          ((cosh(2 * t) + 2 * ct * ct * cosh(2 * w) - 3) * k3 * k3 +
                           (cosh(2 * t) + 2 * cosh(2 * w) * st * st + 3) * k2 * k2 - 4 * k2 * k3 * cw * cw * sinh(2 * t))) +
              r * r * k1 * k1 * ((ct * ct * cw * cw - 1) * rp * rp - l * ct * ct * cw * cw) - 2 * l * r * rpp -
              l * r * r * rpp * rpp / q + 2 * k1 * r / R * ((ct * cw + l * k2 * r * rp * sw) * q + r * rpp * ct * cw);
    g(0, 1) = r * r * (l * (k1 * rp * R - k2 * l * q * sw) * st + k3 * q * ct * sw) * cw;
    g(0, 2) = r * r * (l * k1 * rp * R * ct * sw + q * (k2 * ct - k3 * st));
    g(1, 1) = q * r * r * cw * cw;
    g(2, 2) = r * r * q;
    h(0, 0) = 0.25 * (r * q *
                          ((cosh(2 * t) + 2 * ct * ct * cosh(2 * w) - 3) * k3 * k3 - 4 * k2 * k3 * cw * cw * sinh(2 * t) +
                           k2 * k2 * (3 + cosh(2 * t) + 2 * st * st * cosh(2 * w))) -
                      4 * l * rpp + k1 * k1 * r * (rp * rp * (cosh(2 * t) + 2 * ct * ct * cosh(2 * w) - 3) - 4 * l * ct * ct * cw * cw) +
                      4 * k1 / R * ((ct * cw + 2 * l * k2 * r * rp * sw) * q + 2 * r * rpp * ct * cw) -
                      4 * l * r * rpp * rpp / q);
    h(0, 1) = r * (l * k1 * rp * R * st + q * (k3 * ct - k2 * st) * sw) * cw;
    h(0, 2) = r * (l * k1 * rp * R * ct * sw + q * (k2 * ct - k3 * st));
    h(1, 1) = r * q * cw * cw;
    h(2, 2) = r * q;
    double den = q + r * (-l * k1 * R * ct * cw + rpp);
    S11 = (k1 * k1 * r * q * ct * ct * cw * cw + rpp * (q + r * rpp) - l * k1 * R * (q + 2 * r * rpp) * ct * cw) /
          (den * den);
  } else if (j == 3) {
    double ct = cosh(t), st = sinh(t), cw = cosh(w), sw = sinh(w);
    g(0, 0) = q / 4 *
                  (r * r * (k3 * k3 * (3 + cosh(2 * t) + 2 * cosh(2 * w) * st * st) + 4 * k2 * k2 * cw * cw -
                            4 * k2 * k3 * st * sinh(2 * w)) -
                   4 * l) +
              r * r * k1 * k1 * (rp * rp * (1 + st * st * cw * cw) - l * st * st * cw * cw) - 2 * l * r * rpp -
              l * r * r * rpp * rpp / q - 2 * k1 * r * cw / R * (q * (st + l * k2 * r * rp * ct) + r * rpp * st);
    g(0, 1) = r * r * (k2 * q * cw - l * k1 * rp * R * ct - k3 * q * st * sw) * cw;
    g(0, 2) = r * r * (k3 * q * ct - l * k1 * rp * R * st * sw);
    g(1, 1) = q * r * r * cw * cw;
    g(2, 2) = q * r * r;
    h(0, 0) = 2 * k1 * k2 * r * rp * R * ct * cw - l * k2 * k2 * r * q * cw * cw -
              l * k3 * k3 * r * q / 4 * (3 + cosh(2 * t) + 2 * st * st * cosh(2 * w)) +
              l * k2 * k3 * r * q * st * sinh(2 * w) +
              k1 * k1 * r / 4 * (4 * cw * cw * st * st - l * rp * rp * (3 + cosh(2 * t) + 2 * st * st * cosh(2 * w))) + rpp +
              r * rpp * rpp / q + l / R * (k1 * (q + 2 * r * rpp) * cw * st);
    h(0, 1) = r * (k1 * rp * R * ct - l * q * (k2 * cw - k3 * st * sw)) * cw;
    h(0, 2) = r * (k1 * rp * R * st * sw - l * k3 * q * ct);
    h(1, 1) = -l * r * q * cw * cw;
    h(2, 2) = -l * r * q;
    double den = q + r * (l * k1 * R * st * cw + rpp);
    S11 = -l * (k1 * k1 * r * q * st * st * cw * cw + rpp * (q + r * rpp) + l * k1 * R * (q + 2 * r * rpp) * st * cw) /
          (den * den);
  } else {
    double ct = cosh(t), st = sinh(t), cw = cosh(w), sw = sinh(w);
    g(0, 0) = q / 4 *
                  (r * r * (k2 * k2 * (2 * cosh(2 * t) * cw * cw + cosh(2 * w) - 3) + 4 * k3 * k3 * cw * cw +
                            4 * k2 * k3 * ct * sinh(2 * w)) -
                   4 * l) +
              r * r * k1 * k1 * (rp * rp * cw * cw - l * sw * sw) - 2 * l * r * rpp - l * r * r * rpp * rpp / q +
              2 * l * k1 * r / R * (k2 * r * rp * q * cw * st - l * (q + r * rpp) * sw);
    g(0, 1) = r * r * q * (k2 * ct * sw + k3 * cw) * cw;
    g(0, 2) = -r * r * (l * k1 * rp * R * cw + k2 * q * st);
    g(1, 1) = r * r * q * cw * cw;
    g(2, 2) = r * r * q;
    h(0, 0) = -r * q / 4 * (k2 * k2 * (cosh(2 * t) + 2 * ct * ct * cosh(2 * w) - 3) + 4 * k3 * (k3 * cw * cw + k2 * ct * sinh(2 * w))) +
              l * k1 * k1 * r * (sw * sw - l * rp * rp * cw * cw) + l * rpp + l * r * rpp * rpp / q +
              k1 / R * ((sw - 2 * l * k2 * r * rp * st * cw) * q + 2 * r * rpp * sw);
    h(0, 1) = -r * (k3 * cw + k2 * ct * sw) * q * cw;
    h(0, 2) = r * (l * k1 * rp * R * cw + k2 * q * st);
    h(1, 1) = -r * q * cw * cw;
    h(2, 2) = -r * q;
    double den = q + r * (l * k1 * R * sw + rpp);
    S11 = (-k1 * k1 * r * q * sw * sw - rpp * (q + r * rpp) - l * k1 * R * (q + 2 * r * rpp) * sw) / (den * den);
  }
  g(1, 0) = g(0, 1), g(2, 0) = g(0, 2);
  h(1, 0) = h(0, 1), h(2, 0) = h(0, 2);
}

}  // namespace detail

// simple principal curvature and its denominator; kappa = -1 selects the alternate form
struct MuParts {
  double num = 0, D = 0;
};

inline MuParts simple_root_parts(const NodeData& nd, int lambda) {
  double kap = nd.variant == Variant::Standard ? 1.0 : -1.0;
  double r = nd.r, r2 = nd.ddr, Q = nd.Q, k1 = nd.fr.k1, f = nd.f, rho = nd.rho;
  double e2l = nd.fr.eps[1] * lambda;
  MuParts p;
  p.D = Q + kap * e2l * r * k1 * f * rho + kap * r * r2;
  p.num = nd.c * (r * k1 * k1 * f * f * Q + kap * r2 * (Q + kap * r * r2) + kap * e2l * k1 * f * rho * (Q + 2 * kap * r * r2));
  return p;
}

// renormalized in extended precision: on hyperbolic curves the entries grow
// like cosh s and a double inner product cancels
inline Vec4 unit_normal_closed(const NodeData& nd) {
  BasicVec4<long double> n;
  for (int i = 0; i < 4; ++i) n[i] = -nd.c * static_cast<long double>(nd.offset[i]);
  n = n / std::sqrt(std::abs(inner(n, n)));
  Vec4 out;
  for (int i = 0; i < 4; ++i) out[i] = static_cast<double>(n[i]);
  return out;
}

inline CurvatureReport closed_form(const CurveSpec& curve, const CanalConfig& cfg, double s, double t, double w) {
  if (cfg.lambda == 0) throw Error(ErrorKind::InadmissibleConfig, "null-cone canals carry no curvature formulas");
  NodeData nd = node_data(curve, cfg, s, t, w);
  CurvatureReport rep;
  rep.route = Route::ClosedForm;
  rep.f = nd.f;
  rep.A = nd.A;
  if (std::abs(nd.A) < degenerate_tol) throw Error(ErrorKind::DegenerateNode, "metric factor vanishes");
  rep.N = unit_normal_closed(nd);
  rep.eps_N = cfg.lambda;

  auto mp = simple_root_parts(nd, cfg.lambda);
  if (std::abs(mp.D) < 1e-12 * (1 + nd.Q)) throw Error(ErrorKind::SingularMetric, "focal node");
  double mu1 = nd.c / nd.r, mu3 = mp.num / (mp.D * mp.D);
  rep.mu = {mu1, mu1, mu3};
  rep.K = mp.num / (nd.r * nd.r * mp.D * mp.D);
  rep.H = (2 * nd.c / nd.r + mu3) / 3;
  double r4 = nd.r * nd.r * nd.r * nd.r;
  rep.det_g = -cfg.lambda * nd.A * nd.A * r4 * nd.Q * mp.D * mp.D;

  double S11 = mu3;
  if (nd.variant == Variant::Standard) {
    detail::standard_tables(cfg.j, cfg.lambda, nd.r, nd.dr, nd.ddr, nd.fr.k1, nd.fr.k2, nd.fr.k3, t, w, nd.rho, rep.g,
                            rep.h, S11);
  } else {
    std::tie(rep.g, rep.h) = frame_forms(nd, cfg.lambda);
  }
  // the shape operator has one non-trivial column, the rest is mu1 on the diagonal
  rep.S.setZero();
  rep.S(0, 0) = S11;
  rep.S(1, 0) = (rep.h(0, 1) - rep.g(0, 1) * S11) / rep.g(1, 1);
  rep.S(2, 0) = (rep.h(0, 2) - rep.g(0, 2) * S11) / rep.g(2, 2);
  rep.S(1, 1) = rep.S(2, 2) = mu1;
  return rep;
}

// partials by 5-point central differences of P(i, j, k), the point at
// (s + i h, t + j h, w + k h); mixed partials nested
template <class V>
struct BasicPartials {
  std::array<V, 3> d1;
  std::array<std::array<V, 3>, 3> d2;
};

template <class T, class PointFn>
BasicPartials<BasicVec4<T>> point_partials(PointFn&& P, T h) {
  using V = BasicVec4<T>;
  static const int off[4] = {-2, -1, 1, 2};
  static const int wt[4] = {1, -8, 8, -1};
  static const int wt2[4] = {-1, 16, 16, -1};
  BasicPartials<V> p;
  const V c0 = P(0, 0, 0);
  for (int a = 0; a < 3; ++a) {
    V d1, d2;
    for (int m = 0; m < 4; ++m) {
      int u[3] = {0, 0, 0};
      u[a] = off[m];
      V q = P(u[0], u[1], u[2]);
      d1 += T(wt[m]) * q;
      d2 += T(wt2[m]) * q;
    }
    p.d1[a] = d1 / (12 * h);
    p.d2[a][a] = (d2 - T(30) * c0) / (12 * h * h);
  }
  for (int a = 0; a < 3; ++a)
    for (int b = a + 1; b < 3; ++b) {
      V acc;
      for (int m = 0; m < 4; ++m)
        for (int n = 0; n < 4; ++n) {
          int u[3] = {0, 0, 0};
          u[a] = off[m], u[b] = off[n];
          acc += T(wt[m] * wt[n]) * P(u[0], u[1], u[2]);
        }
      p.d2[a][b] = p.d2[b][a] = acc / (144 * h * h);
    }
  return p;
}

inline constexpr double fd_step = 1e-4;

// Finite-difference oracle. At h = 1e-4 the second differences magnify the
// roundoff of the point function by ~1e8, and the frame normalizations on
// hyperbolic curves lose a few more digits, so the point is evaluated in quad
// precision. Everything that depends on s alone is computed once per stencil row.
inline CurvatureReport numeric(const CurveSpec& curve, const CanalConfig& cfg, double s, double t, double w,
                               double h = fd_step) {
  using Q = boost::multiprecision::float128;
  if (cfg.lambda == 0) throw Error(ErrorKind::InadmissibleConfig, "null-cone canals carry no curvature formulas");
  NodeData nd = node_data(curve, cfg, s, t, w);
  if (std::abs(nd.A) < degenerate_tol) throw Error(ErrorKind::DegenerateNode, "metric factor vanishes");
  const Q H = h, S0 = s, T0 = t, W0 = w;
  std::array<Slice<Q>, 5> rows;
  for (int i = -2; i <= 2; ++i) rows[i + 2] = slice_as(curve, cfg, Q(S0 + i * H));
  auto P = [&](int i, int j, int k) {
    return slice_point(rows[i + 2], cfg.j, nd.variant, Q(T0 + j * H), Q(W0 + k * H));
  };
  auto pp = point_partials<Q>(P, H);

  CurvatureReport rep;
  rep.route = Route::Numeric;
  rep.f = nd.f;
  rep.A = nd.A;
  BasicVec4<Q> n = triple_cross(pp.d1[0], pp.d1[1], pp.d1[2]);
  if (static_cast<double>(euclid_norm(n)) < 1e-12) throw Error(ErrorKind::RankDeficient, "tangent vectors are dependent");
  n = normalize(n);
  Vec4 ncf = unit_normal_closed(nd);
  Q dot = 0;
  for (int i = 0; i < 4; ++i) dot += n[i] * ncf[i];
  if (dot < 0) n = -n;
  for (int i = 0; i < 4; ++i) rep.N[i] = static_cast<double>(n[i]);
  rep.eps_N = inner(n, n) < 0 ? -1 : 1;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      rep.g(a, b) = static_cast<double>(inner(pp.d1[a], pp.d1[b]));
      rep.h(a, b) = static_cast<double>(inner(pp.d2[a][b], n));
    }
  rep.det_g = rep.g.determinant();
  rep.S = shape_operator(rep.g, rep.h);
  rep.K = rep.h.determinant() / rep.det_g;
  rep.H = rep.S.trace() / 3;
  rep.mu = principal_curvatures(rep.S);
  return rep;
}

struct TubularCurvature {
  double K = 0, H = 0;
};

// closed forms for constant radius on the "+" branch
inline TubularCurvature tubular_curvatures(int j, int lambda, double r, double k1, double t, double w) {
  using std::cos, std::cosh, std::sinh;
  if (j == 1 && lambda == -1) throw Error(ErrorKind::InadmissibleConfig, "there is no tubular hypersurface T^{1;-1}");
  if (j < 1 || j > 4 || (lambda != 1 && lambda != -1))
    throw Error(ErrorKind::InadmissibleConfig, "unknown tubular family");
  double f = 0, sgn = 1;  // sgn: sign in front of r*k1*f in the denominator
  if (j == 1) f = cos(t) * cos(w);
  else if (j == 2) f = lambda == 1 ? cosh(t) * sinh(w) : cosh(t) * cosh(w);
  else if (j == 3) f = lambda == 1 ? sinh(t) * sinh(w) : sinh(t) * cosh(w), sgn = -1;
  else f = lambda == 1 ? cosh(w) : sinh(w), sgn = -1;
  double den = 1 + sgn * r * k1 * f;
  if (std::abs(den) < 1e-12) throw Error(ErrorKind::PoleAtNode, "focal point of the tube");
  TubularCurvature out;
  if (sgn > 0) {
    out.K = k1 * f / (r * r * den);
    out.H = (2 + 3 * r * k1 * f) / (3 * r * den);
  } else {
    bool flip = (j == 3 && lambda == -1);  // the T^{3;-1} row is written with the opposite denominators
    out.K = flip ? k1 * f / (r * r * (-den)) : k1 * f / (r * r * den);
    out.H = flip ? (2 - 3 * r * k1 * f) / (3 * r * den) : (2 - 3 * r * k1 * f) / (3 * r * (-den));
  }
  return out;
}

}  // namespace canal
