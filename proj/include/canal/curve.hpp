#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "expr.hpp"
#include "minkowski.hpp"

namespace canal {

inline constexpr double tau_k = 1e-8;
inline constexpr double tol_frame = 1e-8;

enum class DerivativeMode { Symbolic, FiniteDifference };

// Unit speed is checked, never enforced.
class CurveSpec {
 public:
  CurveSpec() = default;
  CurveSpec(std::array<Expr, 4> comps, double s_min, double s_max,
            DerivativeMode mode = DerivativeMode::Symbolic, double h = 1e-4)
      : s_min_(s_min), s_max_(s_max), mode_(mode), h_(h) {
    d_[0] = comps;
    for (int k = 1; k <= 4; ++k)
      for (int i = 0; i < 4; ++i) d_[k][i] = differentiate(d_[k - 1][i]);
    straight_ = detect_straight();
  }

  static CurveSpec parse(const std::array<std::string, 4>& text, double s_min, double s_max,
                         DerivativeMode mode = DerivativeMode::Symbolic, double h = 1e-4) {
    std::array<Expr, 4> c;
    for (int i = 0; i < 4; ++i) c[i] = canal::parse(text[i]);
    return CurveSpec(c, s_min, s_max, mode, h);
  }

  double s_min() const { return s_min_; }
  double s_max() const { return s_max_; }
  DerivativeMode mode() const { return mode_; }
  double step() const { return h_; }
  const Expr& component(int i, int order = 0) const { return d_[order][i]; }
  // beta'' vanishes on the sampled domain
  bool straight() const { return straight_; }

  Vec4 position(double s) const {
    check_domain(s, s);
    return eval_order(0, s);
  }

  // beta and its first four derivatives in another scalar type, for the finite-difference oracle
  template <class T>
  BasicVec4<T> position_as(T s) const {
    check_domain(static_cast<double>(s), static_cast<double>(s));
    return eval_order_as(0, s);
  }
  template <class T>
  std::array<BasicVec4<T>, 4> derivatives_as(T s) const {
    std::array<BasicVec4<T>, 4> out;
    if (mode_ == DerivativeMode::Symbolic) {
      check_domain(static_cast<double>(s), static_cast<double>(s));
      for (int k = 1; k <= 4; ++k) out[k - 1] = eval_order_as(k, s);
      return out;
    }
    for (int k = 1; k <= 4; ++k) {
      Vec4 v = fd(k, static_cast<double>(s));
      for (int i = 0; i < 4; ++i) out[k - 1][i] = v[i];
    }
    return out;
  }

  // beta', ..., beta^(order)
  std::vector<Vec4> derivatives(double s, int order) const {
    if (order < 1 || order > 4) throw Error(ErrorKind::OutOfDomain, "derivative order must be 1..4");
    std::vector<Vec4> out;
    if (mode_ == DerivativeMode::Symbolic) {
      check_domain(s, s);
      for (int k = 1; k <= order; ++k) out.push_back(eval_order(k, s));
      return out;
    }
    for (int k = 1; k <= order; ++k) out.push_back(fd(k, s));
    return out;
  }

 private:
  std::array<std::array<Expr, 4>, 5> d_;
  double s_min_ = 0, s_max_ = 0;
  DerivativeMode mode_ = DerivativeMode::Symbolic;
  double h_ = 1e-4;
  bool straight_ = false;

  void check_domain(double lo, double hi) const {
    if (lo < s_min_ - 1e-12 || hi > s_max_ + 1e-12)
      throw Error(ErrorKind::OutOfDomain, "s=" + std::to_string(lo) + " outside [" +
                                              std::to_string(s_min_) + ", " + std::to_string(s_max_) + "]");
  }

  Vec4 eval_order(int k, double s) const {
    Vec4 v;
    for (int i = 0; i < 4; ++i) v[i] = eval(d_[k][i], s);
    return v;
  }

  template <class T>
  BasicVec4<T> eval_order_as(int k, T s) const {
    BasicVec4<T> v;
    for (int i = 0; i < 4; ++i) v[i] = eval_as(d_[k][i], s);
    return v;
  }

  // O(h^4) central stencils; higher orders get wider steps so roundoff stays below truncation
  Vec4 fd(int k, double s) const {
    static const double scale[5] = {0, 1, 10, 50, 200};
    double h = h_ * scale[k];
    int reach = k <= 2 ? 2 : 3;
    check_domain(s - reach * h, s + reach * h);
    auto f = [&](int m) { return eval_order(0, s + m * h); };
    switch (k) {
      case 1: return (f(-2) - 8.0 * f(-1) + 8.0 * f(1) - f(2)) / (12 * h);
      case 2: return (-1.0 * f(-2) + 16.0 * f(-1) - 30.0 * f(0) + 16.0 * f(1) - f(2)) / (12 * h * h);
      case 3:
        return (f(-3) - 8.0 * f(-2) + 13.0 * f(-1) - 13.0 * f(1) + 8.0 * f(2) - f(3)) / (8 * h * h * h);
      default:
        return (-1.0 * f(-3) + 12.0 * f(-2) - 39.0 * f(-1) + 56.0 * f(0) - 39.0 * f(1) + 12.0 * f(2) - f(3)) /
               (6 * h * h * h * h);
    }
  }

  bool detect_straight() const {
    // k1 identically zero is decided on 200 samples
    const int n = 200;
    for (int i = 0; i < n; ++i) {
      double s = s_min_ + (s_max_ - s_min_) * i / (n - 1);
      try {
        Vec4 b2 = mode_ == DerivativeMode::Symbolic ? eval_order(2, s) : fd_inside(s);
        if (euclid_norm(b2) > tau_k) return false;
      } catch (const Error&) {
        return false;
      }
    }
    return true;
  }
  Vec4 fd_inside(double s) const {
    double m = 2 * h_ * 10;
    s = std::clamp(s, s_min_ + m, s_max_ - m);
    return fd(2, s);
  }
};

struct FrenetFrame {
  std::array<Vec4, 4> F;
  std::array<int, 4> eps{};
  double k1 = 0, k2 = 0, k3 = 0;
  int j = 0;  // 1-based index of the timelike leg
};

namespace detail {

inline int sign_of(double q) { return q < 0 ? -1 : 1; }

inline Vec4 strip(Vec4 v, const FrenetFrame& fr, int upto) {
  Vec4 out = v;
  for (int i = 0; i < upto; ++i) out -= fr.eps[i] * inner(v, fr.F[i]) * fr.F[i];
  return out;
}

inline int timelike_index(const FrenetFrame& fr) {
  int count = 0, j = 0;
  for (int i = 0; i < 4; ++i)
    if (fr.eps[i] < 0) {
      ++count;
      j = i + 1;
    }
  return count == 1 ? j : 0;
}

}  // namespace detail

// Frenet tetrad from beta'..beta''''. The last leg is oriented so the tetrad
// has determinant +1, which is what makes k3 > 0 on the helices of section 4.
inline FrenetFrame frenet(const CurveSpec& c, double s) {
  auto d = c.derivatives(s, 4);
  FrenetFrame fr;
  auto leg = [&](const Vec4& v, const char* what) -> Vec4 {
    double q = inner(v, v);
    if (std::abs(q) <= tau_null && euclid_norm(v) > tau_k)
      throw Error(ErrorKind::NullResidual, std::string(what) + " residual is null");
    if (std::sqrt(std::abs(q)) <= tau_k) throw Error(ErrorKind::FrameDegenerate, std::string(what) + " vanishes");
    return v;
  };

  fr.F[0] = d[0];
  fr.eps[0] = detail::sign_of(inner(d[0], d[0]));
  if (causal_character(d[0]) == CausalCharacter::Null) throw Error(ErrorKind::NullResidual, "tangent is null");

  Vec4 n2 = leg(d[1], "curvature");
  fr.k1 = norm(n2);
  fr.F[1] = n2 / fr.k1;
  fr.eps[1] = detail::sign_of(inner(n2, n2));

  Vec4 n3 = leg(detail::strip(d[2], fr, 2), "torsion");
  double len3 = norm(n3);
  fr.k2 = len3 / fr.k1;
  if (fr.k2 <= tau_k) throw Error(ErrorKind::FrameDegenerate, "second curvature vanishes");
  fr.F[2] = n3 / len3;
  fr.eps[2] = detail::sign_of(inner(n3, n3));

  fr.F[3] = normalize(triple_cross(fr.F[0], fr.F[1], fr.F[2]));
  if (det4(fr.F) < 0) fr.F[3] = -fr.F[3];
  fr.eps[3] = detail::sign_of(inner(fr.F[3], fr.F[3]));
  fr.k3 = fr.eps[3] * inner(d[3], fr.F[3]) / (fr.k1 * fr.k2);

  fr.j = detail::timelike_index(fr);
  if (fr.j == 0) throw Error(ErrorKind::NullResidual, "frame does not have exactly one timelike leg");
  return fr;
}

// Constant frame along a straight line, completed from e1..e4 in order.
inline FrenetFrame frame_for_line(const CurveSpec& c, double s) {
  FrenetFrame fr;
  Vec4 t = c.derivatives(s, 1)[0];
  if (causal_character(t) == CausalCharacter::Null) throw Error(ErrorKind::NullResidual, "line direction is null");
  fr.F[0] = normalize(t);
  fr.eps[0] = detail::sign_of(inner(t, t));
  int n = 1;
  for (int e = 0; e < 4 && n < 4; ++e) {
    Vec4 v = detail::strip(basis(e), fr, n);
    if (std::abs(inner(v, v)) < 1e-6) continue;
    fr.F[n] = normalize(v);
    fr.eps[n] = detail::sign_of(inner(v, v));
    ++n;
  }
  if (det4(fr.F) < 0) fr.F[3] = -fr.F[3];
  fr.j = detail::timelike_index(fr);
  return fr;
}

// legs of frame_at in another scalar type; no checks, frame_at has done them
template <class T>
std::array<BasicVec4<T>, 4> frame_legs_as(const CurveSpec& c, T s) {
  using std::sqrt, std::abs;
  std::array<BasicVec4<T>, 4> F;
  if (c.straight()) {
    FrenetFrame fr = frame_for_line(c, static_cast<double>(s));
    for (int a = 0; a < 4; ++a)
      for (int i = 0; i < 4; ++i) F[a][i] = fr.F[a][i];
    return F;
  }
  auto d = c.derivatives_as(s);
  F[0] = d[0];
  T e0 = inner(d[0], d[0]) < 0 ? -1 : 1;
  F[1] = d[1] / sqrt(abs(inner(d[1], d[1])));
  T e1 = inner(F[1], F[1]) < 0 ? -1 : 1;
  BasicVec4<T> n3 = d[2] - (e0 * inner(d[2], F[0])) * F[0] - (e1 * inner(d[2], F[1])) * F[1];
  F[2] = n3 / sqrt(abs(inner(n3, n3)));
  F[3] = normalize(triple_cross(F[0], F[1], F[2]));
  // same orientation as frenet()
  T det = 0;
  for (int i = 0; i < 4; ++i) {
    int m[3], n = 0;
    for (int k = 0; k < 4; ++k)
      if (k != i) m[n++] = k;
    T minor = detail::det3(F[1][m[0]], F[1][m[1]], F[1][m[2]], F[2][m[0]], F[2][m[1]], F[2][m[2]], F[3][m[0]],
                           F[3][m[1]], F[3][m[2]]);
    det += (i % 2 == 0 ? F[0][i] : -F[0][i]) * minor;
  }
  if (det < 0) F[3] = -F[3];
  return F;
}

// frame used by the canal constructions: constant frame on lines, Frenet otherwise
inline FrenetFrame frame_at(const CurveSpec& c, double s) {
  return c.straight() ? frame_for_line(c, s) : frenet(c, s);
}

struct UnitSpeedReport {
  double max_deviation = 0;
  bool pass = false;
  int samples = 0;
};

inline UnitSpeedReport verify_unit_speed(const CurveSpec& c, int n_samples) {
  UnitSpeedReport rep;
  rep.samples = std::max(n_samples, 2);
  double tol = c.mode() == DerivativeMode::Symbolic ? 1e-10 : 1e-6;
  double margin = c.mode() == DerivativeMode::Symbolic ? 0 : 2 * c.step();
  for (int i = 0; i < rep.samples; ++i) {
    double s = c.s_min() + margin + (c.s_max() - c.s_min() - 2 * margin) * i / (rep.samples - 1);
    Vec4 d = c.derivatives(s, 1)[0];
    // relative to the Euclidean size: cosh^2 - sinh^2 loses digits far out
    double scale = std::max(1.0, inner(d, d) + 2 * d[0] * d[0]);
    rep.max_deviation = std::max(rep.max_deviation, std::abs(std::abs(inner(d, d)) - 1) / scale);
  }
  rep.pass = rep.max_deviation <= tol;
  return rep;
}

}  // namespace canal
