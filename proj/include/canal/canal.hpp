#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "curve.hpp"
#include "parallel.hpp"

namespace canal {

// r(s) with its first two derivatives
class RadiusProfile {
 public:
  enum class Kind { Expression, Constant, Tabulated };

  RadiusProfile() : RadiusProfile(constant(1.0)) {}

  static RadiusProfile expression(const Expr& r) {
    RadiusProfile p;
    p.kind_ = Kind::Expression;
    p.r_ = r;
    p.dr_ = differentiate(r);
    p.ddr_ = differentiate(p.dr_);
    return p;
  }
  static RadiusProfile parse(const std::string& text) { return expression(canal::parse(text)); }

  static RadiusProfile constant(double c) {
    RadiusProfile p(0);
    p.kind_ = Kind::Constant;
    p.c_ = c;
    return p;
  }

  // Quintic Hermite through (s_i, r_i, r'_i, r''_i). When `slope` is given the
  // derivatives are taken from it, r' = slope(r), r'' = slope_dr(r) * r', which
  // keeps r' twice differentiable across knots.
  static RadiusProfile tabulated(std::vector<double> s, std::vector<double> r, std::vector<double> dr,
                                 std::vector<double> ddr, std::function<double(double)> slope = {},
                                 std::function<double(double)> slope_dr = {}) {
    RadiusProfile p(0);
    p.kind_ = Kind::Tabulated;
    auto t = std::make_shared<Table>();
    t->s = std::move(s);
    t->r = std::move(r);
    t->dr = std::move(dr);
    t->ddr = std::move(ddr);
    t->slope = std::move(slope);
    t->slope_dr = std::move(slope_dr);
    p.table_ = t;
    return p;
  }

  Kind kind() const { return kind_; }
  bool is_constant() const {
    return kind_ == Kind::Constant || (kind_ == Kind::Expression && dr_.is_const(0));
  }

  double r(double s) const {
    switch (kind_) {
      case Kind::Constant: return c_;
      case Kind::Expression: return eval(r_, s);
      case Kind::Tabulated: return hermite(s, 0);
    }
    return 0;
  }
  double dr(double s) const {
    switch (kind_) {
      case Kind::Constant: return 0;
      case Kind::Expression: return eval(dr_, s);
      case Kind::Tabulated: return table_->slope ? table_->slope(hermite(s, 0)) : hermite(s, 1);
    }
    return 0;
  }
  double ddr(double s) const {
    switch (kind_) {
      case Kind::Constant: return 0;
      case Kind::Expression: return eval(ddr_, s);
      case Kind::Tabulated:
        if (table_->slope) {
          double rv = hermite(s, 0);
          return table_->slope_dr(rv) * table_->slope(rv);
        }
        return hermite(s, 2);
    }
    return 0;
  }
  // r and r' in another scalar type, for the finite-difference oracle
  template <class T>
  T r_as(T s) const {
    switch (kind_) {
      case Kind::Constant: return T(c_);
      case Kind::Expression: return eval_as(r_, s);
      case Kind::Tabulated: return hermite<T>(s, 0);
    }
    return 0;
  }
  template <class T>
  T dr_as(T s) const {
    switch (kind_) {
      case Kind::Constant: return 0;
      case Kind::Expression: return eval_as(dr_, s);
      case Kind::Tabulated:
        return table_->slope ? T(table_->slope(static_cast<double>(hermite<T>(s, 0)))) : hermite<T>(s, 1);
    }
    return 0;
  }

  // raw interpolant and its derivatives, ignoring the slope closure
  double interpolant(double s, int order) const { return hermite(s, order); }

  const std::vector<double>& knots() const { return table_->s; }
  const std::vector<double>& knot_values() const { return table_->r; }

  std::string text() const {
    switch (kind_) {
      case Kind::Constant: return detail::num_text(c_);
      case Kind::Expression: return to_string(r_);
      case Kind::Tabulated: return "tabulated(" + std::to_string(table_->s.size()) + " knots)";
    }
    return "";
  }

 private:
  struct Table {
    std::vector<double> s, r, dr, ddr;
    std::function<double(double)> slope, slope_dr;
  };
  explicit RadiusProfile(int) {}

  Kind kind_ = Kind::Constant;
  double c_ = 1.0;
  Expr r_, dr_, ddr_;
  std::shared_ptr<const Table> table_;

  template <class T = double>
  T hermite(T s, int order) const {
    if (!table_ || table_->s.size() < 2) throw Error(ErrorKind::OutOfDomain, "radius table is empty");
    const auto& S = table_->s;
    bool up = S.back() > S.front();
    double lo = up ? S.front() : S.back(), hi = up ? S.back() : S.front();
    if (s < lo - 1e-12 || s > hi + 1e-12) throw Error(ErrorKind::OutOfDomain, "s outside tabulated radius");
    size_t i;
    if (up) {
      i = std::upper_bound(S.begin(), S.end(), s) - S.begin();
    } else {
      i = std::upper_bound(S.begin(), S.end(), s, std::greater<>()) - S.begin();
    }
    i = std::clamp<size_t>(i, 1, S.size() - 1) - 1;
    T h = T(S[i + 1]) - T(S[i]);
    T u = (s - S[i]) / h;
    T p0 = table_->r[i], p1 = table_->r[i + 1];
    T m0 = table_->dr[i] * h, m1 = table_->dr[i + 1] * h;
    T a0 = table_->ddr[i] * h * h, a1 = table_->ddr[i + 1] * h * h;
    T u2 = u * u, u3 = u2 * u, u4 = u3 * u, u5 = u4 * u;
    T b[6];
    if (order == 0) {
      b[0] = 1 - 10 * u3 + 15 * u4 - 6 * u5;
      b[1] = u - 6 * u3 + 8 * u4 - 3 * u5;
      b[2] = 0.5 * u2 - 1.5 * u3 + 1.5 * u4 - 0.5 * u5;
      b[3] = 10 * u3 - 15 * u4 + 6 * u5;
      b[4] = -4 * u3 + 7 * u4 - 3 * u5;
      b[5] = 0.5 * u3 - u4 + 0.5 * u5;
    } else if (order == 1) {
      b[0] = -30 * u2 + 60 * u3 - 30 * u4;
      b[1] = 1 - 18 * u2 + 32 * u3 - 15 * u4;
      b[2] = u - 4.5 * u2 + 6 * u3 - 2.5 * u4;
      b[3] = 30 * u2 - 60 * u3 + 30 * u4;
      b[4] = -12 * u2 + 28 * u3 - 15 * u4;
      b[5] = 1.5 * u2 - 4 * u3 + 2.5 * u4;
    } else {
      b[0] = -60 * u + 180 * u2 - 120 * u3;
      b[1] = -36 * u + 96 * u2 - 60 * u3;
      b[2] = 1 - 9 * u + 18 * u2 - 10 * u3;
      b[3] = 60 * u - 180 * u2 + 120 * u3;
      b[4] = -24 * u + 84 * u2 - 60 * u3;
      b[5] = 3 * u - 12 * u2 + 10 * u3;
    }
    T v = b[0] * p0 + b[1] * m0 + b[2] * a0 + b[3] * p1 + b[4] * m1 + b[5] * a1;
    for (int k = 0; k < order; ++k) v /= h;
    return v;
  }
};

enum class Variant { Auto, Standard, Alt };

inline const char* variant_name(Variant v) {
  return v == Variant::Standard ? "standard" : v == Variant::Alt ? "alt" : "auto";
}

struct CanalConfig {
  int j = 1;
  int lambda = 1;
  int sigma = 1;  // the "+" branch of the +/- in the envelope formula
  Variant variant = Variant::Auto;
  RadiusProfile radius;
  // null canals: the two free cone components in (s,t,w), ordered by frame index
  Expr cone_first, cone_second;
};

// everything the point and curvature formulas need at one node
struct NodeData {
  FrenetFrame fr;
  Vec4 beta;
  double r = 0, dr = 0, ddr = 0;
  Variant variant = Variant::Standard;
  double Q = 0;    // |r'^2 - lambda*eps1|
  double rho = 0;  // sigma * sqrt(Q)
  double c = 0;    // eps3*eps4*lambda^j
  std::array<double, 4> a{}, a_t{}, a_w{};  // direction pattern on F1..F4
  double f = 0;    // coefficient of F2 in the pattern
  double A = 0;    // metric factor that vanishes on degenerate nodes
  Vec4 offset;     // unit-sphere offset V, point = beta + r*V
  Vec4 point;
};

namespace detail {

inline int ipow(int base, int e) {
  int v = 1;
  for (int i = 0; i < e; ++i) v *= base;
  return v;
}

// slot of frame index m in a 0-based array, cycling over F2..F4
inline int cyc(int m) { return (m - 2) % 3 + 1; }

// unit direction on F2..F4 (slot 0 unused)
template <class T>
std::array<T, 4> pattern(int j, Variant v, T t, T w) {
  using std::cos, std::sin, std::cosh, std::sinh;
  std::array<T, 4> a{};
  if (j == 1) {
    a[1] = cos(t) * cos(w), a[2] = sin(t) * cos(w), a[3] = sin(w);
    return a;
  }
  int p = cyc(j), q = cyc(j + 1), u = cyc(j + 2);
  T cht = cosh(t), sht = sinh(t), chw = cosh(w), shw = sinh(w);
  if (v == Variant::Standard) a[p] = cht * chw, a[q] = shw, a[u] = sht * chw;
  else a[p] = cht * shw, a[q] = chw, a[u] = sht * shw;
  return a;
}

inline void fill_pattern(NodeData& nd, int j, double t, double w) {
  auto& a = nd.a;
  auto& at = nd.a_t;
  auto& aw = nd.a_w;
  a = at = aw = {};
  double ct = std::cos(t), st = std::sin(t), cw = std::cos(w), sw = std::sin(w);
  if (j == 1) {
    a[1] = ct * cw, a[2] = st * cw, a[3] = sw;
    at[1] = -st * cw, at[2] = ct * cw;
    aw[1] = -ct * sw, aw[2] = -st * sw, aw[3] = cw;
    nd.A = cw;
  } else {
    double cht = std::cosh(t), sht = std::sinh(t), chw = std::cosh(w), shw = std::sinh(w);
    int p = cyc(j), q = cyc(j + 1), u = cyc(j + 2);
    if (nd.variant == Variant::Standard) {
      a[p] = cht * chw, a[q] = shw, a[u] = sht * chw;
      at[p] = sht * chw, at[u] = cht * chw;
      aw[p] = cht * shw, aw[q] = chw, aw[u] = sht * shw;
      nd.A = chw;
    } else {
      a[p] = cht * shw, a[q] = chw, a[u] = sht * shw;
      at[p] = sht * shw, at[u] = cht * shw;
      aw[p] = cht * chw, aw[q] = shw, aw[u] = sht * chw;
      nd.A = shw;
    }
  }
  nd.f = a[1];
}

inline Vec4 combine(const FrenetFrame& fr, const std::array<double, 4>& x) {
  return x[0] * fr.F[0] + x[1] * fr.F[1] + x[2] * fr.F[2] + x[3] * fr.F[3];
}

}  // namespace detail

inline void check_family(const CanalConfig& cfg) {
  if (cfg.j < 1 || cfg.j > 4) throw Error(ErrorKind::InadmissibleConfig, "frame type must be 1..4");
  if (cfg.lambda < -1 || cfg.lambda > 1) throw Error(ErrorKind::InadmissibleConfig, "lambda must be -1, 0 or 1");
  if (cfg.sigma != 1 && cfg.sigma != -1) throw Error(ErrorKind::InadmissibleConfig, "branch must be + or -");
  if (cfg.j == 1 && cfg.lambda == 0)
    throw Error(ErrorKind::InadmissibleConfig, "null-cone canal with timelike center curve cannot be defined");
  if (cfg.j == 1 && cfg.lambda == -1 && cfg.radius.is_constant())
    throw Error(ErrorKind::InadmissibleConfig, "there is no tubular hypersurface T^{1;-1}");
}

struct NullConePoint {
  Vec4 point;
  std::array<double, 4> a{};  // components on F1..F4
  double residual = 0;        // sum eps_i a_i^2
};

// cone point from the two free components; the remaining one is solved with sign sigma
inline NullConePoint nullcone_point(const FrenetFrame& fr, const Vec4& beta, int j, int sigma, double first,
                                    double second) {
  if (j == 1) throw Error(ErrorKind::InadmissibleConfig, "null-cone canal with timelike center curve cannot be defined");
  if (!std::isfinite(first) || !std::isfinite(second))
    throw Error(ErrorKind::NullConditionViolated, "cone components must be finite");
  NullConePoint out;
  int slots[2], n = 0;
  for (int m = 1; m < 4; ++m)
    if (m != j - 1) slots[n++] = m;
  out.a[slots[0]] = first;
  out.a[slots[1]] = second;
  out.a[j - 1] = sigma * std::sqrt(first * first + second * second);
  double scale = 0;
  for (int m = 1; m < 4; ++m) {
    out.residual += fr.eps[m] * out.a[m] * out.a[m];
    scale += out.a[m] * out.a[m];
  }
  if (std::abs(out.residual) > 1e-9 * (1 + scale))
    throw Error(ErrorKind::NullConditionViolated, "cone components are not null");
  out.point = beta + detail::combine(fr, out.a);
  return out;
}

inline NullConePoint nullcone_point(const CurveSpec& curve, int j, int sigma, double first, double second,
                                    double s) {
  FrenetFrame fr = frame_at(curve, s);
  if (fr.j != j) throw Error(ErrorKind::InadmissibleConfig, "frame type of the center curve does not match j");
  return nullcone_point(fr, curve.position(s), j, sigma, first, second);
}

inline NodeData node_data(const CurveSpec& curve, const CanalConfig& cfg, double s, double t, double w) {
  check_family(cfg);
  NodeData nd;
  nd.fr = frame_at(curve, s);
  if (nd.fr.j != cfg.j)
    throw Error(ErrorKind::InadmissibleConfig, "center curve has frame type " + std::to_string(nd.fr.j) +
                                                   ", family asks for " + std::to_string(cfg.j));
  nd.beta = curve.position(s);
  nd.r = cfg.radius.r(s);
  nd.dr = cfg.radius.dr(s);
  nd.ddr = cfg.radius.ddr(s);
  if (!(nd.r > 0)) throw Error(ErrorKind::InadmissibleConfig, "radius must be positive");
  const int L = cfg.lambda, e1 = nd.fr.eps[0];

  if (L == 0) {
    double x = eval(cfg.cone_first, s, t, w), y = eval(cfg.cone_second, s, t, w);
    auto nc = nullcone_point(nd.fr, nd.beta, cfg.j, cfg.sigma, x, y);
    nd.a = nc.a;
    nd.point = nc.point;
    nd.offset = nc.point - nd.beta;
    return nd;
  }

  double q = nd.dr * nd.dr - L * e1;
  Variant v = cfg.variant;
  if (v == Variant::Auto) {
    if (std::abs(q) < 1e-12) throw Error(ErrorKind::VariantViolated, "r'^2 equals lambda*eps1");
    v = q > 0 ? Variant::Standard : Variant::Alt;
  }
  if (v == Variant::Standard && !(q > 1e-12))
    throw Error(ErrorKind::VariantViolated, "standard form needs r'^2 > lambda*eps1");
  if (v == Variant::Alt) {
    if (cfg.j == 1 || L != 1)
      throw Error(ErrorKind::InadmissibleConfig, "r'^2 < lambda*eps1 admits no hypersurface for this family");
    if (!(q < -1e-12)) throw Error(ErrorKind::VariantViolated, "alternate form needs r'^2 < lambda*eps1");
  }
  nd.variant = v;
  nd.Q = std::abs(q);
  nd.rho = cfg.sigma * std::sqrt(nd.Q);
  nd.c = nd.fr.eps[2] * nd.fr.eps[3] * detail::ipow(L, cfg.j);
  detail::fill_pattern(nd, cfg.j, t, w);

  std::array<double, 4> V{};
  V[0] = -L * e1 * nd.dr;
  for (int m = 1; m < 4; ++m) V[m] = nd.rho * nd.a[m];
  nd.offset = detail::combine(nd.fr, V);
  nd.point = nd.beta + nd.r * nd.offset;
  return nd;
}

inline Vec4 canal_point(const CurveSpec& curve, const CanalConfig& cfg, double s, double t, double w) {
  return node_data(curve, cfg, s, t, w).point;
}

// what a node contributes that depends on s alone, in scalar type T
template <class T>
struct Slice {
  BasicVec4<T> beta;
  std::array<BasicVec4<T>, 4> F;
  T r = 0, rho = 0, tangential = 0;  // point = beta + r*(tangential*F1 + rho*pattern)
};

template <class T>
Slice<T> slice_as(const CurveSpec& curve, const CanalConfig& cfg, T s) {
  using std::sqrt, std::abs;
  Slice<T> sl;
  sl.F = frame_legs_as(curve, s);
  sl.beta = curve.position_as(s);
  sl.r = cfg.radius.r_as(s);
  T dr = cfg.radius.dr_as(s);
  int e1 = inner(sl.F[0], sl.F[0]) < 0 ? -1 : 1;
  sl.rho = cfg.sigma * sqrt(abs(dr * dr - cfg.lambda * e1));
  sl.tangential = -cfg.lambda * e1 * dr;
  return sl;
}

template <class T>
BasicVec4<T> slice_point(const Slice<T>& sl, int j, Variant v, T t, T w) {
  auto a = detail::pattern<T>(j, v, t, w);
  BasicVec4<T> V = sl.tangential * sl.F[0] + sl.rho * (a[1] * sl.F[1] + a[2] * sl.F[2] + a[3] * sl.F[3]);
  return sl.beta + sl.r * V;
}

struct AdmissibilityReport {
  bool ok = true;
  std::vector<std::string> reasons;
  Variant variant = Variant::Auto;
  ErrorKind kind = ErrorKind::InadmissibleConfig;  // of the first failure
};

inline AdmissibilityReport validate_config(const CurveSpec& curve, const CanalConfig& cfg, double s_lo, double s_hi,
                                           int n = 200) {
  AdmissibilityReport rep;
  auto fail = [&](ErrorKind k, const std::string& why) {
    if (rep.ok) rep.kind = k;
    rep.ok = false;
    rep.reasons.push_back(why);
  };
  try {
    check_family(cfg);
  } catch (const Error& e) {
    fail(e.kind(), e.message());
    return rep;
  }
  int sign_seen = 0;
  for (int i = 0; i < n && rep.ok; ++i) {
    double s = n == 1 ? s_lo : s_lo + (s_hi - s_lo) * i / (n - 1);
    try {
      FrenetFrame fr = frame_at(curve, s);
      if (fr.j != cfg.j) {
        fail(ErrorKind::InadmissibleConfig, "frame-type mismatch: curve has j=" + std::to_string(fr.j));
        break;
      }
      double r = cfg.radius.r(s);
      if (!(r > 0)) {
        fail(ErrorKind::InadmissibleConfig, "radius not positive at s=" + std::to_string(s));
        break;
      }
      if (cfg.lambda == 0) continue;
      double q = cfg.radius.dr(s) * cfg.radius.dr(s) - cfg.lambda * fr.eps[0];
      int sg = q > 1e-12 ? 1 : q < -1e-12 ? -1 : 0;
      if (sg == 0) {
        fail(ErrorKind::InadmissibleConfig, "r'^2 = lambda*eps1 at s=" + std::to_string(s));
      } else if (sign_seen && sg != sign_seen) {
        fail(ErrorKind::InadmissibleConfig, "sign of r'^2 - lambda*eps1 changes on the domain");
      }
      sign_seen = sg;
    } catch (const Error& e) {
      fail(e.kind(), e.message());
    }
  }
  if (rep.ok && cfg.lambda != 0) {
    Variant v = sign_seen > 0 ? Variant::Standard : Variant::Alt;
    if (v == Variant::Alt && (cfg.j == 1 || cfg.lambda != 1))
      fail(ErrorKind::InadmissibleConfig, "r'^2 < lambda*eps1 admits no hypersurface for this family");
    else if (cfg.variant != Variant::Auto && cfg.variant != v)
      fail(ErrorKind::VariantViolated, std::string("requested ") + variant_name(cfg.variant) + " form but radius needs " +
                                           variant_name(v));
    rep.variant = v;
  }
  return rep;
}

struct GridSpec {
  double s0 = 0.25, s1 = 3, t0 = 0, t1 = 0, w0 = 0, w1 = 0;
  int ns = 0, nt = 0, nw = 0;
};

inline std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(std::max(n, 0));
  for (int i = 0; i < n; ++i) v[i] = n == 1 ? a : a + (b - a) * i / (n - 1);
  return v;
}

inline constexpr double degenerate_tol = 1e-6;

struct SurfacePatch {
  CanalConfig config;
  std::vector<double> s, t, w;
  std::vector<Vec4> points;
  std::vector<char> degenerate;
  std::vector<FrenetFrame> frames;  // one per s

  size_t index(size_t i, size_t j, size_t k) const { return (i * t.size() + j) * w.size() + k; }
  bool empty() const { return points.empty(); }
};

inline SurfacePatch sample_grid(const CurveSpec& curve, const CanalConfig& cfg, const GridSpec& g) {
  SurfacePatch p;
  p.config = cfg;
  p.s = linspace(g.s0, g.s1, g.ns);
  p.t = linspace(g.t0, g.t1, g.nt);
  p.w = linspace(g.w0, g.w1, g.nw);
  size_t total = p.s.size() * p.t.size() * p.w.size();
  if (total == 0) return p;
  check_family(cfg);
  p.points.resize(total);
  p.degenerate.assign(total, 0);
  p.frames.resize(p.s.size());
  parallel_for(p.s.size(), [&](size_t i) {
    for (size_t j = 0; j < p.t.size(); ++j)
      for (size_t k = 0; k < p.w.size(); ++k) {
        NodeData nd = node_data(curve, cfg, p.s[i], p.t[j], p.w[k]);
        size_t id = p.index(i, j, k);
        p.points[id] = nd.point;
        p.degenerate[id] = cfg.lambda != 0 && std::abs(nd.A) < degenerate_tol;
        if (j == 0 && k == 0) p.frames[i] = nd.fr;
      }
  });
  return p;
}

}  // namespace canal
