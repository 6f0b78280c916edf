#pragma once

#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "curvature.hpp"

namespace canal {

struct Node {
  double s = 0, t = 0, w = 0;
};

struct TheoremReport {
  std::string theorem;
  double max_residual = 0;
  double tolerance = 0;
  bool pass = false;
  int nodes = 0;
  int skipped = 0;
};

// Nodes where the induced metric is singular: the factor A vanishes, or the
// focal denominator of the simple principal curvature does.
inline bool usable_node(const CurveSpec& curve, const CanalConfig& cfg, const Node& n, double focal_rel = 1e-3) {
  try {
    NodeData nd = node_data(curve, cfg, n.s, n.t, n.w);
    if (std::abs(nd.A) < degenerate_tol) return false;
    auto mp = simple_root_parts(nd, cfg.lambda);
    double scale = nd.Q + std::abs(nd.r * nd.fr.k1 * nd.f * nd.rho) + std::abs(nd.r * nd.ddr);
    return std::abs(mp.D) >= focal_rel * scale;
  } catch (const Error&) {
    return false;
  }
}

inline std::vector<Node> patch_nodes(const SurfacePatch& p) {
  std::vector<Node> out;
  for (size_t i = 0; i < p.s.size(); ++i)
    for (size_t j = 0; j < p.t.size(); ++j)
      for (size_t k = 0; k < p.w.size(); ++k)
        if (!p.degenerate[p.index(i, j, k)]) out.push_back({p.s[i], p.t[j], p.w[k]});
  return out;
}

inline CurvatureReport curvature_at(const CurveSpec& curve, const CanalConfig& cfg, const Node& n, Route route) {
  return route == Route::ClosedForm ? closed_form(curve, cfg, n.s, n.t, n.w) : numeric(curve, cfg, n.s, n.t, n.w);
}

inline TheoremReport check_kh_relation(const CurveSpec& curve, const CanalConfig& cfg, const std::vector<Node>& nodes,
                                       Route route = Route::ClosedForm) {
  TheoremReport rep;
  rep.theorem = route == Route::ClosedForm ? "kh" : "kh-numeric";
  rep.tolerance = route == Route::ClosedForm ? 1e-9 : 1e-4;
  std::vector<double> res(nodes.size(), -1);
  parallel_for(nodes.size(), [&](size_t i) {
    if (!usable_node(curve, cfg, nodes[i])) return;
    NodeData nd = node_data(curve, cfg, nodes[i].s, nodes[i].t, nodes[i].w);
    auto cr = curvature_at(curve, cfg, nodes[i], route);
    double r = nd.r;
    res[i] = std::abs(3 * cr.H * r - cr.K * r * r * r - 2 * nd.c);
  });
  for (double v : res) {
    if (v < 0) {
      ++rep.skipped;
      continue;
    }
    ++rep.nodes;
    rep.max_residual = std::max(rep.max_residual, v);
  }
  rep.pass = rep.max_residual <= rep.tolerance;
  return rep;
}

enum class WeingartenPair { st, sw, tw };

inline const char* pair_name(WeingartenPair p) {
  return p == WeingartenPair::st ? "st" : p == WeingartenPair::sw ? "sw" : "tw";
}

// K and H partials by 5-point differences of the closed forms; a partial whose
// size is below 1e-9 of the sampled values is roundoff and is set to zero. H is
// a sum that can cancel, so its scale is the largest principal curvature.
struct FieldPartials {
  std::array<double, 3> K{}, H{};
};

inline FieldPartials curvature_partials(const CurveSpec& curve, const CanalConfig& cfg, const Node& n,
                                        double h = 1e-3) {
  FieldPartials out;
  for (int axis = 0; axis < 3; ++axis) {
    double vk[4], vh[4], big_k = 0, big_h = 0;
    static const int off[4] = {-2, -1, 1, 2};
    for (int m = 0; m < 4; ++m) {
      double u[3] = {n.s, n.t, n.w};
      u[axis] += off[m] * h;
      auto cr = closed_form(curve, cfg, u[0], u[1], u[2]);
      vk[m] = cr.K, vh[m] = cr.H;
      big_k = std::max(big_k, std::abs(cr.K));
      big_h = std::max({big_h, std::abs(cr.H), std::abs(cr.mu[0]), std::abs(cr.mu[2])});
    }
    double dk = (vk[0] - 8 * vk[1] + 8 * vk[2] - vk[3]) / (12 * h);
    double dh = (vh[0] - 8 * vh[1] + 8 * vh[2] - vh[3]) / (12 * h);
    out.K[axis] = std::abs(dk) <= 1e-9 * big_k ? 0 : dk;
    out.H[axis] = std::abs(dh) <= 1e-9 * big_h ? 0 : dh;
  }
  return out;
}

inline TheoremReport weingarten_check(const CurveSpec& curve, const CanalConfig& cfg, const std::vector<Node>& nodes,
                                      WeingartenPair pair) {
  TheoremReport rep;
  rep.theorem = std::string("weingarten-") + pair_name(pair);
  rep.tolerance = 1e-8;
  int u = pair == WeingartenPair::tw ? 1 : 0;
  int v = pair == WeingartenPair::st ? 1 : 2;
  std::vector<double> res(nodes.size(), -1);
  parallel_for(nodes.size(), [&](size_t i) {
    if (!usable_node(curve, cfg, nodes[i])) return;
    FieldPartials d;
    try {
      d = curvature_partials(curve, cfg, nodes[i]);
    } catch (const Error&) {
      return;  // stencil crosses a singular node
    }
    double a = d.H[u] * d.K[v], b = d.H[v] * d.K[u];
    res[i] = std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-12});
  });
  for (double r : res) {
    if (r < 0) {
      ++rep.skipped;
      continue;
    }
    ++rep.nodes;
    rep.max_residual = std::max(rep.max_residual, r);
  }
  rep.pass = rep.max_residual <= rep.tolerance;
  return rep;
}

enum class Verdict { Flat, NotFlat, Minimal, NotMinimal, Inadmissible };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Flat: return "Flat";
    case Verdict::NotFlat: return "NotFlat";
    case Verdict::Minimal: return "Minimal";
    case Verdict::NotMinimal: return "NotMinimal";
    case Verdict::Inadmissible: return "Inadmissible";
  }
  return "?";
}

struct Classification {
  Verdict verdict = Verdict::Inadmissible;
  std::string reason;
  double witness = 0;  // max |K| (flat) or max |H| (minimal) on the sampled patch
  int lambda = 0;      // family used for the witness patch
};

namespace detail {

inline double max_over(double a, double b, int n, const std::function<double(double)>& f) {
  double m = 0;
  for (int i = 0; i < n; ++i) m = std::max(m, std::abs(f(a + (b - a) * i / (n - 1))));
  return m;
}

inline std::vector<Node> witness_nodes(const CurveSpec& curve, int j, double s0, double s1) {
  std::vector<Node> out;
  for (int i = 0; i < 6; ++i)
    for (int k = 0; k < 5; ++k) {
      double s = s0 + (s1 - s0) * (i + 0.5) / 6;
      double t = -1.0 + 0.5 * k, w = j == 1 ? 0.3 : 0.4 + 0.1 * k;
      out.push_back({s, t, w});
    }
  (void)curve;
  return out;
}

}  // namespace detail

// flat iff the center is a line and r = a s + b with |a| != 1
inline Classification classify_flat(const CurveSpec& curve, const RadiusProfile& radius, double s0, double s1) {
  Classification c;
  const int n = 200;
  double rpp = detail::max_over(s0, s1, n, [&](double s) { return radius.ddr(s); });
  double rp_gap = 1e300;
  for (int i = 0; i < n; ++i) rp_gap = std::min(rp_gap, std::abs(std::abs(radius.dr(s0 + (s1 - s0) * i / (n - 1))) - 1));
  if (curve.straight() && rpp <= tau_k && rp_gap <= tau_k) {
    c.verdict = Verdict::Inadmissible;
    c.reason = "r' = +-1 lies on the admissibility boundary";
    return c;
  }
  bool flat = curve.straight() && rpp <= tau_k;
  c.verdict = flat ? Verdict::Flat : Verdict::NotFlat;
  c.reason = !curve.straight() ? "k1 does not vanish" : flat ? "line with linear radius" : "radius is not linear";
  try {
    int j = frame_at(curve, 0.5 * (s0 + s1)).j;
    for (int L : {1, -1}) {
      CanalConfig cfg;
      cfg.j = j, cfg.lambda = L, cfg.radius = radius;
      if (!validate_config(curve, cfg, s0, s1, 50).ok) continue;
      c.lambda = L;
      for (const auto& nd : detail::witness_nodes(curve, j, s0, s1)) {
        if (!usable_node(curve, cfg, nd)) continue;
        c.witness = std::max(c.witness, std::abs(closed_form(curve, cfg, nd.s, nd.t, nd.w).K));
      }
      break;
    }
  } catch (const Error&) {
    c.lambda = 0;  // no canal frame on this curve, verdict stands on k1 alone
  }
  return c;
}

// first factor of the minimality condition for a line-centred canal
inline double minimal_residual(int eps1_lambda, double r, double dr, double ddr) {
  return -2 * (dr * dr - eps1_lambda) - 3 * r * ddr;
}

inline Classification classify_minimal(const CurveSpec& curve, const RadiusProfile& radius, int lambda, double s0,
                                       double s1) {
  Classification c;
  c.lambda = lambda;
  FrenetFrame fr;
  try {
    fr = frame_at(curve, 0.5 * (s0 + s1));
  } catch (const Error&) {
    c.verdict = Verdict::NotMinimal;
    c.reason = "k1 does not vanish";
    return c;
  }
  if (!curve.straight()) {
    c.verdict = Verdict::NotMinimal;
    c.reason = "k1 does not vanish";
  } else {
    int e1l = fr.eps[0] * lambda;
    double res = detail::max_over(s0, s1, 200, [&](double s) {
      return minimal_residual(e1l, radius.r(s), radius.dr(s), radius.ddr(s));
    });
    c.verdict = res <= 1e-6 ? Verdict::Minimal : Verdict::NotMinimal;
    c.reason = c.verdict == Verdict::Minimal ? "radius solves the minimal equation"
                                             : "minimal equation residual " + std::to_string(res);
  }
  CanalConfig cfg;
  cfg.j = fr.j, cfg.lambda = lambda, cfg.radius = radius;
  if (validate_config(curve, cfg, s0, s1, 50).ok) {
    for (const auto& nd : detail::witness_nodes(curve, fr.j, s0, s1)) {
      if (!usable_node(curve, cfg, nd)) continue;
      c.witness = std::max(c.witness, std::abs(closed_form(curve, cfg, nd.s, nd.t, nd.w).H));
    }
  }
  return c;
}

class DomainExitError : public Error {
 public:
  DomainExitError(double s, double r)
      : Error(ErrorKind::DomainExit, "radicand vanishes at s=" + std::to_string(s) + " (r=" + std::to_string(r) + ")"),
        s_(s) {}
  double turning_s() const { return s_; }

 private:
  double s_;
};

// r' = sign*sqrt(eps1_lambda + |c1/r|^(4/3)) from r(s0) = r0
inline RadiusProfile solve_minimal_radius(int eps1_lambda, double c1, double r0, double s0, double s1, int sign) {
  if (c1 == 0 || !(r0 > 0) || (eps1_lambda != 1 && eps1_lambda != -1) || (sign != 1 && sign != -1) || !(s1 > s0))
    throw Error(ErrorKind::InvalidConfig, "bad minimal-radius parameters");
  const double a43 = std::pow(std::abs(c1), 4.0 / 3.0);
  auto radicand = [=](double r) { return eps1_lambda + a43 * std::pow(r, -4.0 / 3.0); };
  auto slope = [=](double r) { return sign * std::sqrt(std::max(0.0, radicand(r))); };
  // d(slope)/dr; r'' = slope_dr(r) * slope(r) = -(2/3)|c1|^(4/3) r^(-7/3)
  auto slope_dr = [=](double r) {
    double q = radicand(r);
    return sign * (-2.0 / 3.0) * a43 * std::pow(r, -7.0 / 3.0) / std::sqrt(q);
  };
  auto accel = [=](double r) { return (-2.0 / 3.0) * a43 * std::pow(r, -7.0 / 3.0); };

  if (radicand(r0) <= 0) throw DomainExitError(s0, r0);
  namespace ode = boost::numeric::odeint;
  using State = double;
  bool bad = false;
  auto rhs = [&](const State& r, State& drdt, double) {
    double q = r > 0 ? radicand(r) : -1;
    if (q < 0) {
      bad = true;
      drdt = 0;
      return;
    }
    drdt = sign * std::sqrt(q);
  };
  auto stepper = ode::make_controlled(1e-10, 1e-10, ode::runge_kutta_dopri5<State>());
  std::vector<double> S{s0}, R{r0}, D{slope(r0)}, A{accel(r0)};
  double s = s0, r = r0, dt = std::min(1e-3, s1 - s0);
  while (s < s1) {
    dt = std::min(dt, s1 - s);
    State rn = r;
    double sn = s;
    bad = false;
    auto res = stepper.try_step(rhs, rn, sn, dt);
    if (res == ode::fail) continue;  // dt already shrunk
    if (bad || radicand(rn) <= 1e-14) {
      dt = (sn - s) * 0.25;
      if (dt < 1e-12) throw DomainExitError(s, r);
      stepper.reset();  // drop the cached derivative of the rejected step
      continue;
    }
    s = sn, r = rn;
    S.push_back(s), R.push_back(r), D.push_back(slope(r)), A.push_back(accel(r));
    if (radicand(r) < 1e-10) throw DomainExitError(s, r);
  }
  return RadiusProfile::tabulated(S, R, D, A, slope, slope_dr);
}

// max |interpolant' - slope(interpolant)| at knot midpoints
inline double ode_residual(const RadiusProfile& p, int eps1_lambda, double c1, int sign) {
  const auto& S = p.knots();
  double a43 = std::pow(std::abs(c1), 4.0 / 3.0), worst = 0;
  for (size_t i = 0; i + 1 < S.size(); ++i) {
    double s = 0.5 * (S[i] + S[i + 1]);
    double r = p.interpolant(s, 0);
    double want = sign * std::sqrt(eps1_lambda + a43 * std::pow(r, -4.0 / 3.0));
    worst = std::max(worst, std::abs(p.interpolant(s, 1) - want));
  }
  return worst;
}

// largest entry gap scaled by the largest closed-form entry (at least 1)
inline double matrix_gap(const Mat3& cf, const Mat3& num) {
  return (cf - num).cwiseAbs().maxCoeff() / std::max(1.0, cf.cwiseAbs().maxCoeff());
}

// closed-form g, h, S against the finite-difference route; a wrong det g sign fails outright
inline TheoremReport check_tables(const CurveSpec& curve, const CanalConfig& cfg, const std::vector<Node>& nodes) {
  TheoremReport rep;
  rep.theorem = "tables";
  rep.tolerance = 1e-4;
  std::vector<double> res(nodes.size(), -1);
  parallel_for(nodes.size(), [&](size_t i) {
    const Node& n = nodes[i];
    if (!usable_node(curve, cfg, n)) return;
    auto cf = closed_form(curve, cfg, n.s, n.t, n.w);
    auto nu = numeric(curve, cfg, n.s, n.t, n.w);
    double gap = std::max({matrix_gap(cf.g, nu.g), matrix_gap(cf.h, nu.h), matrix_gap(cf.S, nu.S)});
    if ((nu.det_g < 0 ? -1 : 1) != -cfg.lambda || (cf.det_g < 0 ? -1 : 1) != -cfg.lambda) gap = HUGE_VAL;
    res[i] = gap;
  });
  for (double r : res) {
    if (r < 0) {
      ++rep.skipped;
      continue;
    }
    ++rep.nodes;
    rep.max_residual = std::max(rep.max_residual, r);
  }
  rep.pass = rep.max_residual <= rep.tolerance;
  return rep;
}

}  // namespace canal
