#pragma once

#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "analysis.hpp"

namespace canal {

inline constexpr double two_pi = 6.283185307179586;

struct JobConfig {
  std::string example;
  std::array<std::string, 4> curve{"0", "s", "0", "0"};
  bool explicit_curve = false;  // some curve-xN was given
  double dom0 = -20, dom1 = 20;
  int j = 1, lambda = 1, sigma = 1;
  Variant variant = Variant::Auto;
  std::string radius = "2*s";
  std::string cone_a = "cos(t)", cone_b = "sin(t)";
  GridSpec grid{0.25, 3, 0, two_pi, -1.5, 1.5, 40, 40, 1};
  int drop = 0;  // coordinate left out of the OBJ projection
  std::string obj, csv, json;
  std::vector<std::string> checks;
};

namespace detail {

inline std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n"), b = s.find_last_not_of(" \t\r\n");
  return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

inline double to_num(const std::string& key, const std::string& v) {
  try {
    return eval(parse(v), 0);
  } catch (const Error&) {
    throw Error(ErrorKind::InvalidConfig, key + ": not a number: " + v);
  }
}

inline std::pair<double, double> to_range(const std::string& key, const std::string& v) {
  auto c = v.find(':');
  if (c == std::string::npos) throw Error(ErrorKind::InvalidConfig, key + ": expected a:b");
  return {to_num(key, v.substr(0, c)), to_num(key, v.substr(c + 1))};
}

inline std::vector<std::string> split(const std::string& v, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!trim(item).empty()) out.push_back(trim(item));
  return out;
}

inline std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

}  // namespace detail

// builtin curves of the worked examples
inline JobConfig cmd_example(const std::string& name) {
  JobConfig job;
  job.example = name;
  if (name == "beta1") {
    job.curve = {"2*sinh(s)", "2*cosh(s)", "sqrt(3)*cos(s)", "sqrt(3)*sin(s)"};
    job.j = 1;
  } else if (name == "beta2") {
    job.curve = {"sqrt(3)*sinh(s)", "sqrt(3)*cosh(s)", "2*cos(s)", "2*sin(s)"};
    job.j = 3;
    job.grid.t0 = -2, job.grid.t1 = 2;
  } else {
    throw Error(ErrorKind::UnknownExample, "unknown example '" + name + "' (expected beta1 or beta2)");
  }
  job.radius = "2*s";
  job.grid.w0 = job.grid.w1 = 2;
  job.grid.nw = 1;
  return job;
}

// one key=value setting; flags and config files share this
inline void apply_setting(JobConfig& job, const std::string& key_in, const std::string& value_in) {
  std::string key = detail::trim(key_in), v = detail::trim(value_in);
  if (key == "example") {
    JobConfig base = cmd_example(v);
    base.obj = job.obj, base.csv = job.csv, base.json = job.json, base.checks = job.checks;
    job = base;
  } else if (key.rfind("curve-x", 0) == 0 && key.size() == 8 && key[7] >= '1' && key[7] <= '4') {
    job.curve[key[7] - '1'] = v;
    job.explicit_curve = true;
    job.example.clear();
  } else if (key == "domain") {
    std::tie(job.dom0, job.dom1) = detail::to_range(key, v);
  } else if (key == "family") {
    auto parts = detail::split(v, ',');
    if (parts.size() != 2 || parts[0].size() < 2 || parts[0][0] != 'j' || parts[1].size() < 2 || parts[1][0] != 'l')
      throw Error(ErrorKind::InvalidConfig, "family: expected jN,lM");
    job.j = static_cast<int>(detail::to_num(key, parts[0].substr(1)));
    job.lambda = static_cast<int>(detail::to_num(key, parts[1].substr(1)));
  } else if (key == "branch") {
    if (v == "+" || v == "+1" || v == "1") job.sigma = 1;
    else if (v == "-" || v == "-1") job.sigma = -1;
    else throw Error(ErrorKind::InvalidConfig, "branch: expected + or -");
  } else if (key == "variant") {
    if (v == "auto") job.variant = Variant::Auto;
    else if (v == "standard") job.variant = Variant::Standard;
    else if (v == "alt") job.variant = Variant::Alt;
    else throw Error(ErrorKind::InvalidConfig, "variant: expected auto, standard or alt");
  } else if (key == "radius") {
    job.radius = v;
  } else if (key == "cone-a") {
    job.cone_a = v;
  } else if (key == "cone-b") {
    job.cone_b = v;
  } else if (key == "grid") {
    std::string g = v;
    for (auto& ch : g)
      if (ch == 'x' || ch == 'X' || ch == '*') ch = ' ';
    // also accept the multiplication sign
    for (size_t p; (p = g.find("\xC3\x97")) != std::string::npos;) g.replace(p, 2, " ");
    std::istringstream in(g);
    int a = -1, b = -1, c = -1;
    if (!(in >> a >> b >> c) || a < 0 || b < 0 || c < 0) throw Error(ErrorKind::InvalidConfig, "grid: expected SxTxW");
    job.grid.ns = a, job.grid.nt = b, job.grid.nw = c;
  } else if (key == "range-s") {
    std::tie(job.grid.s0, job.grid.s1) = detail::to_range(key, v);
  } else if (key == "range-t") {
    std::tie(job.grid.t0, job.grid.t1) = detail::to_range(key, v);
  } else if (key == "range-w") {
    std::tie(job.grid.w0, job.grid.w1) = detail::to_range(key, v);
  } else if (key == "slice-w") {
    job.grid.w0 = job.grid.w1 = detail::to_num(key, v);
    job.grid.nw = 1;
  } else if (key == "slice-t") {
    job.grid.t0 = job.grid.t1 = detail::to_num(key, v);
    job.grid.nt = 1;
  } else if (key == "drop") {
    if (v.size() != 2 || v[0] != 'x' || v[1] < '1' || v[1] > '4')
      throw Error(ErrorKind::InvalidConfig, "drop: expected x1..x4");
    job.drop = v[1] - '1';
  } else if (key == "obj") {
    job.obj = v;
  } else if (key == "csv") {
    job.csv = v;
  } else if (key == "json") {
    job.json = v;
  } else if (key == "check") {
    job.checks = detail::split(v, ',');
  } else {
    throw Error(ErrorKind::InvalidConfig, "unknown key '" + key + "'");
  }
}

inline void load_config_text(JobConfig& job, const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    if (detail::trim(line).empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::InvalidConfig, "line " + std::to_string(no) + ": expected key=value");
    apply_setting(job, line.substr(0, eq), line.substr(eq + 1));
  }
}

inline void load_config_file(JobConfig& job, const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorKind::InvalidConfig, "cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  load_config_text(job, ss.str());
}

inline std::string config_text(const JobConfig& job) {
  std::ostringstream o;
  auto num = [](double v) { return detail::fmt("%.17g", v); };
  // a builtin keeps its name; its curve is shown for reference only
  if (!job.example.empty()) o << "example=" << job.example << "\n";
  for (int i = 0; i < 4; ++i)
    o << (job.example.empty() ? "" : "# ") << "curve-x" << i + 1 << "=" << job.curve[i] << "\n";
  o << "domain=" << num(job.dom0) << ":" << num(job.dom1) << "\n";
  o << "family=j" << job.j << ",l" << job.lambda << "\n";
  o << "branch=" << (job.sigma > 0 ? "+" : "-") << "\n";
  o << "variant=" << variant_name(job.variant) << "\n";
  o << "radius=" << job.radius << "\n";
  if (job.lambda == 0) o << "cone-a=" << job.cone_a << "\ncone-b=" << job.cone_b << "\n";
  o << "grid=" << job.grid.ns << "x" << job.grid.nt << "x" << job.grid.nw << "\n";
  o << "range-s=" << num(job.grid.s0) << ":" << num(job.grid.s1) << "\n";
  o << "range-t=" << num(job.grid.t0) << ":" << num(job.grid.t1) << "\n";
  o << "range-w=" << num(job.grid.w0) << ":" << num(job.grid.w1) << "\n";
  o << "drop=x" << job.drop + 1 << "\n";
  return o.str();
}

inline CurveSpec make_curve(const JobConfig& job) {
  if (job.example.empty() && !job.explicit_curve)
    throw Error(ErrorKind::InvalidConfig, "no curve given: use --example or --curve-x1..x4");
  return CurveSpec::parse(job.curve, job.dom0, job.dom1);
}

inline CanalConfig make_canal(const JobConfig& job) {
  CanalConfig c;
  c.j = job.j, c.lambda = job.lambda, c.sigma = job.sigma, c.variant = job.variant;
  c.radius = RadiusProfile::parse(job.radius);
  if (job.lambda == 0) {
    c.cone_first = parse(job.cone_a, true);
    c.cone_second = parse(job.cone_b, true);
  }
  return c;
}

// Wavefront OBJ of a two-dimensional slice, x_drop left out
inline std::string export_obj(const SurfacePatch& p, int drop = 0) {
  if (p.empty()) throw Error(ErrorKind::EmptySlice, "patch has no nodes");
  size_t rows = p.s.size(), cols;
  bool along_t;
  if (p.w.size() == 1) cols = p.t.size(), along_t = true;
  else if (p.t.size() == 1) cols = p.w.size(), along_t = false;
  else throw Error(ErrorKind::InvalidConfig, "export needs a fixed-w or fixed-t slice");
  auto id = [&](size_t i, size_t k) { return along_t ? p.index(i, k, 0) : p.index(i, 0, k); };
  std::string out = "# canal slice " + std::to_string(rows) + "x" + std::to_string(cols) + "\n";
  char buf[128];
  for (size_t i = 0; i < rows; ++i)
    for (size_t k = 0; k < cols; ++k) {
      const Vec4& v = p.points[id(i, k)];
      double c[3];
      for (int a = 0, n = 0; a < 4; ++a)
        if (a != drop) c[n++] = v[a];
      std::snprintf(buf, sizeof buf, "v %.9g %.9g %.9g\n", c[0], c[1], c[2]);
      out += buf;
    }
  for (size_t i = 0; i + 1 < rows; ++i)
    for (size_t k = 0; k + 1 < cols; ++k) {
      size_t a = i * cols + k + 1, b = (i + 1) * cols + k + 1, c = b + 1, d = a + 1;
      if (p.degenerate[id(i, k)] || p.degenerate[id(i + 1, k)] || p.degenerate[id(i + 1, k + 1)] ||
          p.degenerate[id(i, k + 1)])
        continue;
      std::snprintf(buf, sizeof buf, "f %zu %zu %zu\nf %zu %zu %zu\n", a, b, c, a, c, d);
      out += buf;
    }
  return out;
}

inline const char* csv_header = "s,t,w,K_cf,H_cf,mu1,mu2,mu3,K_num,H_num";

inline std::string export_csv(const CurveSpec& curve, const CanalConfig& cfg, const SurfacePatch& p) {
  auto nodes = std::vector<Node>();
  for (double s : p.s)
    for (double t : p.t)
      for (double w : p.w) nodes.push_back({s, t, w});
  std::vector<std::string> rows(nodes.size());
  parallel_for(nodes.size(), [&](size_t i) {
    const Node& n = nodes[i];
    std::string row = detail::fmt("%.10g", n.s) + "," + detail::fmt("%.10g", n.t) + "," + detail::fmt("%.10g", n.w);
    double v[7];
    std::fill(v, v + 7, std::nan(""));
    if (usable_node(curve, cfg, n)) {
      try {
        auto cf = closed_form(curve, cfg, n.s, n.t, n.w);
        v[0] = cf.K, v[1] = cf.H, v[2] = cf.mu[0], v[3] = cf.mu[1], v[4] = cf.mu[2];
        auto nu = numeric(curve, cfg, n.s, n.t, n.w);
        v[5] = nu.K, v[6] = nu.H;
      } catch (const Error&) {
        // leave the remaining fields empty
      }
    }
    for (double x : v) row += "," + (std::isnan(x) ? std::string("nan") : detail::fmt("%.10g", x));
    rows[i] = row + "\n";
  });
  std::string out = std::string(csv_header) + "\n";
  for (auto& r : rows) out += r;
  return out;
}

using json = nlohmann::json;

inline json patch_json(const SurfacePatch& p, const JobConfig& job) {
  json j;
  j["version"] = 1;
  j["family"] = {{"j", p.config.j}, {"lambda", p.config.lambda}, {"sigma", p.config.sigma}};
  j["curve"] = job.curve;
  j["radius"] = job.radius;
  j["s"] = p.s;
  j["t"] = p.t;
  j["w"] = p.w;
  json pts = json::array();
  for (const auto& v : p.points) pts.push_back({v[0], v[1], v[2], v[3]});
  j["points"] = pts;
  std::vector<int> deg(p.degenerate.begin(), p.degenerate.end());
  j["degenerate"] = deg;
  return j;
}

inline SurfacePatch patch_from_json(const json& j) {
  SurfacePatch p;
  p.config.j = j.at("family").at("j");
  p.config.lambda = j.at("family").at("lambda");
  p.config.sigma = j.at("family").at("sigma");
  p.config.radius = RadiusProfile::parse(j.at("radius").get<std::string>());
  p.s = j.at("s").get<std::vector<double>>();
  p.t = j.at("t").get<std::vector<double>>();
  p.w = j.at("w").get<std::vector<double>>();
  for (const auto& v : j.at("points")) p.points.push_back(Vec4{{v[0], v[1], v[2], v[3]}});
  for (int d : j.at("degenerate")) p.degenerate.push_back(static_cast<char>(d));
  return p;
}

inline json report_json(const TheoremReport& r) {
  return {{"theorem", r.theorem}, {"max_residual", r.max_residual}, {"tolerance", r.tolerance},
          {"pass", r.pass},       {"nodes", r.nodes},               {"skipped", r.skipped}};
}

inline void write_file(const std::string& path, const std::string& data) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::InvalidConfig, "cannot write " + path);
  f << data;
}

}  // namespace canal
