#pragma once

#include <string>

#include "canal/canal.hpp"

// shared center curves for the tests
namespace testcurves {

inline const canal::CurveSpec& beta1() {
  static const auto c =
      canal::CurveSpec::parse({"2*sinh(s)", "2*cosh(s)", "sqrt(3)*cos(s)", "sqrt(3)*sin(s)"}, -20, 20);
  return c;
}
inline const canal::CurveSpec& beta2() {
  static const auto c =
      canal::CurveSpec::parse({"sqrt(3)*sinh(s)", "sqrt(3)*cosh(s)", "2*cos(s)", "2*sin(s)"}, -20, 20);
  return c;
}
// unit speed, timelike principal normal
inline const canal::CurveSpec& j2() {
  static const auto c = canal::CurveSpec::parse({"0.4*cosh(2*s)", "0.4*sinh(2*s)", "0.6*cos(s)", "0.6*sin(s)"}, -20, 20);
  return c;
}
// unit speed, timelike trinormal
inline const canal::CurveSpec& j4() {
  static const auto c = canal::CurveSpec::parse({"0.6*cosh(s)", "0.6*sinh(s)", "0.4*cos(2*s)", "0.4*sin(2*s)"}, -20, 20);
  return c;
}
inline const canal::CurveSpec& by_type(int j) {
  switch (j) {
    case 1: return beta1();
    case 2: return j2();
    case 3: return beta2();
    default: return j4();
  }
}
// axis 0 timelike line, otherwise a spacelike line along that axis
inline const canal::CurveSpec& line(int axis) {
  static const canal::CurveSpec lines[4] = {
      canal::CurveSpec::parse({"s", "0", "0", "0"}, -20, 20), canal::CurveSpec::parse({"0", "s", "0", "0"}, -20, 20),
      canal::CurveSpec::parse({"0", "0", "s", "0"}, -20, 20), canal::CurveSpec::parse({"0", "0", "0", "s"}, -20, 20)};
  return lines[axis];
}

}  // namespace testcurves

namespace testcurves {

inline canal::CanalConfig family(int j, int lambda, const std::string& radius = "2*s", int sigma = 1) {
  canal::CanalConfig c;
  c.j = j, c.lambda = lambda, c.sigma = sigma;
  c.radius = canal::RadiusProfile::parse(radius);
  return c;
}

}  // namespace testcurves
