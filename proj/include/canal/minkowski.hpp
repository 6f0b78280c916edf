#pragma once

#include <array>
#include <cmath>

#include "error.hpp"

namespace canal {

// signature (-,+,+,+); index 0 is the time axis
template <class T>
struct BasicVec4 {
  std::array<T, 4> x{};

  T& operator[](int i) { return x[i]; }
  T operator[](int i) const { return x[i]; }

  BasicVec4& operator+=(const BasicVec4& o) {
    for (int i = 0; i < 4; ++i) x[i] += o.x[i];
    return *this;
  }
  BasicVec4& operator-=(const BasicVec4& o) {
    for (int i = 0; i < 4; ++i) x[i] -= o.x[i];
    return *this;
  }
  BasicVec4& operator*=(T a) {
    for (auto& v : x) v *= a;
    return *this;
  }
  friend BasicVec4 operator+(BasicVec4 a, const BasicVec4& b) { return a += b; }
  friend BasicVec4 operator-(BasicVec4 a, const BasicVec4& b) { return a -= b; }
  friend BasicVec4 operator-(BasicVec4 a) { return a *= T(-1); }
  friend BasicVec4 operator*(T s, BasicVec4 a) { return a *= s; }
  friend BasicVec4 operator*(BasicVec4 a, T s) { return a *= s; }
  friend BasicVec4 operator/(BasicVec4 a, T s) {
    for (auto& v : a.x) v /= s;
    return a;
  }
  friend bool operator==(const BasicVec4&, const BasicVec4&) = default;
};

using Vec4 = BasicVec4<double>;

inline Vec4 basis(int i) {
  Vec4 e;
  e[i] = 1.0;
  return e;
}

enum class CausalCharacter { Spacelike, Timelike, Null };

inline constexpr double tau_null = 1e-10;

template <class T>
T inner(const BasicVec4<T>& a, const BasicVec4<T>& b) {
  return -a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
}

template <class T>
T euclid_norm(const BasicVec4<T>& a) {
  using std::sqrt;
  return sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2] + a[3] * a[3]);
}

namespace detail {
template <class T>
T det3(T a, T b, T c, T d, T e, T f, T g, T h, T i) {
  return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g);
}
}  // namespace detail

// formal determinant with first row (-e1, e2, e3, e4)
template <class T>
BasicVec4<T> triple_cross(const BasicVec4<T>& x, const BasicVec4<T>& y, const BasicVec4<T>& z) {
  BasicVec4<T> r;
  for (int i = 0; i < 4; ++i) {
    int c[3], n = 0;
    for (int k = 0; k < 4; ++k)
      if (k != i) c[n++] = k;
    T m = detail::det3(x[c[0]], x[c[1]], x[c[2]], y[c[0]], y[c[1]],
                            y[c[2]], z[c[0]], z[c[1]], z[c[2]]);
    r[i] = (i % 2 == 0 ? m : -m);
  }
  r[0] = -r[0];
  return r;
}

inline CausalCharacter causal_character(const Vec4& v, double tol = tau_null) {
  double q = inner(v, v);
  if (q < -tol) return CausalCharacter::Timelike;
  if (std::abs(q) <= tol) return CausalCharacter::Null;
  return CausalCharacter::Spacelike;
}

inline double norm(const Vec4& v) { return std::sqrt(std::abs(inner(v, v))); }

template <class T>
BasicVec4<T> normalize(const BasicVec4<T>& v, double tol = tau_null) {
  T q = inner(v, v);
  if (std::abs(static_cast<double>(q)) <= tol) throw Error(ErrorKind::NullVector, "cannot normalize a null vector");
  using std::sqrt, std::abs;
  return v / sqrt(abs(q));
}

inline double det4(const std::array<Vec4, 4>& m) {
  double d = 0;
  for (int i = 0; i < 4; ++i) {
    int c[3], n = 0;
    for (int k = 0; k < 4; ++k)
      if (k != i) c[n++] = k;
    double minor = detail::det3(m[1][c[0]], m[1][c[1]], m[1][c[2]], m[2][c[0]],
                                m[2][c[1]], m[2][c[2]], m[3][c[0]], m[3][c[1]],
                                m[3][c[2]]);
    d += (i % 2 == 0 ? 1 : -1) * m[0][i] * minor;
  }
  return d;
}

}  // namespace canal
