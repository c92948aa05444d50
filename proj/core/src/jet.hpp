#pragma once

// Third-order forward-mode derivatives: value plus first three derivatives
// with respect to the curve parameter. Only what the polar embedding needs.

namespace tiretrack::detail {

struct Jet3 {
  double v = 0.0, d1 = 0.0, d2 = 0.0, d3 = 0.0;
};

inline Jet3 operator+(const Jet3& a, const Jet3& b) {
  return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2, a.d3 + b.d3};
}

inline Jet3 operator*(double s, const Jet3& a) { return {s * a.v, s * a.d1, s * a.d2, s * a.d3}; }

inline Jet3 operator*(const Jet3& a, const Jet3& b) {
  return {a.v * b.v, a.d1 * b.v + a.v * b.d1, a.d2 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d2,
          a.d3 * b.v + 3.0 * a.d2 * b.d1 + 3.0 * a.d1 * b.d2 + a.v * b.d3};
}

/// phi(f) given phi and its first three derivatives evaluated at f.v (Faa di Bruno).
inline Jet3 compose(const Jet3& f, double p0, double p1, double p2, double p3) {
  return {p0, p1 * f.d1, p2 * f.d1 * f.d1 + p1 * f.d2,
          p3 * f.d1 * f.d1 * f.d1 + 3.0 * p2 * f.d1 * f.d2 + p1 * f.d3};
}

struct JetVec3 {
  Jet3 x, y, z;
};

}  // namespace tiretrack::detail
