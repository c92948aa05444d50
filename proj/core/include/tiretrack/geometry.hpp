#pragma once

#include <cmath>
#include <string_view>

#include "tiretrack/error.hpp"

namespace tiretrack {

/// Constant-curvature surface used as the computational model.
///
/// Sphere: unit sphere in R^3 with the Euclidean form diag(1,1,1).
/// Hyperbolic: upper sheet of the hyperboloid <x,x> = -1 under the
/// Lorentz form diag(1,1,-1). Every formula in this library is written once
/// against the model trig below; swapping (sin, cos) for (sinh, cosh) is the
/// only difference between the two geometries.
enum class Model { Sphere, Hyperbolic };

std::string_view to_string(Model m) noexcept;
Model model_from_string(std::string_view name);

/// Gaussian curvature of the model: +1 (Sphere) or -1 (Hyperbolic).
constexpr double curvature(Model m) noexcept { return m == Model::Sphere ? 1.0 : -1.0; }

/// cos / cosh.
inline double mcos(Model m, double x) noexcept {
  return m == Model::Sphere ? std::cos(x) : std::cosh(x);
}
/// sin / sinh.
inline double msin(Model m, double x) noexcept {
  return m == Model::Sphere ? std::sin(x) : std::sinh(x);
}
/// cot / coth.
inline double mcot(Model m, double x) noexcept { return mcos(m, x) / msin(m, x); }

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3& operator+=(const Vec3& o) noexcept {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr Vec3& operator-=(const Vec3& o) noexcept {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  constexpr Vec3& operator*=(double s) noexcept {
    x *= s;
    y *= s;
    z *= s;
    return *this;
  }
  friend constexpr Vec3 operator+(Vec3 a, const Vec3& b) noexcept { return a += b; }
  friend constexpr Vec3 operator-(Vec3 a, const Vec3& b) noexcept { return a -= b; }
  friend constexpr Vec3 operator-(const Vec3& a) noexcept { return {-a.x, -a.y, -a.z}; }
  friend constexpr Vec3 operator*(double s, Vec3 a) noexcept { return a *= s; }
  friend constexpr Vec3 operator*(Vec3 a, double s) noexcept { return a *= s; }
  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

/// Model bilinear form. Lorentz case negates the z product.
constexpr double inner(const Vec3& u, const Vec3& w, Model m) noexcept {
  const double zz = u.z * w.z;
  return u.x * w.x + u.y * w.y + (m == Model::Sphere ? zz : -zz);
}

/// Cross product adapted to the model form.
///
/// Hyperbolic: determinant with rows (i, j, -k), (u), (w), which makes the
/// result Lorentz-orthogonal to both factors. With this convention a
/// positively oriented frame (P, T, N) on either model satisfies
/// cross(P, T) = N and cross(N, P) = T.
constexpr Vec3 cross(const Vec3& u, const Vec3& w, Model m) noexcept {
  Vec3 r{u.y * w.z - u.z * w.y, u.z * w.x - u.x * w.z, u.x * w.y - u.y * w.x};
  if (m == Model::Hyperbolic) r.z = -r.z;
  return r;
}

/// Norm of a vector on which the model form is positive (tangent vectors).
inline double tangent_norm(const Vec3& v, Model m) noexcept { return std::sqrt(inner(v, v, m)); }

/// A point on the model surface: |<v,v>| = 1 and, for the hyperboloid, z > 0.
class SurfacePoint {
 public:
  /// Normalizes v onto the surface; see project_to_surface for errors.
  SurfacePoint(const Vec3& v, Model m);

  [[nodiscard]] const Vec3& v() const noexcept { return v_; }
  [[nodiscard]] Model model() const noexcept { return model_; }

  static SurfacePoint north_pole(Model m) { return SurfacePoint({0.0, 0.0, 1.0}, m); }

 private:
  Vec3 v_;
  Model model_;
};

/// Tangent vector at a surface point. Construction projects out the normal
/// component so tangency holds to rounding.
class TangentVector {
 public:
  TangentVector(const SurfacePoint& base, const Vec3& v);

  [[nodiscard]] const SurfacePoint& base() const noexcept { return base_; }
  [[nodiscard]] const Vec3& v() const noexcept { return v_; }
  [[nodiscard]] double norm() const noexcept { return tangent_norm(v_, base_.model()); }
  [[nodiscard]] TangentVector normalized() const;

 private:
  SurfacePoint base_;
  Vec3 v_;
};

/// Rescales v so that |<v,v>| = 1.
/// Throws NullVector when |<v,v>| < 1e-14, WrongSheet for a hyperbolic vector
/// with z <= 0 and NotOnModel for a spacelike hyperbolic vector.
SurfacePoint project_to_surface(const Vec3& v, Model m);

/// Same normalization on a raw vector, used on hot paths.
Vec3 normalize_point(const Vec3& v, Model m);

/// Point at distance d along the geodesic leaving p with unit velocity t:
/// mcos(d) p + msin(d) t.
SurfacePoint geodesic_point(const SurfacePoint& p, const TangentVector& t, double d);
Vec3 geodesic_point(const Vec3& p, const Vec3& t, double d, Model m);

/// Velocity of that geodesic at distance d (parallel transport of t).
Vec3 geodesic_velocity(const Vec3& p, const Vec3& t, double d, Model m);

/// Geodesic distance between two surface points.
double distance(const Vec3& a, const Vec3& b, Model m);

}  // namespace tiretrack
