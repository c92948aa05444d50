#include "tiretrack/geometry.hpp"

#include <algorithm>
#include <string>

namespace tiretrack {

std::string_view to_string(Model m) noexcept {
  return m == Model::Sphere ? "sphere" : "hyperbolic";
}

Model model_from_string(std::string_view name) {
  if (name == "sphere") return Model::Sphere;
  if (name == "hyperbolic") return Model::Hyperbolic;
  throw Error(ErrorKind::SpecInvalid, "unknown model '" + std::string(name) + "'");
}

Vec3 normalize_point(const Vec3& v, Model m) {
  const double q = inner(v, v, m);
  if (std::abs(q) < 1e-14) throw Error(ErrorKind::NullVector, "vector has zero model norm");
  if (m == Model::Sphere) return v * (1.0 / std::sqrt(q));
  if (v.z <= 0.0) throw Error(ErrorKind::WrongSheet, "hyperboloid point must have z > 0");
  if (q > 0.0) throw Error(ErrorKind::NotOnModel, "spacelike vector cannot lie on the hyperboloid");
  return v * (1.0 / std::sqrt(-q));
}

SurfacePoint project_to_surface(const Vec3& v, Model m) { return SurfacePoint(v, m); }

SurfacePoint::SurfacePoint(const Vec3& v, Model m) : v_(normalize_point(v, m)), model_(m) {}

TangentVector::TangentVector(const SurfacePoint& base, const Vec3& v) : base_(base), v_(v) {
  // <p,p> = K, so the normal component of v is (<v,p>/K) p.
  const Model m = base.model();
  const Vec3& p = base.v();
  v_ -= (inner(v, p, m) * curvature(m)) * p;
}

TangentVector TangentVector::normalized() const {
  const double n = norm();
  if (n < 1e-300) throw Error(ErrorKind::NullVector, "zero tangent vector");
  return TangentVector(base_, v_ * (1.0 / n));
}

Vec3 geodesic_point(const Vec3& p, const Vec3& t, double d, Model m) {
  return normalize_point(mcos(m, d) * p + msin(m, d) * t, m);
}

SurfacePoint geodesic_point(const SurfacePoint& p, const TangentVector& t, double d) {
  if (d == 0.0) return p;
  return SurfacePoint(geodesic_point(p.v(), t.v(), d, p.model()), p.model());
}

Vec3 geodesic_velocity(const Vec3& p, const Vec3& t, double d, Model m) {
  return (-curvature(m) * msin(m, d)) * p + mcos(m, d) * t;
}

double distance(const Vec3& a, const Vec3& b, Model m) {
  if (m == Model::Sphere) {
    const Vec3 c = cross(a, b, m);
    return std::atan2(std::sqrt(inner(c, c, m)), inner(a, b, m));
  }
  return std::acosh(std::max(1.0, -inner(a, b, m)));
}

}  // namespace tiretrack
