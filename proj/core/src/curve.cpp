#include "tiretrack/curve.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "jet.hpp"

namespace tiretrack {

using detail::Jet3;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Jet3 radius_jet(const CurveSpec& spec, double u) {
  if (spec.kind == CurveKind::Circle) return {spec.radius, 0.0, 0.0, 0.0};
  Jet3 r{spec.rho0, 0.0, 0.0, 0.0};
  const std::size_t n_max = std::max(spec.fourier_cos.size(), spec.fourier_sin.size());
  for (std::size_t k = 1; k <= n_max; ++k) {
    const double n = static_cast<double>(k);
    const double c = std::cos(n * u);
    const double s = std::sin(n * u);
    const double a = k <= spec.fourier_cos.size() ? spec.fourier_cos[k - 1] : 0.0;
    const double b = k <= spec.fourier_sin.size() ? spec.fourier_sin[k - 1] : 0.0;
    r.v += a * c + b * s;
    r.d1 += n * (-a * s + b * c);
    r.d2 += n * n * (-a * c - b * s);
    r.d3 += n * n * n * (a * s - b * c);
  }
  return r;
}

Vec3 axis(const detail::JetVec3& p, int order) {
  auto pick = [order](const Jet3& j) {
    switch (order) {
      case 0: return j.v;
      case 1: return j.d1;
      case 2: return j.d2;
      default: return j.d3;
    }
  };
  return {pick(p.x), pick(p.y), pick(p.z)};
}

bool finite(const std::vector<double>& xs) {
  for (double x : xs)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace

CurveSpec CurveSpec::circle(Model m, double r, int samples) {
  CurveSpec s;
  s.model = m;
  s.kind = CurveKind::Circle;
  s.radius = r;
  s.samples = samples;
  return s;
}

CurveSpec CurveSpec::polar_fourier(Model m, double rho0, std::vector<double> cos_coeffs,
                                   std::vector<double> sin_coeffs, int samples) {
  CurveSpec s;
  s.model = m;
  s.kind = CurveKind::PolarFourier;
  s.rho0 = rho0;
  s.fourier_cos = std::move(cos_coeffs);
  s.fourier_sin = std::move(sin_coeffs);
  s.samples = samples;
  return s;
}

double CurveSpec::radius_at(double u) const { return radius_jet(*this, u).v; }

void CurveSpec::validate() const {
  if (samples < 64) throw Error(ErrorKind::SpecInvalid, "samples must be >= 64");
  if (kind == CurveKind::Circle) {
    if (!(radius > 0.0)) throw Error(ErrorKind::SpecInvalid, "circle radius must be > 0");
    if (model == Model::Sphere && !(radius < std::numbers::pi))
      throw Error(ErrorKind::SpecInvalid, "spherical circle radius must be < pi");
    if (!std::isfinite(radius)) throw Error(ErrorKind::SpecInvalid, "circle radius not finite");
  } else {
    if (!std::isfinite(rho0) || !finite(fourier_cos) || !finite(fourier_sin))
      throw Error(ErrorKind::SpecInvalid, "non-finite Fourier coefficient");
    const int grid = 8 * samples;
    for (int i = 0; i < grid; ++i) {
      const double rho = radius_at(kTwoPi * i / grid);
      if (!(rho > 0.0))
        throw Error(ErrorKind::SpecInvalid,
                    "polar radius must stay positive (min found " + std::to_string(rho) + ")");
      if (model == Model::Sphere && !(rho < std::numbers::pi))
        throw Error(ErrorKind::SpecInvalid, "spherical polar radius must stay below pi");
    }
  }
  const double q = inner(base_point, base_point, model);
  if (model == Model::Sphere ? q <= 0.0 : (q >= 0.0 || base_point.z <= 0.0))
    throw Error(ErrorKind::SpecInvalid, "base point is not on the model surface");
}

PolarCurve::PolarCurve(CurveSpec spec) : Curve(spec.model, kTwoPi), spec_(std::move(spec)) {
  spec_.validate();
  const Model m = spec_.model;
  p0_ = normalize_point(spec_.base_point, m);
  // Tangent frame at the base point: project a coordinate axis, then complete
  // with cross(p0, e1) so the polar angle runs counterclockwise.
  const SurfacePoint base(p0_, m);
  Vec3 seed{1.0, 0.0, 0.0};
  if (m == Model::Sphere && std::abs(p0_.x) > 0.9) seed = {0.0, 1.0, 0.0};
  e1_ = TangentVector(base, seed).normalized().v();
  e2_ = cross(p0_, e1_, m);
}

FrameSample PolarCurve::frame(double u) const {
  const Model m = model();
  const Jet3 rho = radius_jet(spec_, u);
  const double cr = mcos(m, rho.v);
  const double sr = msin(m, rho.v);
  const double k = curvature(m);
  // d/dx of mcos is -K msin, of msin is mcos.
  const Jet3 c = detail::compose(rho, cr, -k * sr, -k * cr, k * k * sr);
  const Jet3 s = detail::compose(rho, sr, cr, -k * sr, -k * cr);
  const double cu = std::cos(u);
  const double su = std::sin(u);
  const Jet3 s_cos = s * Jet3{cu, -su, -cu, su};
  const Jet3 s_sin = s * Jet3{su, cu, -su, -cu};
  auto component = [&](double p, double a, double b) {
    return p * c + (a * s_cos + b * s_sin);
  };
  const detail::JetVec3 pos{component(p0_.x, e1_.x, e2_.x), component(p0_.y, e1_.y, e2_.y),
                            component(p0_.z, e1_.z, e2_.z)};
  const Vec3 p = axis(pos, 0);
  const Vec3 p1 = axis(pos, 1);
  const Vec3 p2 = axis(pos, 2);
  const Vec3 p3 = axis(pos, 3);

  FrameSample f;
  f.position = p;
  f.speed = tangent_norm(p1, m);
  f.tangent = p1 * (1.0 / f.speed);
  f.normal = cross(p, f.tangent, m);
  f.turning = inner(p2, f.normal, m) / f.speed;
  f.dspeed = inner(p2, f.tangent, m);
  // The normal of a co-oriented frame moves as dn/du = -turning * T.
  f.dturning = (inner(p3, f.normal, m) - 2.0 * f.turning * f.dspeed) / f.speed;
  return f;
}

EquidistantCurve::EquidistantCurve(CurvePtr base, double distance)
    : Curve(base->model(), base->period()), base_(std::move(base)), distance_(distance) {}

FrameSample equidistant_frame(const FrameSample& b, double distance, Model m) {
  const double c = mcos(m, distance);
  const double s = msin(m, distance);
  const double k = curvature(m);
  FrameSample f;
  f.position = geodesic_point(b.position, b.normal, distance, m);
  f.normal = geodesic_velocity(b.position, b.normal, distance, m);
  f.tangent = b.tangent;
  f.speed = c * b.speed - s * b.turning;
  f.turning = k * s * b.speed + c * b.turning;
  f.dspeed = c * b.dspeed - s * b.dturning;
  f.dturning = k * s * b.dspeed + c * b.dturning;
  return f;
}

FrameSample EquidistantCurve::frame(double u) const {
  return equidistant_frame(base_->frame(u), distance_, model());
}

FrontFromRearCurve::FrontFromRearCurve(CurvePtr rear, double l, int sigma)
    : Curve(rear->model(), rear->period()), rear_(std::move(rear)), l_(l), sigma_(sigma) {
  if (sigma != 1 && sigma != -1) throw Error(ErrorKind::SpecInvalid, "sigma must be +1 or -1");
  if (!(l > 0.0)) throw Error(ErrorKind::SpecInvalid, "bicycle length must be > 0");
}

FrameSample FrontFromRearCurve::frame(double u) const {
  const Model m = model();
  const FrameSample r = rear_->frame(u);
  if (!std::isfinite(r.dspeed) || !std::isfinite(r.dturning))
    throw Error(ErrorKind::SpecInvalid, "rear curve lacks derivative data");
  return front_frame_from_rear(r, l_, sigma_, m);
}

FrameSample front_frame_from_rear(const FrameSample& r, double l, int sigma, Model m) {
  const double c = mcos(m, l);
  const double s = msin(m, l) * sigma;
  const double k = curvature(m);
  const Vec3& g = r.position;
  const Vec3& t = r.tangent;
  const Vec3& n = r.normal;
  const double v = r.speed;
  const double w = r.turning;

  // dT/du = -K v g + w n and dn/du = -w T for the rear frame.
  const Vec3 lead = c * t - (s * k) * g;
  const Vec3 p1 = v * lead + (s * w) * n;
  const Vec3 p2 = r.dspeed * lead + (c * v) * ((-k * v) * g + w * n) - (s * k * v * v) * t +
                  (s * r.dturning) * n - (s * w * w) * t;

  FrameSample f;
  f.position = normalize_point(c * g + s * t, m);
  f.speed = tangent_norm(p1, m);
  f.tangent = p1 * (1.0 / f.speed);
  f.normal = cross(f.position, f.tangent, m);
  f.turning = inner(p2, f.normal, m) / f.speed;
  f.dspeed = inner(p2, f.tangent, m);
  return f;
}

CurvePtr make_curve(const CurveSpec& spec) { return std::make_shared<PolarCurve>(spec); }

}  // namespace tiretrack
