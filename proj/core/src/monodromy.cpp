#include "tiretrack/monodromy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace tiretrack {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kRescale = 1e100;
// Below this log-scale the representative is folded back into plain doubles.
constexpr double kFoldLimit = 200.0;

double wrap_angle(double t) {
  t = std::remainder(t, 2.0 * kPi);
  return t <= -kPi ? t + 2.0 * kPi : t;
}

// log(2 cosh x) without overflow.
double log_two_cosh(double x) {
  const double ax = std::abs(x);
  return ax + std::log1p(std::exp(-2.0 * ax));
}

double max_dev(const Mat2& m, double sign) {
  return std::max({std::abs(m.a - sign), std::abs(m.b), std::abs(m.c), std::abs(m.d - sign)});
}

Mat2 generator(double lift, double v, double w) {
  return {0.5 * lift * v, -0.5 * w, 0.5 * w, -0.5 * lift * v};
}

}  // namespace

double Mat2::max_abs() const noexcept { return std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)}); }

std::string_view to_string(MobiusClass c) noexcept {
  switch (c) {
    case MobiusClass::Elliptic: return "elliptic";
    case MobiusClass::Parabolic: return "parabolic";
    case MobiusClass::Hyperbolic: return "hyperbolic";
    case MobiusClass::Identity: return "identity";
  }
  return "unknown";
}

MobiusMap::MobiusMap(const Mat2& m, double tol_parabolic) : m_(m), tol_(tol_parabolic) {
  const double det = m_.det();
  if (!(det > 0.0)) throw Error(ErrorKind::SpecInvalid, "monodromy matrix must have positive determinant");
  m_ = (1.0 / std::sqrt(det)) * m_;
  canonicalize();
}

MobiusMap::MobiusMap(const Mat2& m, double log_scale, double tol_parabolic)
    : m_(m), log_scale_(log_scale), tol_(tol_parabolic) {
  // The determinant is taken as given: recomputing it from large entries
  // cancels to noise.
  if (log_scale_ < kFoldLimit) {
    m_ = std::exp(log_scale_) * m_;
    log_scale_ = 0.0;
  }
  canonicalize();
}

void MobiusMap::canonicalize() {
  if (m_.trace() < 0.0) m_ = -1.0 * m_;

  if (log_scale_ > 0.0) {
    class_ = log_trace() > std::log(2.0 + tol_) ? MobiusClass::Hyperbolic : MobiusClass::Parabolic;
    return;
  }
  const double t = m_.trace();
  if (t < 2.0 - tol_) {
    class_ = MobiusClass::Elliptic;
  } else if (t <= 2.0 + tol_) {
    class_ = max_dev(m_, 1.0) < tol_ ? MobiusClass::Identity : MobiusClass::Parabolic;
  } else {
    class_ = MobiusClass::Hyperbolic;
  }
}

Mat2 MobiusMap::sl2() const { return log_scale_ == 0.0 ? m_ : std::exp(log_scale_) * m_; }

double MobiusMap::trace() const { return log_scale_ == 0.0 ? m_.trace() : std::exp(log_trace()); }

double MobiusMap::log_trace() const { return log_scale_ + std::log(m_.trace()); }

double MobiusMap::trace_excess() const { return log_scale_ == 0.0 ? m_.trace() - 2.0 : trace(); }

double act(const MobiusMap& map, double theta) {
  const Mat2& m = map.matrix();
  // Homogeneous coordinates (sin, cos) of theta / 2 handle y = inf and c y + d = 0.
  const double s = std::sin(0.5 * theta);
  const double c = std::cos(0.5 * theta);
  return wrap_angle(2.0 * std::atan2(m.a * s + m.b * c, m.c * s + m.d * c));
}

std::vector<FixedPointData> fixed_points(const MobiusMap& map) {
  std::vector<FixedPointData> out;
  if (map.classification() == MobiusClass::Elliptic || map.classification() == MobiusClass::Identity) return out;
  const Mat2& m = map.matrix();
  const double t = m.trace();
  // det of the stored representative: exactly 1, or exp(-2 log_scale).
  const double log_det = -2.0 * map.log_scale();
  const double det = std::exp(log_det);

  auto eigvec_point = [&](double lambda, double log_other_over_this) {
    const double v1a = m.b, v2a = lambda - m.a;
    const double v1b = lambda - m.d, v2b = m.c;
    const bool first = std::hypot(v1a, v2a) >= std::hypot(v1b, v2b);
    const double v1 = first ? v1a : v1b;
    const double v2 = first ? v2a : v2b;
    FixedPointData f;
    f.theta = wrap_angle(2.0 * std::atan2(v1, v2));
    f.y = v2 == 0.0 ? std::numeric_limits<double>::infinity() : v1 / v2;
    f.log_derivative = log_other_over_this;
    f.derivative = std::exp(log_other_over_this);
    return f;
  };

  if (map.classification() == MobiusClass::Parabolic) {
    out.push_back(eigvec_point(0.5 * t, 0.0));
    return out;
  }
  const double disc = std::max(0.0, (m.a - m.d) * (m.a - m.d) + 4.0 * m.b * m.c);
  const double big = 0.5 * (t + std::sqrt(disc));
  const double small = det / big;
  const double log_ratio = log_det - 2.0 * std::log(big);  // log(small / big)
  out.push_back(eigvec_point(big, log_ratio));
  out.push_back(eigvec_point(small, -log_ratio));
  return out;
}

Mat2 sl2_coefficients(double kappa, const BicycleParams& p) { return generator(p.lift(), 1.0, kappa); }

LiftIntegration integrate_lift(const FrontProfile& profile, double lift) {
  const double h = profile.h();
  auto a_at = [&](std::size_t j) { return generator(lift, profile.speed(j), profile.turning(j)); };
  LiftIntegration r;
  Mat2 u{};
  // RK4 on a linear system is U <- S U with S the stage polynomial applied to
  // I, so det U is the product of det S. Forming det U directly would cancel
  // catastrophically once the entries grow.
  double log_det = 0.0;
  for (std::size_t k = 0; k < profile.total_steps(); ++k) {
    const std::size_t j = 2 * k;
    const Mat2 a0 = a_at(j), a1 = a_at(j + 1), a2 = a_at(j + 2);
    const Mat2 k1 = a0;
    const Mat2 k2 = a1 * (Mat2{} + (0.5 * h) * k1);
    const Mat2 k3 = a1 * (Mat2{} + (0.5 * h) * k2);
    const Mat2 k4 = a2 * (Mat2{} + h * k3);
    const Mat2 s = Mat2{} + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    u = s * u;
    log_det += std::log1p(s.det() - 1.0);
    r.max_det_drift = std::max(r.max_det_drift, std::abs(std::expm1(log_det)));
    if (u.max_abs() > kRescale) {
      u = (1.0 / kRescale) * u;
      r.log_scale += std::log(kRescale);
    }
  }
  r.m = u;
  r.log_det = log_det;
  return r;
}

MobiusMap compute_monodromy(const FrontProfile& profile, const BicycleParams& p, double tol_parabolic) {
  p.validate();
  const LiftIntegration r = integrate_lift(profile, p.lift());
  return MobiusMap(r.m, r.log_scale - 0.5 * r.log_det, tol_parabolic);
}

MobiusMap compute_monodromy(const WaveFront& front, const BicycleParams& p, double tol_parabolic) {
  p.validate();
  return compute_monodromy(FrontProfile(front, p.steps_per_sample), p, tol_parabolic);
}

ClosedRear closed_rear(const WaveFront& front, const BicycleParams& p, const MobiusMap& map) {
  const auto fps = fixed_points(map);
  if (fps.empty()) throw Error(ErrorKind::NotHyperbolic, "monodromy has no fixed point");
  const FixedPointData& fp = fps.front();
  return {fp, rear_track(front, integrate_steering(front, p, fp.theta))};
}

DerivativeLaw length_derivative_check(const WaveFront& front, const BicycleParams& p) {
  DerivativeLaw out;
  out.map = compute_monodromy(front, p);
  if (out.map.classification() != MobiusClass::Hyperbolic)
    throw Error(ErrorKind::NotHyperbolic,
                "monodromy is " + std::string(to_string(out.map.classification())) + ", not hyperbolic");
  const ClosedRear cr = closed_rear(front, p, out.map);
  out.theta0 = cr.fixed_point.theta;
  out.derivative = cr.fixed_point.derivative;
  out.log_derivative = cr.fixed_point.log_derivative;
  out.rear_length = algebraic_length(cr.rear.track);
  out.lift = p.lift();
  const double cl = out.lift * out.rear_length;
  out.predicted = std::exp(-cl);
  out.relative_residual = std::abs(std::expm1(out.log_derivative + cl));
  out.unscaled_predicted = std::exp(-out.rear_length);
  out.unscaled_residual = std::abs(std::expm1(out.log_derivative + out.rear_length));
  out.trace = out.map.trace();
  out.trace_predicted = std::exp(log_two_cosh(0.5 * cl));
  out.trace_residual = std::abs(std::expm1(out.map.log_trace() - log_two_cosh(0.5 * cl)));
  out.unscaled_trace_predicted = 2.0 * std::cosh(0.5 * out.rear_length);
  return out;
}

SmallLengthProbe small_l_probe(const WaveFront& front, double l) {
  double vmax = 0.0;
  for (std::size_t i = 0; i < front.size(); ++i) vmax = std::max(vmax, front.speed(i));
  const double lift = mcot(front.model(), l);
  const int steps = std::max(4, static_cast<int>(std::ceil(1.1 * front.step() * lift * vmax / 0.25)));
  const BicycleParams p{l, front.model(), steps};

  SmallLengthProbe out;
  out.l = l;
  out.steps_per_sample = steps;
  out.map = compute_monodromy(front, p);
  out.fixed = fixed_points(out.map);
  for (const auto& f : out.fixed) {
    const double a = std::abs(f.theta);
    out.max_distance_to_0_or_pi = std::max(out.max_distance_to_0_or_pi, std::min(a, kPi - a));
  }
  if (!out.fixed.empty()) out.attracting_distance_to_pi = kPi - std::abs(out.fixed.front().theta);
  return out;
}

DerivativeCurveIdentity derivative_curve_identity(const WaveFront& rear, int steps_per_sample) {
  if (rear.model() != Model::Sphere) throw Error(ErrorKind::WrongModel, "derivative curves are spherical");
  const WaveFront gamma = front_from_rear(rear, kPi / 2.0, 1);
  const LiftIntegration r = integrate_lift(FrontProfile(gamma, steps_per_sample), 0.0);
  const Mat2 m = (1.0 / std::sqrt(r.m.det())) * r.m;
  return {MobiusMap(m), std::min(max_dev(m, 1.0), max_dev(m, -1.0))};
}

}  // namespace tiretrack
