#include "tiretrack/bicycle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace tiretrack {

namespace {

constexpr double kPi = std::numbers::pi;

// Periodic 4-point Lagrange interpolation of a sampled field at fractional index x.
double cubic_periodic(const std::vector<double>& f, double x) {
  const auto n = static_cast<long>(f.size());
  const double fl = std::floor(x);
  const double t = x - fl;
  const long i = static_cast<long>(fl);
  auto at = [&](long k) { return f[static_cast<std::size_t>(((k % n) + n) % n)]; };
  const double fm = at(i - 1), f0 = at(i), f1 = at(i + 1), f2 = at(i + 2);
  return f0 + t * (-(fm / 3.0) - f0 / 2.0 + f1 - f2 / 6.0) +
         t * t * ((fm + f1) / 2.0 - f0) + t * t * t * ((f2 - fm) / 6.0 + (f0 - f1) / 2.0);
}

}  // namespace

void BicycleParams::validate() const {
  if (!(l > 0.0) || !std::isfinite(l)) throw Error(ErrorKind::SpecInvalid, "bicycle length must be > 0");
  if (model == Model::Sphere && !(l < kPi / 2.0))
    throw Error(ErrorKind::SpecInvalid, "spherical bicycle length must be < pi/2");
  if (steps_per_sample < 1) throw Error(ErrorKind::SpecInvalid, "steps_per_sample must be >= 1");
}

double steering_rhs(double alpha, double kappa, const BicycleParams& p) {
  return p.lift() * std::sin(alpha) - kappa;
}

FrontProfile::FrontProfile(const WaveFront& front, int steps_per_sample)
    : samples_(front.size()), steps_(steps_per_sample) {
  if (steps_per_sample < 1) throw Error(ErrorKind::SpecInvalid, "steps_per_sample must be >= 1");
  h_ = front.step() / steps_;
  const std::size_t points = 2 * samples_ * static_cast<std::size_t>(steps_) + 1;
  speed_.resize(points);
  turning_.resize(points);
  const auto half_per_sample = static_cast<std::size_t>(2 * steps_);

  std::vector<double> v_samples, w_samples;
  if (!front.source()) {
    v_samples.reserve(samples_);
    w_samples.reserve(samples_);
    for (const auto& s : front.samples()) {
      v_samples.push_back(s.speed);
      w_samples.push_back(s.turning);
    }
  }
  for (std::size_t j = 0; j < points; ++j) {
    if (j % half_per_sample == 0) {
      const FrameSample& s = front[(j / half_per_sample) % samples_];
      speed_[j] = s.speed;
      turning_[j] = s.turning;
    } else if (front.source()) {
      const FrameSample s = front.source()->frame(0.5 * h_ * static_cast<double>(j));
      speed_[j] = s.speed;
      turning_[j] = s.turning;
    } else {
      const double x = static_cast<double>(j) / static_cast<double>(half_per_sample);
      speed_[j] = cubic_periodic(v_samples, x);
      turning_[j] = cubic_periodic(w_samples, x);
    }
    vmax_ = std::max(vmax_, std::abs(speed_[j]));
  }
}

SteeringSolution integrate_steering(const FrontProfile& profile, const BicycleParams& p, double alpha0) {
  p.validate();
  if (profile.steps_per_sample() != p.steps_per_sample)
    throw Error(ErrorKind::SpecInvalid, "profile built with a different step count");
  const double c = p.lift();
  const double h = profile.h();
  auto rhs = [&](std::size_t j, double a) { return c * profile.speed(j) * std::sin(a) - profile.turning(j); };

  SteeringSolution sol;
  sol.params = p;
  sol.alpha0 = alpha0;
  sol.alpha.reserve(profile.samples() + 1);
  sol.alpha.push_back(alpha0);
  double a = alpha0;
  const auto steps = static_cast<std::size_t>(p.steps_per_sample);
  for (std::size_t k = 0; k < profile.total_steps(); ++k) {
    const std::size_t j = 2 * k;
    const double k1 = rhs(j, a);
    const double k2 = rhs(j + 1, a + 0.5 * h * k1);
    const double k3 = rhs(j + 1, a + 0.5 * h * k2);
    const double k4 = rhs(j + 2, a + h * k3);
    a += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!(std::abs(a) <= 20.0 * kPi))
      throw Error(ErrorKind::StepUnstable, "steering angle left the [-20pi, 20pi] window");
    if ((k + 1) % steps == 0) sol.alpha.push_back(a);
  }
  const double drift = sol.alpha.back() - sol.alpha.front();
  sol.periodicity_residual = std::abs(drift - 2.0 * kPi * std::round(drift / (2.0 * kPi)));
  return sol;
}

SteeringSolution integrate_steering(const WaveFront& front, const BicycleParams& p, double alpha0) {
  p.validate();
  return integrate_steering(FrontProfile(front, p.steps_per_sample), p, alpha0);
}

RearTrack rear_track(const WaveFront& front, const SteeringSolution& sol) {
  if (sol.alpha.size() != front.size() + 1)
    throw Error(ErrorKind::SpecInvalid, "steering solution does not belong to this front");
  const BicycleParams& p = sol.params;
  const Model m = front.model();
  const double c = p.lift();
  const double sl = msin(m, p.l);

  std::vector<FrameSample> rear;
  std::vector<double> front_speed;
  rear.reserve(front.size());
  front_speed.reserve(front.size());
  for (std::size_t i = 0; i < front.size(); ++i) {
    const FrameSample& f = front[i];
    const double a = sol.alpha[i];
    const double ca = std::cos(a);
    const double sa = std::sin(a);
    // Unit direction at the front wheel toward the rear wheel.
    const Vec3 toward_rear = sa * f.normal + ca * f.tangent;
    const double da = c * f.speed * sa - f.turning;

    FrameSample r;
    r.position = geodesic_point(f.position, toward_rear, p.l, m);
    r.tangent = -geodesic_velocity(f.position, toward_rear, p.l, m);
    r.normal = sa * f.tangent - ca * f.normal;
    r.speed = -ca * f.speed;
    r.turning = sa * f.speed / sl;
    r.dspeed = sa * da * f.speed - ca * f.dspeed;
    r.dturning = (ca * da * f.speed + sa * f.dspeed) / sl;
    rear.push_back(r);
    front_speed.push_back(std::abs(f.speed));
  }
  return RearTrack{WaveFront::from_samples(m, front.period(), std::move(rear)), sol, std::move(front_speed), 1};
}

WaveFront front_from_rear(const WaveFront& rear, double l, int sigma) {
  if (rear.source()) {
    return WaveFront::sample(std::make_shared<FrontFromRearCurve>(rear.source(), l, sigma), rear.size());
  }
  if (sigma != 1 && sigma != -1) throw Error(ErrorKind::SpecInvalid, "sigma must be +1 or -1");
  std::vector<FrameSample> front;
  front.reserve(rear.size());
  for (const auto& r : rear.samples()) front.push_back(front_frame_from_rear(r, l, sigma, rear.model()));
  return WaveFront::from_samples(rear.model(), rear.period(), std::move(front));
}

SpeedRatioCheck speed_ratio_check(const RearTrack& rear) {
  static constexpr std::array<double, 4> kFd{4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};
  const WaveFront& track = rear.track;
  const Model m = track.model();
  const double sl = msin(m, rear.alpha_source.params.l);
  const std::size_t n = track.size();
  const double h = track.step();

  SpeedRatioCheck out;
  for (std::size_t i = 0; i < n; ++i) {
    const double ca = std::cos(rear.alpha_source.alpha[i]);
    if (std::abs(ca) < 1e-3) continue;
    Vec3 d{};
    for (std::size_t k = 1; k <= kFd.size(); ++k) {
      d += kFd[k - 1] * (track[(i + k) % n].position - track[(i + n - k) % n].position);
    }
    const double rear_speed = tangent_norm(d * (1.0 / h), m);
    const double front_speed = rear.front_speed[i];
    const double k = track.kappa(i);
    const double expected = sl * sl * k * k + 1.0;
    const double ratio = front_speed / rear_speed;
    out.speed_ratio_residual = std::max(out.speed_ratio_residual, std::abs(ratio * ratio - expected) / expected);
    out.cos_alpha_residual = std::max(out.cos_alpha_residual, std::abs(rear_speed / front_speed - std::abs(ca)));
    ++out.samples_used;
  }
  return out;
}

}  // namespace tiretrack
