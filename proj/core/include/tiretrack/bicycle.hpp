#pragma once

#include <cstddef>
#include <vector>

#include "tiretrack/wavefront.hpp"

namespace tiretrack {

/// Bicycle of frame length l on a model surface.
struct BicycleParams {
  double l = 0.5;
  Model model = Model::Sphere;
  int steps_per_sample = 4;  ///< RK4 substeps per front sample interval

  /// l > 0, l < pi/2 on the sphere, steps_per_sample >= 1.
  void validate() const;
  /// cot(l) on the sphere, coth(l) on the hyperboloid.
  [[nodiscard]] double lift() const { return mcot(model, l); }
};

/// d(alpha)/ds = lift * sin(alpha) - kappa.
///
/// alpha is the angle from the front velocity to the frame direction BA
/// (front wheel B toward rear wheel A), measured toward the co-orientation.
/// alpha = pi is the rear wheel trailing straight behind.
double steering_rhs(double alpha, double kappa, const BicycleParams& p);

/// Front speed and curvature form on the RK4 stage grid u_j = j * h / 2,
/// j = 0 .. 2 * N * steps. Shared by the steering and SL(2) integrators, and
/// independent of l, so a bisection over l builds it once.
class FrontProfile {
 public:
  FrontProfile(const WaveFront& front, int steps_per_sample);

  [[nodiscard]] std::size_t samples() const noexcept { return samples_; }
  [[nodiscard]] int steps_per_sample() const noexcept { return steps_; }
  [[nodiscard]] std::size_t total_steps() const noexcept { return samples_ * steps_; }
  [[nodiscard]] double h() const noexcept { return h_; }
  [[nodiscard]] double speed(std::size_t half_step) const noexcept { return speed_[half_step]; }
  [[nodiscard]] double turning(std::size_t half_step) const noexcept { return turning_[half_step]; }
  [[nodiscard]] double max_abs_speed() const noexcept { return vmax_; }

 private:
  std::size_t samples_;
  int steps_;
  double h_;
  double vmax_ = 0.0;
  std::vector<double> speed_;
  std::vector<double> turning_;
};

struct SteeringSolution {
  std::vector<double> alpha;  ///< N + 1 values, alpha[N] at the end of the period; unwrapped
  BicycleParams params;
  double alpha0 = 0.0;
  double periodicity_residual = 0.0;  ///< distance of alpha[N] - alpha[0] from 2*pi*Z
};

/// Classical RK4 in the front parameter:
/// d(alpha)/du = lift * v(u) sin(alpha) - turning(u).
/// Throws StepUnstable if |alpha| leaves [-20 pi, 20 pi].
SteeringSolution integrate_steering(const WaveFront& front, const BicycleParams& p, double alpha0);
SteeringSolution integrate_steering(const FrontProfile& profile, const BicycleParams& p, double alpha0);

/// Rear-wheel track of a closed steering solution.
///
/// The rear is oriented along the frame direction A->B (the riding direction)
/// and co-oriented by the frame normal. Its signed arclength element is
/// -cos(alpha) ds and its curvature is -tan(alpha)/msin(l), so the trailing
/// rear of a convex front has positive length and curvature.
struct RearTrack {
  WaveFront track;
  SteeringSolution alpha_source;
  std::vector<double> front_speed;  ///< |dGamma/du| per sample
  int sigma = 1;
};

/// Throws DegenerateCurve if cos(alpha) vanishes on the whole front.
RearTrack rear_track(const WaveFront& front, const SteeringSolution& sol);

/// Front wheel curve for a rear track. Exact through rear cusps.
WaveFront front_from_rear(const WaveFront& rear, double l, int sigma);

struct SpeedRatioCheck {
  double speed_ratio_residual = 0.0;  ///< max |(ds/dt)^2 - (msin(l)^2 k^2 + 1)| / (msin(l)^2 k^2 + 1)
  double cos_alpha_residual = 0.0;    ///< max ||dt/ds| - |cos alpha||
  std::size_t samples_used = 0;
};

/// Checks (ds/dt)^2 = msin(l)^2 k^2 + 1 and |dt/ds| = |cos alpha| with the
/// rear speed taken from 8th-order periodic differences of rear positions.
/// Samples with |cos alpha| < 1e-3 (cusp neighbourhoods) are skipped.
SpeedRatioCheck speed_ratio_check(const RearTrack& rear);

}  // namespace tiretrack
