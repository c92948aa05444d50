#pragma once

#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "tiretrack/geometry.hpp"

namespace tiretrack {

/// Co-oriented frame of a wave front at one parameter value.
///
/// The pair (position, normal) is the smooth object even through cusps: the
/// tangent is defined as cross(normal, position), so it never flips, and the
/// derivative of the position is `speed * tangent` with a *signed* speed that
/// changes sign at every cusp. `turning` is the curvature form kappa*ds/du,
/// equal to -<d(normal)/du, tangent>; it is smooth and nonzero at cusps.
struct FrameSample {
  Vec3 position;
  Vec3 tangent;
  Vec3 normal;
  double speed = 0.0;
  double turning = 0.0;
  double dspeed = std::numeric_limits<double>::quiet_NaN();
  double dturning = std::numeric_limits<double>::quiet_NaN();

  /// Geodesic curvature relative to the co-orientation (infinite at a cusp).
  [[nodiscard]] double kappa() const noexcept { return turning / speed; }
};

/// A closed curve that can be evaluated at any parameter value.
class Curve {
 public:
  Curve(Model model, double period) : model_(model), period_(period) {}
  virtual ~Curve() = default;

  [[nodiscard]] Model model() const noexcept { return model_; }
  [[nodiscard]] double period() const noexcept { return period_; }
  [[nodiscard]] virtual FrameSample frame(double u) const = 0;

 private:
  Model model_;
  double period_;
};

using CurvePtr = std::shared_ptr<const Curve>;

enum class CurveKind { Circle, PolarFourier };

/// Generator for test fronts: a polar graph rho(u) about a base point.
///
/// rho(u) = rho0 + sum_n fourier_cos[n-1] cos(n u) + fourier_sin[n-1] sin(n u).
/// For a Circle only `radius` is used. Circles are traversed counterclockwise
/// around the base point and co-oriented toward it, so their curvature is
/// positive (cot r on the sphere, coth r on the hyperboloid).
struct CurveSpec {
  std::string id;
  Model model = Model::Sphere;
  CurveKind kind = CurveKind::Circle;
  Vec3 base_point{0.0, 0.0, 1.0};
  double radius = 0.0;
  double rho0 = 0.0;
  std::vector<double> fourier_cos;
  std::vector<double> fourier_sin;
  int samples = 1024;

  static CurveSpec circle(Model m, double r, int samples = 1024);
  static CurveSpec polar_fourier(Model m, double rho0, std::vector<double> cos_coeffs,
                                 std::vector<double> sin_coeffs, int samples = 1024);

  /// Polar radius rho(u).
  [[nodiscard]] double radius_at(double u) const;

  /// Throws SpecInvalid on out-of-range radius (checked on an 8N grid).
  void validate() const;
};

/// Analytic polar curve built from a spec (validated on construction).
class PolarCurve final : public Curve {
 public:
  explicit PolarCurve(CurveSpec spec);

  [[nodiscard]] FrameSample frame(double u) const override;
  [[nodiscard]] const CurveSpec& spec() const noexcept { return spec_; }

 private:
  CurveSpec spec_;
  Vec3 p0_, e1_, e2_;
};

/// Front moved a signed distance along its co-orientation. Exact: position,
/// frame and curvature follow from the base frame in closed form.
class EquidistantCurve final : public Curve {
 public:
  EquidistantCurve(CurvePtr base, double distance);

  [[nodiscard]] FrameSample frame(double u) const override;

 private:
  CurvePtr base_;
  double distance_;
};

/// Front-wheel curve of a bicycle of length l whose rear wheel traces `rear`:
/// P = mcos(l) rear + sigma msin(l) T_rear. Needs dspeed/dturning of the rear.
/// With l = pi/2 on the sphere this is the derivative curve of the rear.
class FrontFromRearCurve final : public Curve {
 public:
  FrontFromRearCurve(CurvePtr rear, double l, int sigma);

  [[nodiscard]] FrameSample frame(double u) const override;

 private:
  CurvePtr rear_;
  double l_;
  int sigma_;
};

/// Same curve traversed from a different starting parameter.
class ShiftedCurve final : public Curve {
 public:
  ShiftedCurve(CurvePtr base, double shift)
      : Curve(base->model(), base->period()), base_(std::move(base)), shift_(shift) {}

  [[nodiscard]] FrameSample frame(double u) const override { return base_->frame(u + shift_); }

 private:
  CurvePtr base_;
  double shift_;
};

CurvePtr make_curve(const CurveSpec& spec);

/// Frame of the point reached by moving `distance` along the co-orientation.
FrameSample equidistant_frame(const FrameSample& base, double distance, Model m);

/// Front frame for a rear frame: P = mcos(l) rear + sigma msin(l) T_rear.
/// Front turning is NaN when the rear sample has no dspeed/dturning.
FrameSample front_frame_from_rear(const FrameSample& rear, double l, int sigma, Model m);

}  // namespace tiretrack
