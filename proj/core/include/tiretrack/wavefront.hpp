#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tiretrack/curve.hpp"

namespace tiretrack {

/// Cusp between samples `index` and `index + 1` (cyclic). `u` is the
/// linearly interpolated zero of the signed speed.
struct Cusp {
  std::size_t index = 0;
  double u = 0.0;
};

struct CuspScan {
  std::vector<Cusp> cusps;
  std::vector<int> sign;
};

/// Closed wave front sampled on the uniform grid u_i = i * period / N.
///
/// Co-orientation convention: fronts built from a CurveSpec are co-oriented
/// toward the base point, so a properly oriented convex front has positive
/// total curvature and its dual circle has radius pi/2 - r. Every derived
/// front (dual, equidistant, rear track) carries its co-orientation along, and
/// the sign of the arclength element is the sign of <dP/du, T>.
class WaveFront {
 public:
  /// Samples an analytic curve. The curve is kept so that integrators can
  /// evaluate between samples.
  static WaveFront sample(CurvePtr curve, std::size_t samples);

  /// Sampled-only front, e.g. a rear track or a curve read back from CSV.
  static WaveFront from_samples(Model model, double period, std::vector<FrameSample> samples);

  [[nodiscard]] Model model() const noexcept { return model_; }
  [[nodiscard]] double period() const noexcept { return period_; }
  [[nodiscard]] bool closed() const noexcept { return true; }
  [[nodiscard]] std::size_t size() const noexcept { return samples_.size(); }
  [[nodiscard]] double step() const noexcept { return period_ / static_cast<double>(size()); }
  [[nodiscard]] double parameter(std::size_t i) const noexcept { return step() * static_cast<double>(i); }

  [[nodiscard]] const std::vector<FrameSample>& samples() const noexcept { return samples_; }
  [[nodiscard]] const FrameSample& operator[](std::size_t i) const noexcept { return samples_[i]; }
  [[nodiscard]] const CurvePtr& source() const noexcept { return source_; }

  [[nodiscard]] std::vector<Vec3> positions() const;
  /// dP/du.
  [[nodiscard]] Vec3 d1(std::size_t i) const;
  /// d2P/du2; NaN components when the sample carries no dspeed.
  [[nodiscard]] Vec3 d2(std::size_t i) const;
  /// |dP/du|.
  [[nodiscard]] double speed(std::size_t i) const noexcept;
  [[nodiscard]] double kappa(std::size_t i) const noexcept { return samples_[i].kappa(); }
  [[nodiscard]] int sign(std::size_t i) const noexcept { return sign_[i]; }
  [[nodiscard]] const std::vector<int>& signs() const noexcept { return sign_; }
  [[nodiscard]] const std::vector<Cusp>& cusps() const noexcept { return cusps_; }

 private:
  WaveFront(Model model, double period, std::vector<FrameSample> samples, CurvePtr source);

  Model model_;
  double period_;
  std::vector<FrameSample> samples_;
  CurvePtr source_;
  std::vector<Cusp> cusps_;
  std::vector<int> sign_;
};

/// Composite Simpson rule for one period of a periodic function on a uniform
/// grid (falls back to the trapezoid rule for odd N). Fixed summation order.
double periodic_simpson(std::span<const double> values, double step);

WaveFront build(const CurveSpec& spec);

/// Integral of the signed arclength element.
double algebraic_length(const WaveFront& w);

/// Signed curvature integral of a spherical front (area of the characteristic
/// 2-chain through the Gauss-Bonnet identity). Throws WrongModel on H^2.
double acc(const WaveFront& w);

/// Integral of the curvature form on either model (acc on S^2, C on H^2).
double curvature_integral(const WaveFront& w);

/// 2*pi - acc for convex, properly oriented spherical fronts.
/// Throws NotConvex (min kappa < -1e-9 or cusps) or NotProper (acc <= 0).
double area_convex(const WaveFront& w);

/// Signed curvature integral C of a hyperbolic front. Throws WrongModel on S^2.
double total_curvature(const WaveFront& w);

/// Area enclosed by a simple smooth hyperbolic front via C = A + 2*pi.
double area_hyperbolic(const WaveFront& w);

/// Front moved pi/2 along its co-orientation (sphere only).
WaveFront dual(const WaveFront& w);

/// Front moved `distance` along its co-orientation. With the inward
/// convention, positive distances shrink a circle; use a negative distance
/// to move outward.
WaveFront equidistant(const WaveFront& w, double distance);

/// Sign changes of the signed speed. Throws DegenerateCurve if the speed
/// vanishes (below 1e-9) at every sample.
CuspScan cusp_scan(std::span<const FrameSample> samples, double step);
CuspScan cusp_scan(const WaveFront& w);

/// Sample indices i where the curvature form changes sign between i and i+1.
/// Sign flips of kappa caused by cusps are not inflections.
std::vector<std::size_t> inflection_scan(const WaveFront& w);

/// Minimum of |kappa| over samples of the smooth arcs.
double min_abs_kappa(const WaveFront& w);
double min_kappa(const WaveFront& w);

/// Periodic support function H(phi) = h0 + sum a_n cos(n phi) + b_n sin(n phi) + offset.
struct SupportFunction {
  double h0 = 0.0;
  std::vector<double> fourier_cos;
  std::vector<double> fourier_sin;
  double offset = 0.0;

  struct Value {
    double h, dh, ddh;
  };
  [[nodiscard]] Value operator()(double phi) const;
  [[nodiscard]] SupportFunction shifted(double c) const {
    SupportFunction s = *this;
    s.offset += c;
    return s;
  }
};

struct SupportCurvature {
  double ratio = 0.0;  ///< signed (H'' sinh H + (1+H'^2) cosh H) / (H'' cosh H + (1+H'^2) sinh H)
  double numerator = 0.0;
  double denominator = 0.0;
  bool cusp = false;  ///< |denominator| < 1e-12
  [[nodiscard]] double magnitude() const noexcept { return ratio < 0 ? -ratio : ratio; }
};

/// Curvature of the horocyclically convex front with support function H.
SupportCurvature support_curvature(const SupportFunction& h, double phi);

}  // namespace tiretrack
