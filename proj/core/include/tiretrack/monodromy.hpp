#pragma once

#include <vector>

#include "tiretrack/bicycle.hpp"

namespace tiretrack {

struct Mat2 {
  double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

  [[nodiscard]] constexpr double det() const noexcept { return a * d - b * c; }
  [[nodiscard]] constexpr double trace() const noexcept { return a + d; }
  [[nodiscard]] double max_abs() const noexcept;

  friend constexpr Mat2 operator*(const Mat2& x, const Mat2& y) noexcept {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
  }
  friend constexpr Mat2 operator+(const Mat2& x, const Mat2& y) noexcept {
    return {x.a + y.a, x.b + y.b, x.c + y.c, x.d + y.d};
  }
  friend constexpr Mat2 operator*(double s, const Mat2& x) noexcept { return {s * x.a, s * x.b, s * x.c, s * x.d}; }
};

enum class MobiusClass { Elliptic, Parabolic, Hyperbolic, Identity };

std::string_view to_string(MobiusClass c) noexcept;

/// Projective map y -> (a y + b) / (c y + d) on y = tan(theta / 2).
///
/// The SL(2,R) representative is exp(log_scale) * matrix(). Long frames over
/// short bicycles give traces far beyond double range, so the scale is kept
/// as a logarithm. The representative is normalized to det 1 and trace >= 0.
class MobiusMap {
 public:
  /// `m` must have positive determinant; it is rescaled to det 1.
  explicit MobiusMap(const Mat2& m, double tol_parabolic = 1e-8);
  /// exp(log_scale) * m, which must already have det 1; it is not rescaled.
  MobiusMap(const Mat2& m, double log_scale, double tol_parabolic);

  [[nodiscard]] const Mat2& matrix() const noexcept { return m_; }
  [[nodiscard]] double log_scale() const noexcept { return log_scale_; }
  /// Full SL(2) matrix; entries overflow to inf when the scale is huge.
  [[nodiscard]] Mat2 sl2() const;
  /// |tr| of the SL(2) representative (may be inf).
  [[nodiscard]] double trace() const;
  [[nodiscard]] double log_trace() const;
  /// |tr| - 2 without overflow concerns for moderate traces.
  [[nodiscard]] double trace_excess() const;
  [[nodiscard]] MobiusClass classification() const noexcept { return class_; }
  [[nodiscard]] double tol_parabolic() const noexcept { return tol_; }

 private:
  void canonicalize();

  Mat2 m_;
  double log_scale_ = 0.0;
  double tol_;
  MobiusClass class_ = MobiusClass::Elliptic;
};

/// Image of the angle theta (mod 2 pi, in (-pi, pi]).
double act(const MobiusMap& map, double theta);

struct FixedPointData {
  double y = 0.0;              ///< tan(theta / 2); +-inf for theta = pi
  double theta = 0.0;          ///< in (-pi, pi]
  double derivative = 0.0;     ///< d(theta')/d(theta) at the fixed point
  double log_derivative = 0.0;
  [[nodiscard]] bool attracting() const noexcept { return log_derivative < 0.0; }
};

/// Fixed points of the map: none (elliptic), one (parabolic) or two
/// (hyperbolic, attracting first).
std::vector<FixedPointData> fixed_points(const MobiusMap& map);

/// Generator of the lifted steering flow per unit front arclength:
/// [[lift/2, -kappa/2], [kappa/2, -lift/2]].
Mat2 sl2_coefficients(double kappa, const BicycleParams& p);

struct LiftIntegration {
  Mat2 m;
  double log_scale = 0.0;
  double log_det = 0.0;        ///< log det U, accumulated from the step determinants
  double max_det_drift = 0.0;  ///< max |det U - 1| along the period
};

/// RK4 for dU/du = [[c v/2, -w/2], [w/2, -c v/2]] U over one period with
/// lift c, rescaling U whenever its entries grow past 1e100.
LiftIntegration integrate_lift(const FrontProfile& profile, double lift);

/// Monodromy of the steering flow around the closed front.
MobiusMap compute_monodromy(const WaveFront& front, const BicycleParams& p, double tol_parabolic = 1e-8);
MobiusMap compute_monodromy(const FrontProfile& profile, const BicycleParams& p, double tol_parabolic = 1e-8);

/// Steering solution started at a fixed point and its rear track.
struct ClosedRear {
  FixedPointData fixed_point;
  RearTrack rear;
};

/// Closed rear track from the attracting fixed point.
/// Throws NotHyperbolic for elliptic maps.
ClosedRear closed_rear(const WaveFront& front, const BicycleParams& p, const MobiusMap& map);

struct DerivativeLaw {
  double derivative = 0.0;           ///< measured M'(theta0) at the attracting fixed point
  double log_derivative = 0.0;
  double rear_length = 0.0;          ///< signed length of the closed rear track
  double lift = 0.0;                 ///< mcot(l)
  double predicted = 0.0;            ///< exp(-lift * rear_length)
  double relative_residual = 0.0;    ///< |log M' + lift L| / max(1, lift |L|)
  double unscaled_predicted = 0.0;   ///< exp(-rear_length)
  double unscaled_residual = 0.0;    ///< |M' - exp(-L)| / exp(-L)
  double trace = 0.0;                ///< |tr M|
  double trace_predicted = 0.0;      ///< 2 cosh(lift L / 2)
  double trace_residual = 0.0;       ///< relative
  double unscaled_trace_predicted = 0.0;  ///< 2 cosh(L / 2)
  double theta0 = 0.0;
  MobiusMap map{Mat2{}};
};

/// Compares the derivative of the monodromy at its attracting fixed point with
/// the signed length of the corresponding closed rear track.
/// Throws NotHyperbolic when the monodromy has no fixed points.
DerivativeLaw length_derivative_check(const WaveFront& front, const BicycleParams& p);

struct SmallLengthProbe {
  MobiusMap map{Mat2{}};
  std::vector<FixedPointData> fixed;
  double l = 1e-3;
  int steps_per_sample = 4;
  double max_distance_to_0_or_pi = 0.0;
  double attracting_distance_to_pi = 0.0;
};

/// Monodromy at l = 1e-3 with enough RK4 substeps that h * lift * max|v| <= 0.25.
SmallLengthProbe small_l_probe(const WaveFront& front, double l = 1e-3);

struct DerivativeCurveIdentity {
  MobiusMap map{Mat2{}};
  double deviation = 0.0;  ///< min over sign of max-entry |M -+ I|
};

/// Monodromy of the derivative curve of a spherical rear track (the front of
/// a bicycle of length pi/2), computed with lift 0 exactly. Every equidistant
/// of the rear generates the same front, so the map should be +-I.
DerivativeCurveIdentity derivative_curve_identity(const WaveFront& rear, int steps_per_sample = 4);

}  // namespace tiretrack
