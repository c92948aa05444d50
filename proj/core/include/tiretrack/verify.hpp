#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tiretrack/monodromy.hpp"

namespace tiretrack {

enum class CheckStatus { Pass, Fail, HypothesisViolated };

std::string_view to_string(CheckStatus s) noexcept;

struct VerificationReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;  ///< false only for Fail
  CheckStatus status = CheckStatus::Fail;
  std::string note;
  std::vector<std::pair<std::string, std::string>> inputs;
};

/// Integral of the front curvature form against mcos(l) times that of the
/// closed rear track from the attracting fixed point. Relative residual.
/// Throws NoFixedPoint when the monodromy is elliptic.
VerificationReport check_curvature_relation(const WaveFront& front, const BicycleParams& p, double tol = 1e-6);

/// ACC^2 + L^2 >= 4 pi^2. residual is the margin ACC^2 + L^2 - 4 pi^2; the
/// check passes when margin >= -tol. A front with inflections is reported as
/// HypothesisViolated and the inequality is not asserted.
VerificationReport check_spherical_isoperimetric(const WaveFront& w, double tol = 1e-6);

/// L^2 + 4 pi^2 - C^2 >= 0 for horocyclically convex fronts.
/// Throws NotHorocyclicallyConvex when min |kappa| < 1 - 1e-6.
VerificationReport check_hyperbolic_isoperimetric(const WaveFront& w, double tol = 1e-6);

/// ACC(dual) = L and ACC = -L(dual).
std::vector<VerificationReport> check_duality(const WaveFront& w, double tol = 1e-6);

/// Lengths and curvature integrals of the equidistant moved outward by t:
/// L(t) = L cosh t + C sinh t and C(t) = L sinh t + C cosh t.
VerificationReport check_equidistant_evolution(const WaveFront& w, double t, double tol = 1e-6);

struct ParabolicSearch {
  double t_low = 1e-3;
  double tol = 1e-10;   ///< on |tr| - 2
  int max_iterations = 80;
  int steps_per_sample = 4;
  /// RK4 substeps grow so that h * lift * max|v| stays below this.
  double max_step_product = 0.25;
};

struct ParabolicLength {
  double l = 0.0;
  double trace_excess = 0.0;  ///< |tr M(l)| - 2
  int iterations = 0;
  bool converged = false;
  MobiusMap map{Mat2{}};
  BicycleParams params;
};

/// Bisection on l = t * l_max, t in [t_low, 1], against the sign of |tr M| - 2.
/// Small t is hyperbolic, so the search assumes that end. Returns nothing
/// when M is hyperbolic at l_max. Without convergence the hyperbolic-side
/// endpoint of the final bracket is returned.
std::optional<ParabolicLength> find_parabolic_length(const WaveFront& front, double l_max,
                                                     const ParabolicSearch& opts = {});

/// Menzin area threshold: 2 pi (1 - cos l) or 2 pi (cosh l - 1).
double menzin_threshold(Model m, double l);

struct MenzinRow {
  std::string curve_id;
  double l = 0.0;
  double area = 0.0;
  double threshold = 0.0;
  bool above_threshold = false;
  MobiusClass cls = MobiusClass::Elliptic;
  double trace = 0.0;
  std::optional<double> l_parabolic;
  double rear_min_abs_curvature = 0.0;  ///< rear from the attracting fixed point at l; NaN if none

  // Rear track at l' (when found).
  double parabolic_trace_excess = 0.0;
  double parabolic_rear_length = 0.0;
  std::size_t parabolic_rear_cusps = 0;
  std::size_t parabolic_rear_inflections = 0;
  double parabolic_rear_acc = 0.0;  ///< sphere only
  bool circle = false;
  /// The rear shrank to a point (a circle's center at l' = r); only circles may do this.
  bool parabolic_rear_collapsed = false;
  bool parabolic_signature_ok = true;

  bool counterexample = false;
  std::string error;  ///< nonempty when the row could not be evaluated
};

struct MenzinSweepReport {
  std::vector<MenzinRow> rows;

  [[nodiscard]] std::size_t counterexamples() const;
  [[nodiscard]] std::size_t signature_failures() const;
  [[nodiscard]] std::size_t errors() const;
};

struct SweepOptions {
  ParabolicSearch search;
  double tol_parabolic = 1e-8;
  unsigned threads = 0;  ///< 0 = hardware concurrency
};

/// Evaluates every (curve, l) pair. Rows are independent jobs and come back
/// in input order (curve-major) regardless of scheduling.
MenzinSweepReport menzin_sweep(const std::vector<CurveSpec>& curves, const std::vector<double>& ls, Model model,
                               const SweepOptions& opts = {});

}  // namespace tiretrack
