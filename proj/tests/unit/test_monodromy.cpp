#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fronts.hpp"
#include "tiretrack/monodromy.hpp"

namespace tt = tiretrack;
using tt::BicycleParams;
using tt::CurveSpec;
using tt::Mat2;
using tt::MobiusClass;
using tt::Model;
using std::numbers::pi;

namespace {

double circle_alpha_star(Model m, double r, double l) { return std::asin(tt::mcot(m, r) / tt::mcot(m, l)); }

double max_diff(const Mat2& x, const Mat2& y) {
  return std::max({std::abs(x.a - y.a), std::abs(x.b - y.b), std::abs(x.c - y.c), std::abs(x.d - y.d)});
}

}  // namespace

TEST(Sl2Coefficients, Examples) {
  const Mat2 a = tt::sl2_coefficients(0.0, {pi / 4, Model::Sphere, 4});
  EXPECT_NEAR(a.a, 0.5, 1e-15);
  EXPECT_EQ(a.b, 0.0);
  EXPECT_EQ(a.c, 0.0);
  EXPECT_NEAR(a.d, -0.5, 1e-15);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-5, 5), ul(0.01, 1.5);
  for (int i = 0; i < 100; ++i) {
    const Mat2 g = tt::sl2_coefficients(u(rng), {ul(rng), i % 2 ? Model::Sphere : Model::Hyperbolic, 4});
    EXPECT_EQ(g.trace(), 0.0);
  }
}

TEST(Sl2Coefficients, RiccatiResidual) {
  // y = u1 / u2 for U' = A U must satisfy y' = -(k/2) y^2 + lift y - k/2.
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3, 3), ul(0.05, 1.5);
  for (int i = 0; i < 1000; ++i) {
    const Model m = i % 2 ? Model::Sphere : Model::Hyperbolic;
    const BicycleParams p{ul(rng), m, 4};
    const double k = u(rng), u1 = u(rng), u2 = u(rng) + 4.0;
    const Mat2 a = tt::sl2_coefficients(k, p);
    const double du1 = a.a * u1 + a.b * u2, du2 = a.c * u1 + a.d * u2;
    const double y = u1 / u2;
    const double lhs = (du1 * u2 - u1 * du2) / (u2 * u2);
    const double rhs = -(k / 2) * y * y + p.lift() * y - k / 2;
    EXPECT_NEAR(lhs, rhs, 1e-12 * (1 + std::abs(rhs)));
  }
}

TEST(MobiusMap, NormalizesAndClassifies) {
  const tt::MobiusMap h(Mat2{-6, 0, 0, -1.5});
  EXPECT_NEAR(h.matrix().det() * std::exp(2 * h.log_scale()), 1.0, 1e-12);
  EXPECT_GT(h.sl2().trace(), 0.0);
  EXPECT_NEAR(h.trace(), 2.5, 1e-12);
  EXPECT_EQ(h.classification(), MobiusClass::Hyperbolic);
  EXPECT_EQ(tt::MobiusMap(Mat2{std::cos(1.0), -std::sin(1.0), std::sin(1.0), std::cos(1.0)}).classification(),
            MobiusClass::Elliptic);
  EXPECT_EQ(tt::MobiusMap(Mat2{1, 0.7, 0, 1}).classification(), MobiusClass::Parabolic);
  EXPECT_EQ(tt::MobiusMap(Mat2{1, 0, 0, 1}).classification(), MobiusClass::Identity);
  EXPECT_EQ(tt::MobiusMap(Mat2{-1, 0, 0, -1}).classification(), MobiusClass::Identity);
  EXPECT_EQ(tt::MobiusMap(Mat2{1 + 1e-3, 0, 0, 1 / (1 + 1e-3)}, 1e-8).classification(), MobiusClass::Hyperbolic);
  EXPECT_EQ(tt::MobiusMap(Mat2{1 + 1e-3, 0, 0, 1 / (1 + 1e-3)}, 1e-5).classification(), MobiusClass::Parabolic);
}

TEST(Act, IdentityFixedPointsAndSpecialValues) {
  const tt::MobiusMap id(Mat2{});
  for (double t = -3.1; t < 3.1; t += 0.3) EXPECT_NEAR(tt::act(id, t), t, 1e-15);
  // theta = pi is y = infinity, mapped to a / c.
  const tt::MobiusMap m(Mat2{2, 1, 1, 1});
  EXPECT_NEAR(std::tan(tt::act(m, pi) / 2), 2.0, 1e-14);
  // c y + d = 0 maps to theta = pi.
  EXPECT_NEAR(std::abs(tt::act(m, 2 * std::atan(-1.0))), pi, 1e-14);
  for (const auto& f : tt::fixed_points(m)) EXPECT_NEAR(tt::testing::angle_distance(tt::act(m, f.theta), f.theta), 0, 1e-12);
}

TEST(Act, CompositionLaw) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-2, 2), ut(-pi, pi);
  for (int i = 0; i < 1000; ++i) {
    Mat2 m1{u(rng), u(rng), u(rng), u(rng)}, m2{u(rng), u(rng), u(rng), u(rng)};
    if (m1.det() < 0.1 || m2.det() < 0.1) continue;
    const double t = ut(rng);
    const double lhs = tt::act(tt::MobiusMap(m2), tt::act(tt::MobiusMap(m1), t));
    const double rhs = tt::act(tt::MobiusMap(m2 * m1), t);
    EXPECT_LT(tt::testing::angle_distance(lhs, rhs), 1e-10);
  }
}

TEST(ComputeMonodromy, CircleClassification) {
  const double l = 0.5;
  const BicycleParams p{l, Model::Sphere, 4};
  EXPECT_EQ(tt::compute_monodromy(tt::build(CurveSpec::circle(Model::Sphere, 0.6, 4096)), p).classification(),
            MobiusClass::Hyperbolic);
  EXPECT_EQ(tt::compute_monodromy(tt::build(CurveSpec::circle(Model::Sphere, 0.4, 4096)), p).classification(),
            MobiusClass::Elliptic);
  const auto par = tt::compute_monodromy(tt::build(CurveSpec::circle(Model::Sphere, 0.5, 4096)), p);
  EXPECT_EQ(par.classification(), MobiusClass::Parabolic);
  const auto fp = tt::fixed_points(par);
  ASSERT_EQ(fp.size(), 1u);
  EXPECT_NEAR(fp[0].derivative, 1.0, 1e-6);
}

TEST(ComputeMonodromy, MatchesMatrixExponentialAndConvergesAtOrderFour) {
  for (Model m : {Model::Sphere, Model::Hyperbolic}) {
    const double r = 1.0, l = 0.3;
    const double c = tt::mcot(m, l), v = tt::msin(m, r), w = tt::mcos(m, r);
    const Mat2 exact = tt::testing::constant_generator_flow(Mat2{c * v / 2, -w / 2, w / 2, -c * v / 2}, 2 * pi);
    const auto curve = tt::make_curve(CurveSpec::circle(m, r, 64));
    double prev = 0.0;
    for (std::size_t n : {256u, 512u, 1024u}) {
      const auto lift = tt::integrate_lift(tt::FrontProfile(tt::WaveFront::sample(curve, n), 1), c);
      const Mat2 u = std::exp(lift.log_scale) * lift.m;
      const double err = max_diff(u, exact) / exact.max_abs();
      if (prev > 0.0) {
        EXPECT_GE(std::log2(prev / err), 3.8) << n;
      }
      prev = err;
    }
    EXPECT_LT(prev, 1e-8);
  }
}

TEST(ComputeMonodromy, DeterminantDrift) {
  for (Model m : {Model::Sphere, Model::Hyperbolic}) {
    for (const auto& spec : tt::testing::random_convex_specs(301, 4, {.model = m, .rho_max = 1.0})) {
      for (double l : {0.2, 0.5, 1.0}) {
        const auto lift = tt::integrate_lift(tt::FrontProfile(tt::build(spec), 4), tt::mcot(m, l));
        EXPECT_LT(lift.max_det_drift, 1e-8);
      }
    }
  }
}

TEST(ComputeMonodromy, ConjugationKeepsTrace) {
  const auto spec = CurveSpec::polar_fourier(Model::Sphere, 0.8, {0.04, 0.02}, {0.01, -0.03}, 1024);
  const auto curve = tt::make_curve(spec);
  const BicycleParams p{0.4, Model::Sphere, 4};
  const auto m0 = tt::compute_monodromy(tt::WaveFront::sample(curve, 1024), p);
  for (double shift : {0.3, 1.234, 4.0}) {
    const auto shifted = std::make_shared<tt::ShiftedCurve>(curve, shift);
    const auto m1 = tt::compute_monodromy(tt::WaveFront::sample(shifted, 1024), p);
    EXPECT_NEAR(m1.trace(), m0.trace(), 1e-9 * m0.trace());
  }
}

TEST(ComputeMonodromy, Deterministic) {
  const auto w = tt::build(CurveSpec::polar_fourier(Model::Hyperbolic, 0.8, {0.04, 0.02}, {0.01, -0.03}, 1024));
  const auto a = tt::compute_monodromy(w, {0.4, Model::Hyperbolic, 4});
  const auto b = tt::compute_monodromy(w, {0.4, Model::Hyperbolic, 4});
  EXPECT_EQ(a.matrix().a, b.matrix().a);
  EXPECT_EQ(a.matrix().d, b.matrix().d);
  EXPECT_EQ(a.log_scale(), b.log_scale());
}

TEST(ComputeMonodromy, SeedIterationMatchesClassification) {
  struct Case {
    Model m;
    double r, l;
  };
  for (const auto& c : {Case{Model::Sphere, 0.7, 0.5}, Case{Model::Sphere, 0.4, 0.5}, Case{Model::Sphere, 1.0, 0.2},
                        Case{Model::Sphere, 0.3, 0.9}, Case{Model::Hyperbolic, 0.6, 0.4},
                        Case{Model::Hyperbolic, 0.3, 1.2}}) {
    const auto w = tt::build(CurveSpec::polar_fourier(c.m, c.r, {0.02 * c.r, 0.01 * c.r}, {0.0, 0.01 * c.r}, 512));
    const auto map = tt::compute_monodromy(w, {c.l, c.m, 4});
    ASSERT_NE(map.classification(), MobiusClass::Parabolic);
    int converged = 0;
    const auto fp = tt::fixed_points(map);
    for (int s = 0; s < 64; ++s) {
      double t = -pi + 2 * pi * (s + 0.5) / 64;
      for (int it = 0; it < 400; ++it) t = tt::act(map, t);
      const double next = tt::act(map, t);
      if (tt::testing::angle_distance(next, t) < 1e-9 && !fp.empty() &&
          tt::testing::angle_distance(t, fp[0].theta) < 1e-6)
        ++converged;
    }
    if (map.classification() == MobiusClass::Hyperbolic) {
      EXPECT_GE(converged, 63) << c.r << " " << c.l;
      EXPECT_TRUE(fp[0].attracting());
    } else {
      EXPECT_EQ(converged, 0) << c.r << " " << c.l;
    }
  }
}

TEST(FixedPoints, CircleAngles) {
  for (Model m : {Model::Sphere, Model::Hyperbolic}) {
    const double r = 1.0, l = 0.5;
    const auto map = tt::compute_monodromy(tt::build(CurveSpec::circle(m, r, 4096)), {l, m, 4});
    const auto fp = tt::fixed_points(map);
    ASSERT_EQ(fp.size(), 2u);
    const double as = circle_alpha_star(m, r, l);
    EXPECT_NEAR(fp[0].theta, pi - as, 1e-9);
    EXPECT_NEAR(fp[1].theta, as, 1e-9);
    EXPECT_TRUE(fp[0].attracting());
    EXPECT_NEAR(fp[0].log_derivative, -fp[1].log_derivative, 1e-9);
  }
}

TEST(DerivativeLaw, CircleCorrectedFormAndTrace) {
  const auto d = tt::length_derivative_check(tt::build(CurveSpec::circle(Model::Sphere, 1.0, 4096)),
                                             {0.5, Model::Sphere, 4});
  const double as = circle_alpha_star(Model::Sphere, 1.0, 0.5);
  EXPECT_NEAR(d.rear_length, std::cos(as) * 2 * pi * std::sin(1.0), 1e-8);
  EXPECT_NEAR(d.theta0, pi - as, 1e-9);
  EXPECT_LT(d.relative_residual, 1e-6);
  EXPECT_LT(d.trace_residual, 1e-6);
  EXPECT_NEAR(d.derivative, std::exp(-d.lift * d.rear_length), 1e-6 * d.derivative);
  // The repelling point has the reciprocal derivative.
  const auto fp = tt::fixed_points(d.map);
  EXPECT_NEAR(fp[1].log_derivative, d.lift * d.rear_length, 1e-6);
}

TEST(DerivativeLaw, UnitLiftMakesUnscaledFormExact) {
  // cot(pi/4) = 1: the literal law M' = exp(-L) holds only here on the sphere.
  const auto d = tt::length_derivative_check(
      tt::build(CurveSpec::polar_fourier(Model::Sphere, 1.1, {0.03}, {0.02}, 4096)), {pi / 4, Model::Sphere, 4});
  EXPECT_LT(d.unscaled_residual, 1e-6);
  EXPECT_NEAR(d.trace, d.unscaled_trace_predicted, 1e-6 * d.trace);
}

TEST(DerivativeLaw, EllipticThrows) {
  try {
    (void)tt::length_derivative_check(tt::build(CurveSpec::circle(Model::Sphere, 0.4, 1024)), {0.5, Model::Sphere, 4});
    FAIL();
  } catch (const tt::Error& e) {
    EXPECT_EQ(e.kind(), tt::ErrorKind::NotHyperbolic);
  }
}

TEST(SmallLengthProbe, ConvexFronts) {
  for (Model m : {Model::Sphere, Model::Hyperbolic}) {
    for (const auto& spec : tt::testing::random_convex_specs(302, 4, {.model = m})) {
      const auto probe = tt::small_l_probe(tt::build(spec));
      EXPECT_EQ(probe.map.classification(), MobiusClass::Hyperbolic);
      ASSERT_EQ(probe.fixed.size(), 2u);
      EXPECT_LT(probe.max_distance_to_0_or_pi, 0.05);
      EXPECT_LT(probe.attracting_distance_to_pi, 0.05);
      EXPECT_NEAR(std::abs(probe.fixed[0].theta), pi, 0.05);
      EXPECT_NEAR(probe.fixed[1].theta, 0.0, 0.05);
    }
  }
}

TEST(DerivativeCurve, MonodromyIsIdentity) {
  EXPECT_LT(tt::derivative_curve_identity(tt::build(CurveSpec::circle(Model::Sphere, 0.7, 4096))).deviation, 1e-5);
  EXPECT_LT(tt::derivative_curve_identity(tt::build(CurveSpec::circle(Model::Sphere, pi / 2, 4096))).deviation, 1e-5);
  EXPECT_LT(tt::derivative_curve_identity(
                tt::build(CurveSpec::polar_fourier(Model::Sphere, 0.9, {0.05, 0.03}, {0.02, -0.01}, 4096)))
                .deviation,
            1e-4);
  EXPECT_THROW((void)tt::derivative_curve_identity(tt::build(CurveSpec::circle(Model::Hyperbolic, 0.7, 256))),
               tt::Error);
}
