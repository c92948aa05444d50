#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "fronts.hpp"
#include "tiretrack/wavefront.hpp"

namespace tt = tiretrack;
using tt::CurveSpec;
using tt::Model;
using std::numbers::pi;

namespace {

tt::ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const tt::Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no tiretrack::Error thrown";
  return tt::ErrorKind::SchemaError;
}

double max_kappa_error(const tt::WaveFront& w, double expected) {
  double e = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) e = std::max(e, std::abs(w.kappa(i) - expected));
  return e;
}

}  // namespace

TEST(Build, SphereCircle) {
  for (double r : {0.2, 0.7, 1.3, 2.5}) {
    const auto w = tt::build(CurveSpec::circle(Model::Sphere, r, 1024));
    EXPECT_LT(max_kappa_error(w, 1.0 / std::tan(r)), 1e-8) << r;
    EXPECT_NEAR(tt::algebraic_length(w), 2 * pi * std::sin(r), 1e-8);
    EXPECT_TRUE(w.cusps().empty());
    for (int s : w.signs()) EXPECT_EQ(s, 1);
  }
}

TEST(Build, HyperbolicCircle) {
  for (double r : {0.2, 0.7, 1.3, 2.5}) {
    const auto w = tt::build(CurveSpec::circle(Model::Hyperbolic, r, 1024));
    EXPECT_LT(max_kappa_error(w, 1.0 / std::tanh(r)), 1e-8) << r;
    EXPECT_NEAR(tt::algebraic_length(w), 2 * pi * std::sinh(r), 1e-8 * std::cosh(r));
  }
}

TEST(Build, GreatCircle) {
  const auto w = tt::build(CurveSpec::circle(Model::Sphere, pi / 2, 1024));
  EXPECT_LT(max_kappa_error(w, 0.0), 1e-12);
  EXPECT_NEAR(tt::algebraic_length(w), 2 * pi, 1e-12);
  EXPECT_NEAR(tt::acc(w), 0.0, 1e-12);
  EXPECT_NEAR(tt::area_convex(w) + 0.0, 2 * pi, 1e-12);
}

TEST(Build, SamplesStayOnSurface) {
  const auto spec = CurveSpec::polar_fourier(Model::Hyperbolic, 0.8, {0.05, 0.03}, {0.0, -0.02}, 512);
  const auto w = tt::build(spec);
  for (const auto& s : w.samples()) {
    EXPECT_NEAR(tt::inner(s.position, s.position, Model::Hyperbolic), -1.0, 1e-10);
    EXPECT_NEAR(tt::inner(s.position, s.tangent, Model::Hyperbolic), 0.0, 1e-10);
    EXPECT_NEAR(tt::inner(s.tangent, s.tangent, Model::Hyperbolic), 1.0, 1e-10);
  }
}

TEST(Build, SpecValidation) {
  EXPECT_EQ(kind_of([] { (void)tt::build(CurveSpec::circle(Model::Sphere, pi, 1024)); }), tt::ErrorKind::SpecInvalid);
  EXPECT_EQ(kind_of([] { (void)tt::build(CurveSpec::circle(Model::Sphere, 0.5, 32)); }), tt::ErrorKind::SpecInvalid);
  EXPECT_EQ(kind_of([] { (void)tt::build(CurveSpec::circle(Model::Hyperbolic, -1.0, 1024)); }),
            tt::ErrorKind::SpecInvalid);
  EXPECT_EQ(kind_of([] { (void)tt::build(CurveSpec::polar_fourier(Model::Sphere, 0.3, {0.4}, {}, 256)); }),
            tt::ErrorKind::SpecInvalid);
  EXPECT_EQ(kind_of([] { (void)tt::build(CurveSpec::polar_fourier(Model::Sphere, 3.0, {0.3}, {}, 256)); }),
            tt::ErrorKind::SpecInvalid);
}

TEST(Build, Deterministic) {
  const auto spec = CurveSpec::polar_fourier(Model::Sphere, 0.9, {0.05, 0.02, 0.01}, {0.03, 0.0, 0.004}, 1024);
  EXPECT_EQ(tt::acc(tt::build(spec)), tt::acc(tt::build(spec)));
  EXPECT_EQ(tt::algebraic_length(tt::build(spec)), tt::algebraic_length(tt::build(spec)));
}

TEST(PeriodicSimpson, ExactOnTrigPolynomials) {
  const std::size_t n = 64;
  const double h = 2 * pi / n;
  for (int k = 0; k < 30; ++k) {
    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i) f[i] = 2.0 + std::cos(k * h * i) + std::sin(k * h * i);
    EXPECT_NEAR(tt::periodic_simpson(f, h), k == 0 ? 6 * pi : 4 * pi, 1e-12) << k;
  }
}

TEST(Acc, Circles) {
  for (double r : {0.3, 0.8, 1.4}) {
    EXPECT_NEAR(tt::acc(tt::build(CurveSpec::circle(Model::Sphere, r, 1024))), 2 * pi * std::cos(r), 1e-8);
    // The dual of the radius-r circle is the radius pi/2 - r circle.
    EXPECT_NEAR(tt::acc(tt::build(CurveSpec::circle(Model::Sphere, pi / 2 - r, 1024))), 2 * pi * std::sin(r), 1e-8);
  }
  EXPECT_EQ(kind_of([] { (void)tt::acc(tt::build(CurveSpec::circle(Model::Hyperbolic, 0.5, 256))); }),
            tt::ErrorKind::WrongModel);
}

TEST(AreaConvex, Circles) {
  for (double r : {1e-3, 0.3, 0.8, 1.4}) {
    EXPECT_NEAR(tt::area_convex(tt::build(CurveSpec::circle(Model::Sphere, r, 1024))), 2 * pi * (1 - std::cos(r)),
                1e-8);
  }
}

TEST(AreaConvex, Errors) {
  const auto dimpled = tt::build(CurveSpec::polar_fourier(Model::Sphere, 0.8, {0.0, 0.0, 0.12}, {}, 1024));
  EXPECT_EQ(kind_of([&] { (void)tt::area_convex(dimpled); }), tt::ErrorKind::NotConvex);
  // Moving a front by pi twice along its co-orientation reverses it.
  const auto flipped = tt::dual(tt::dual(tt::build(CurveSpec::circle(Model::Sphere, 0.6, 512))));
  EXPECT_EQ(kind_of([&] { (void)tt::area_convex(flipped); }), tt::ErrorKind::NotProper);
}

TEST(AreaConvex, MatchesSphericalExcessTriangulation) {
  const auto specs = tt::testing::random_convex_specs(101, 6, {.model = Model::Sphere, .samples = 4096});
  for (const auto& spec : specs) {
    const auto w = tt::build(spec);
    EXPECT_NEAR(tt::area_convex(w), tt::testing::fan_triangulation_area(w.positions(), spec.base_point, Model::Sphere),
                1e-4);
  }
}

TEST(AreaHyperbolic, MatchesDefectTriangulation) {
  const auto circle = tt::build(CurveSpec::circle(Model::Hyperbolic, 1.1, 4096));
  EXPECT_NEAR(tt::area_hyperbolic(circle), 2 * pi * (std::cosh(1.1) - 1), 1e-8);
  EXPECT_NEAR(tt::testing::fan_triangulation_area(circle.positions(), {0, 0, 1}, Model::Hyperbolic),
              2 * pi * (std::cosh(1.1) - 1), 1e-4);
  const auto specs = tt::testing::random_convex_specs(
      102, 6, {.model = Model::Hyperbolic, .rho_min = 0.3, .rho_max = 1.1, .samples = 4096});
  for (const auto& spec : specs) {
    const auto w = tt::build(spec);
    EXPECT_NEAR(tt::area_hyperbolic(w),
                tt::testing::fan_triangulation_area(w.positions(), spec.base_point, Model::Hyperbolic), 1e-4);
  }
}

TEST(TotalCurvature, Circles) {
  for (double r : {1e-3, 0.5, 1.5}) {
    EXPECT_NEAR(tt::total_curvature(tt::build(CurveSpec::circle(Model::Hyperbolic, r, 1024))), 2 * pi * std::cosh(r),
                1e-8 * std::cosh(r));
  }
  EXPECT_EQ(kind_of([] { (void)tt::total_curvature(tt::build(CurveSpec::circle(Model::Sphere, 0.5, 256))); }),
            tt::ErrorKind::WrongModel);
}

TEST(Equidistant, HyperbolicCircleMovesOutward) {
  const double r = 0.7;
  const auto w = tt::build(CurveSpec::circle(Model::Hyperbolic, r, 1024));
  for (double t : {0.25, 0.5, 1.0}) {
    const auto e = tt::equidistant(w, -t);
    EXPECT_NEAR(tt::algebraic_length(e), 2 * pi * std::sinh(r + t), 1e-8 * std::cosh(r + t));
    EXPECT_NEAR(tt::total_curvature(e), 2 * pi * std::cosh(r + t), 1e-8 * std::cosh(r + t));
    EXPECT_NEAR(tt::distance(e[0].position, {0, 0, 1}, Model::Hyperbolic), r + t, 1e-10);
  }
}

TEST(Equidistant, ZeroDistanceIsIdentity) {
  const auto w = tt::build(CurveSpec::polar_fourier(Model::Sphere, 0.8, {0.03}, {0.02}, 256));
  const auto e = tt::equidistant(w, 0.0);
  for (std::size_t i = 0; i < w.size(); ++i) {
    EXPECT_NEAR(tt::distance(w[i].position, e[i].position, Model::Sphere), 0.0, 1e-12);
  }
}

TEST(Equidistant, CollapseToPointIsDegenerate) {
  const auto w = tt::build(CurveSpec::circle(Model::Sphere, 0.6, 256));
  EXPECT_EQ(kind_of([&] { (void)tt::equidistant(w, 0.6); }), tt::ErrorKind::DegenerateCurve);
}

TEST(Dual, CircleIsConcentric) {
  const double r = 0.45;
  const auto d = tt::dual(tt::build(CurveSpec::circle(Model::Sphere, r, 1024)));
  for (std::size_t i = 0; i < d.size(); i += 31) {
    EXPECT_NEAR(tt::distance(d[i].position, {0, 0, 1}, Model::Sphere), pi / 2 - r, 1e-12);
  }
  EXPECT_NEAR(tt::acc(d), 2 * pi * std::sin(r), 1e-8);
  EXPECT_EQ(kind_of([] { (void)tt::dual(tt::build(CurveSpec::circle(Model::Hyperbolic, 0.5, 256))); }),
            tt::ErrorKind::WrongModel);
}

TEST(Dual, SwapsLengthAndAcc) {
  const auto specs = tt::testing::random_convex_specs(103, 8, {.model = Model::Sphere});
  for (const auto& spec : specs) {
    const auto w = tt::build(spec);
    const auto d = tt::dual(w);
    EXPECT_NEAR(tt::acc(d), tt::algebraic_length(w), 1e-6);
    EXPECT_NEAR(tt::acc(w), -tt::algebraic_length(d), 1e-6);
    // Applied twice the dual is the antipodal front.
    const auto dd = tt::dual(d);
    for (std::size_t i = 0; i < w.size(); i += 97) {
      EXPECT_NEAR(tt::distance(dd[i].position, -w[i].position, Model::Sphere), 0.0, 1e-10);
    }
  }
}

TEST(Refinement, LengthAndAccConverge) {
  const auto spec = CurveSpec::polar_fourier(Model::Sphere, 0.9, {0.12, 0.05, 0.03, 0.02, 0.015, 0.01},
                                             {0.05, -0.04, 0.02, 0.01, -0.01, 0.005}, 64);
  const auto curve = tt::make_curve(spec);
  const auto ref = tt::WaveFront::sample(curve, 8192);
  const double l_ref = tt::algebraic_length(ref), a_ref = tt::acc(ref);
  double prev_l = NAN, prev_a = NAN;
  for (std::size_t n = 16; n <= 128; n *= 2) {
    const auto w = tt::WaveFront::sample(curve, n);
    const double el = std::abs(tt::algebraic_length(w) - l_ref), ea = std::abs(tt::acc(w) - a_ref);
    if (!std::isnan(prev_l) && prev_l > 1e-12) {
      EXPECT_GE(prev_l / std::max(el, 1e-300), 8.0) << n;
    }
    if (!std::isnan(prev_a) && prev_a > 1e-12) {
      EXPECT_GE(prev_a / std::max(ea, 1e-300), 8.0) << n;
    }
    prev_l = el;
    prev_a = ea;
  }
  EXPECT_LT(prev_l, 1e-6);
}

TEST(CuspScan, InwardEquidistantOfOvalHasFourCusps) {
  const auto w = tt::build(CurveSpec::polar_fourier(Model::Sphere, 0.6, {0.0, 0.06}, {}, 2048));
  double rmin = 10, rmax = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double rc = std::atan(1.0 / w.kappa(i));
    rmin = std::min(rmin, rc);
    rmax = std::max(rmax, rc);
  }
  const auto e = tt::equidistant(w, 0.5 * (rmin + rmax));
  ASSERT_EQ(e.cusps().size(), 4u);
  for (std::size_t i = 0; i < e.size(); ++i) {
    const bool at_cusp = std::any_of(e.cusps().begin(), e.cusps().end(), [&](const tt::Cusp& c) { return c.index == i; });
    EXPECT_EQ(e.sign((i + 1) % e.size()) != e.sign(i), at_cusp) << i;
  }
  // The curvature form stays smooth across cusps, so cusps are not inflections.
  EXPECT_TRUE(tt::inflection_scan(e).empty());
}

TEST(InflectionScan, ConvexAndDimpled) {
  EXPECT_TRUE(tt::inflection_scan(tt::build(CurveSpec::circle(Model::Sphere, 0.5, 256))).empty());
  const auto dimpled = tt::build(CurveSpec::polar_fourier(Model::Sphere, 0.8, {0.0, 0.0, 0.12}, {}, 1024));
  const auto infl = tt::inflection_scan(dimpled);
  EXPECT_FALSE(infl.empty());
  EXPECT_EQ(infl.size() % 2, 0u);
  for (std::size_t i : infl) EXPECT_LT(dimpled.kappa(i) * dimpled.kappa((i + 1) % dimpled.size()), 0.0);
}

TEST(SupportCurvature, ConstantIsCircle) {
  tt::SupportFunction h;
  h.h0 = 0.8;
  for (double phi : {0.0, 1.0, 4.0}) EXPECT_NEAR(tt::support_curvature(h, phi).ratio, 1.0 / std::tanh(0.8), 1e-14);
  for (double phi : {0.0, 2.5}) EXPECT_NEAR(tt::support_curvature(h.shifted(0.4), phi).ratio, 1.0 / std::tanh(1.2), 1e-14);
}

TEST(SupportCurvature, LargeOffsetMakesCurvaturePositive) {
  // a = H'' + 1 + H'^2 > 0 > b = H'' - 1 - H'^2 along this H, and the
  // unshifted denominator changes sign (the front has cusps).
  tt::SupportFunction h;
  h.h0 = 0.1;
  h.fourier_cos = {0.0, 0.0, 0.1};
  double den_min = 1e300, den_max = -1e300;
  for (int i = 0; i < 720; ++i) {
    const double phi = 2 * pi * i / 720;
    const auto v = h(phi);
    EXPECT_GT(v.ddh + 1 + v.dh * v.dh, 0.0);
    EXPECT_LT(v.ddh - 1 - v.dh * v.dh, 0.0);
    const auto k = tt::support_curvature(h, phi);
    den_min = std::min(den_min, k.denominator);
    den_max = std::max(den_max, k.denominator);
  }
  EXPECT_LT(den_min, 0.0);
  EXPECT_GT(den_max, 0.0);
  const auto shifted = h.shifted(3.0);
  for (int i = 0; i < 720; ++i) {
    const auto k = tt::support_curvature(shifted, 2 * pi * i / 720);
    EXPECT_FALSE(k.cusp);
    EXPECT_TRUE(std::isfinite(k.ratio));
    EXPECT_GT(k.ratio, 0.0);
  }
}
