#include "tiretrack/wavefront.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

namespace tiretrack {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<double> field(const WaveFront& w, double FrameSample::*member) {
  std::vector<double> out;
  out.reserve(w.size());
  for (const auto& s : w.samples()) out.push_back(s.*member);
  return out;
}

WaveFront offset(const WaveFront& w, double distance) {
  if (w.source()) {
    return WaveFront::sample(std::make_shared<EquidistantCurve>(w.source(), distance), w.size());
  }
  std::vector<FrameSample> moved;
  moved.reserve(w.size());
  for (const auto& s : w.samples()) moved.push_back(equidistant_frame(s, distance, w.model()));
  return WaveFront::from_samples(w.model(), w.period(), std::move(moved));
}

}  // namespace

WaveFront::WaveFront(Model model, double period, std::vector<FrameSample> samples, CurvePtr source)
    : model_(model), period_(period), samples_(std::move(samples)), source_(std::move(source)) {
  if (samples_.size() < 4) throw Error(ErrorKind::SpecInvalid, "wave front needs at least 4 samples");
  CuspScan scan = cusp_scan(samples_, step());
  cusps_ = std::move(scan.cusps);
  sign_ = std::move(scan.sign);
}

WaveFront WaveFront::sample(CurvePtr curve, std::size_t samples) {
  std::vector<FrameSample> out;
  out.reserve(samples);
  const double h = curve->period() / static_cast<double>(samples);
  for (std::size_t i = 0; i < samples; ++i) out.push_back(curve->frame(h * static_cast<double>(i)));
  const Model m = curve->model();
  const double period = curve->period();
  return WaveFront(m, period, std::move(out), std::move(curve));
}

WaveFront WaveFront::from_samples(Model model, double period, std::vector<FrameSample> samples) {
  return WaveFront(model, period, std::move(samples), nullptr);
}

std::vector<Vec3> WaveFront::positions() const {
  std::vector<Vec3> out;
  out.reserve(size());
  for (const auto& s : samples_) out.push_back(s.position);
  return out;
}

Vec3 WaveFront::d1(std::size_t i) const { return samples_[i].speed * samples_[i].tangent; }

Vec3 WaveFront::d2(std::size_t i) const {
  const FrameSample& s = samples_[i];
  // dT/du = -K v P + turning n.
  const Vec3 dt = (-curvature(model_) * s.speed) * s.position + s.turning * s.normal;
  return s.dspeed * s.tangent + s.speed * dt;
}

double WaveFront::speed(std::size_t i) const noexcept { return std::abs(samples_[i].speed); }

double periodic_simpson(std::span<const double> values, double step) {
  const std::size_t n = values.size();
  double sum = 0.0;
  if (n % 2 == 0) {
    for (std::size_t i = 0; i < n; ++i) sum += values[i] * (i % 2 == 0 ? 2.0 : 4.0);
    return sum * step / 3.0;
  }
  for (double v : values) sum += v;
  return sum * step;
}

WaveFront build(const CurveSpec& spec) {
  return WaveFront::sample(make_curve(spec), static_cast<std::size_t>(spec.samples));
}

double algebraic_length(const WaveFront& w) {
  const auto v = field(w, &FrameSample::speed);
  return periodic_simpson(v, w.step());
}

double acc(const WaveFront& w) {
  if (w.model() != Model::Sphere)
    throw Error(ErrorKind::WrongModel, "ACC is defined for spherical fronts; use total_curvature");
  return curvature_integral(w);
}

double curvature_integral(const WaveFront& w) {
  const auto t = field(w, &FrameSample::turning);
  return periodic_simpson(t, w.step());
}

double area_convex(const WaveFront& w) {
  if (w.model() != Model::Sphere) throw Error(ErrorKind::WrongModel, "area_convex needs a spherical front");
  if (!w.cusps().empty()) throw Error(ErrorKind::NotConvex, "front has cusps");
  if (min_kappa(w) < -1e-9) throw Error(ErrorKind::NotConvex, "front has negative curvature");
  const double a = acc(w);
  if (!(a > 0.0))
    throw Error(ErrorKind::NotProper, "total curvature must be positive; flip the orientation");
  return kTwoPi - a;
}

double total_curvature(const WaveFront& w) {
  if (w.model() != Model::Hyperbolic)
    throw Error(ErrorKind::WrongModel, "total_curvature is defined for hyperbolic fronts; use acc");
  return curvature_integral(w);
}

double area_hyperbolic(const WaveFront& w) { return total_curvature(w) - kTwoPi; }

WaveFront dual(const WaveFront& w) {
  if (w.model() != Model::Sphere) throw Error(ErrorKind::WrongModel, "dual curves exist on the sphere only");
  return offset(w, std::numbers::pi / 2.0);
}

WaveFront equidistant(const WaveFront& w, double distance) {
  if (distance == 0.0) return w;
  return offset(w, distance);
}

CuspScan cusp_scan(std::span<const FrameSample> samples, double step) {
  const std::size_t n = samples.size();
  double vmax = 0.0;
  for (const auto& s : samples) vmax = std::max(vmax, std::abs(s.speed));
  if (!(vmax >= 1e-9)) throw Error(ErrorKind::DegenerateCurve, "speed vanishes along the whole front");

  CuspScan out;
  out.sign.resize(n);
  // Start from a sample with nonzero speed so zero samples inherit a sign.
  std::size_t start = 0;
  while (samples[start].speed == 0.0) ++start;
  int current = samples[start].speed > 0.0 ? 1 : -1;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t i = (start + k) % n;
    const double v = samples[i].speed;
    if (v > 0.0) current = 1;
    if (v < 0.0) current = -1;
    out.sign[i] = current;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = (i + 1) % n;
    if (out.sign[i] == out.sign[j]) continue;
    const double a = std::abs(samples[i].speed);
    const double b = std::abs(samples[j].speed);
    const double frac = (a + b) > 0.0 ? a / (a + b) : 0.5;
    out.cusps.push_back({i, step * (static_cast<double>(i) + frac)});
  }
  return out;
}

CuspScan cusp_scan(const WaveFront& w) { return cusp_scan(w.samples(), w.step()); }

std::vector<std::size_t> inflection_scan(const WaveFront& w) {
  std::vector<std::size_t> out;
  const std::size_t n = w.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double a = w[i].turning;
    const double b = w[(i + 1) % n].turning;
    if ((a > 0.0 && b <= 0.0) || (a < 0.0 && b >= 0.0) || (a == 0.0 && b != 0.0)) out.push_back(i);
  }
  return out;
}

double min_abs_kappa(const WaveFront& w) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& s : w.samples())
    if (s.speed != 0.0) best = std::min(best, std::abs(s.kappa()));
  return best;
}

double min_kappa(const WaveFront& w) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& s : w.samples())
    if (s.speed != 0.0) best = std::min(best, s.kappa());
  return best;
}

SupportFunction::Value SupportFunction::operator()(double phi) const {
  Value v{h0 + offset, 0.0, 0.0};
  const std::size_t n_max = std::max(fourier_cos.size(), fourier_sin.size());
  for (std::size_t k = 1; k <= n_max; ++k) {
    const double n = static_cast<double>(k);
    const double c = std::cos(n * phi);
    const double s = std::sin(n * phi);
    const double a = k <= fourier_cos.size() ? fourier_cos[k - 1] : 0.0;
    const double b = k <= fourier_sin.size() ? fourier_sin[k - 1] : 0.0;
    v.h += a * c + b * s;
    v.dh += n * (b * c - a * s);
    v.ddh -= n * n * (a * c + b * s);
  }
  return v;
}

SupportCurvature support_curvature(const SupportFunction& h, double phi) {
  const auto [H, dH, ddH] = h(phi);
  const double q = 1.0 + dH * dH;
  SupportCurvature out;
  out.numerator = ddH * std::sinh(H) + q * std::cosh(H);
  out.denominator = ddH * std::cosh(H) + q * std::sinh(H);
  out.cusp = std::abs(out.denominator) < 1e-12;
  out.ratio = out.numerator / out.denominator;
  return out;
}

}  // namespace tiretrack
