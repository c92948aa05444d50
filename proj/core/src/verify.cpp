#include "tiretrack/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <thread>

namespace tiretrack {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kFourPiSq = 4.0 * kPi * kPi;

std::string num(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

VerificationReport make_report(std::string name, double lhs, double rhs, double residual, double tol, bool ok) {
  VerificationReport r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.residual = residual;
  r.tolerance = tol;
  r.pass = ok;
  r.status = ok ? CheckStatus::Pass : CheckStatus::Fail;
  return r;
}

void echo_front(VerificationReport& r, const WaveFront& w) {
  r.inputs.emplace_back("model", std::string(to_string(w.model())));
  r.inputs.emplace_back("samples", std::to_string(w.size()));
}

void require_horocyclic(const WaveFront& w) {
  const double k = min_abs_kappa(w);
  if (!(k >= 1.0 - 1e-6))
    throw Error(ErrorKind::NotHorocyclicallyConvex, "min |kappa| = " + num(k) + " is below 1");
}

int steps_for(const WaveFront& front, double l, const ParabolicSearch& opts) {
  double vmax = 0.0;
  for (std::size_t i = 0; i < front.size(); ++i) vmax = std::max(vmax, front.speed(i));
  const double need = front.step() * mcot(front.model(), l) * vmax / opts.max_step_product;
  return std::max(opts.steps_per_sample, static_cast<int>(std::ceil(need)));
}

MenzinRow evaluate_row(const CurveSpec& spec, double l, Model model, const SweepOptions& opts) {
  MenzinRow row;
  row.curve_id = spec.id;
  row.l = l;
  row.circle = spec.kind == CurveKind::Circle;
  row.rear_min_abs_curvature = std::numeric_limits<double>::quiet_NaN();
  try {
    if (spec.model != model) throw Error(ErrorKind::WrongModel, "curve model differs from sweep model");
    const WaveFront front = build(spec);
    if (model == Model::Sphere) {
      row.area = area_convex(front);
    } else {
      require_horocyclic(front);
      row.area = area_hyperbolic(front);
    }
    row.threshold = menzin_threshold(model, l);
    row.above_threshold = row.area > row.threshold;

    const BicycleParams p{l, model, steps_for(front, l, opts.search)};
    const MobiusMap map = compute_monodromy(front, p, opts.tol_parabolic);
    row.cls = map.classification();
    row.trace = map.trace();
    if (row.cls == MobiusClass::Hyperbolic)
      row.rear_min_abs_curvature = min_abs_kappa(closed_rear(front, p, map).rear.track);
    row.counterexample = row.above_threshold && row.cls != MobiusClass::Hyperbolic;

    if (auto lp = find_parabolic_length(front, l, opts.search)) {
      row.l_parabolic = lp->l;
      row.parabolic_trace_excess = lp->trace_excess;
      std::optional<WaveFront> rear;
      try {
        rear = closed_rear(front, lp->params, lp->map).rear.track;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::DegenerateCurve) throw;
      }
      bool ok = row.circle;
      if (rear) {
        row.parabolic_rear_length = algebraic_length(*rear);
        row.parabolic_rear_cusps = rear->cusps().size();
        row.parabolic_rear_inflections = inflection_scan(*rear).size();
        ok = std::abs(row.parabolic_rear_length) < 1e-4 && row.parabolic_rear_inflections == 0;
        if (!row.circle) ok = ok && row.parabolic_rear_cusps >= 2 && row.parabolic_rear_cusps % 2 == 0;
        if (model == Model::Sphere) {
          row.parabolic_rear_acc = acc(*rear);
          ok = ok && row.parabolic_rear_acc >= 2.0 * kPi - 1e-4;
        }
      } else {
        row.parabolic_rear_collapsed = true;
      }
      row.parabolic_signature_ok = ok;
    }
  } catch (const Error& e) {
    row.error = e.what();
  }
  return row;
}

}  // namespace

std::string_view to_string(CheckStatus s) noexcept {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::HypothesisViolated: return "hypothesis_violated";
  }
  return "unknown";
}

VerificationReport check_curvature_relation(const WaveFront& front, const BicycleParams& p, double tol) {
  const MobiusMap map = compute_monodromy(front, p);
  if (fixed_points(map).empty())
    throw Error(ErrorKind::NoFixedPoint, "monodromy is " + std::string(to_string(map.classification())));
  const RearTrack rear = closed_rear(front, p, map).rear;
  const double lhs = curvature_integral(front);
  const double rhs = mcos(p.model, p.l) * curvature_integral(rear.track);
  const double residual = std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs));
  auto r = make_report("curvature_relation", lhs, rhs, residual, tol, residual <= tol);
  echo_front(r, front);
  r.inputs.emplace_back("l", num(p.l));
  return r;
}

VerificationReport check_spherical_isoperimetric(const WaveFront& w, double tol) {
  const double a = acc(w);
  const double len = algebraic_length(w);
  const double lhs = a * a + len * len;
  const double margin = lhs - kFourPiSq;
  auto r = make_report("spherical_isoperimetric", lhs, kFourPiSq, margin, tol, margin >= -tol);
  echo_front(r, w);
  if (const auto infl = inflection_scan(w); !infl.empty()) {
    r.pass = true;
    r.status = CheckStatus::HypothesisViolated;
    r.note = "front has " + std::to_string(infl.size()) + " inflection points; inequality not asserted";
  }
  return r;
}

VerificationReport check_hyperbolic_isoperimetric(const WaveFront& w, double tol) {
  const double c = total_curvature(w);
  require_horocyclic(w);
  const double len = algebraic_length(w);
  const double lhs = len * len + kFourPiSq;
  const double margin = lhs - c * c;
  auto r = make_report("hyperbolic_isoperimetric", lhs, c * c, margin, tol, margin >= -tol);
  echo_front(r, w);
  return r;
}

std::vector<VerificationReport> check_duality(const WaveFront& w, double tol) {
  const WaveFront d = dual(w);
  const double len = algebraic_length(w);
  const double a = acc(w);
  const double dual_acc = acc(d);
  const double dual_len = algebraic_length(d);
  const double r1 = std::abs(dual_acc - len);
  const double r2 = std::abs(a + dual_len);
  std::vector<VerificationReport> out;
  out.push_back(make_report("dual_acc_equals_length", dual_acc, len, r1, tol, r1 <= tol));
  out.push_back(make_report("acc_equals_minus_dual_length", a, -dual_len, r2, tol, r2 <= tol));
  for (auto& r : out) echo_front(r, w);
  return out;
}

VerificationReport check_equidistant_evolution(const WaveFront& w, double t, double tol) {
  const double len0 = algebraic_length(w);
  const double c0 = total_curvature(w);
  const WaveFront moved = equidistant(w, -t);
  const double len = algebraic_length(moved);
  const double c = total_curvature(moved);
  const double len_pred = len0 * std::cosh(t) + c0 * std::sinh(t);
  const double c_pred = len0 * std::sinh(t) + c0 * std::cosh(t);
  const double residual = std::max(std::abs(len - len_pred) / std::max(1.0, std::abs(len_pred)),
                                   std::abs(c - c_pred) / std::max(1.0, std::abs(c_pred)));
  auto r = make_report("equidistant_evolution", len, len_pred, residual, tol, residual <= tol);
  r.note = "C(t) = " + num(c) + ", predicted " + num(c_pred);
  echo_front(r, w);
  r.inputs.emplace_back("t", num(t));
  return r;
}

std::optional<ParabolicLength> find_parabolic_length(const WaveFront& front, double l_max,
                                                     const ParabolicSearch& opts) {
  const Model m = front.model();
  std::map<int, FrontProfile> profiles;
  auto eval = [&](double l) {
    ParabolicLength r;
    r.l = l;
    r.params = BicycleParams{l, m, steps_for(front, l, opts)};
    auto it = profiles.find(r.params.steps_per_sample);
    if (it == profiles.end())
      it = profiles.emplace(r.params.steps_per_sample, FrontProfile(front, r.params.steps_per_sample)).first;
    r.map = compute_monodromy(it->second, r.params, opts.tol);
    r.trace_excess = r.map.trace_excess();
    return r;
  };

  ParabolicLength hi = eval(l_max);
  if (hi.trace_excess > opts.tol) return std::nullopt;
  if (hi.trace_excess >= -opts.tol) {
    hi.converged = true;
    return hi;
  }
  double lo_l = opts.t_low * l_max;
  double hi_l = l_max;
  std::optional<ParabolicLength> lo;
  for (int it = 1; it <= opts.max_iterations; ++it) {
    ParabolicLength mid = eval(0.5 * (lo_l + hi_l));
    mid.iterations = it;
    if (std::abs(mid.trace_excess) <= opts.tol) {
      mid.converged = true;
      return mid;
    }
    if (mid.trace_excess > 0.0) {
      lo_l = mid.l;
      lo = mid;
    } else {
      hi_l = mid.l;
    }
  }
  if (!lo) lo = eval(lo_l);
  lo->iterations = opts.max_iterations;
  return lo;
}

double menzin_threshold(Model m, double l) {
  return m == Model::Sphere ? 2.0 * kPi * (1.0 - std::cos(l)) : 2.0 * kPi * (std::cosh(l) - 1.0);
}

std::size_t MenzinSweepReport::counterexamples() const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const auto& r) { return r.counterexample; }));
}

std::size_t MenzinSweepReport::signature_failures() const {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [](const auto& r) { return !r.parabolic_signature_ok; }));
}

std::size_t MenzinSweepReport::errors() const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const auto& r) { return !r.error.empty(); }));
}

MenzinSweepReport menzin_sweep(const std::vector<CurveSpec>& curves, const std::vector<double>& ls, Model model,
                               const SweepOptions& opts) {
  MenzinSweepReport report;
  const std::size_t jobs = curves.size() * ls.size();
  report.rows.resize(jobs);
  auto run = [&](std::size_t i) { report.rows[i] = evaluate_row(curves[i / ls.size()], ls[i % ls.size()], model, opts); };

  unsigned threads = opts.threads != 0 ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, jobs));
  if (threads <= 1) {
    for (std::size_t i = 0; i < jobs; ++i) run(i);
    return report;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < jobs; i = next++) run(i);
    });
  }
  for (auto& th : pool) th.join();
  return report;
}

}  // namespace tiretrack
