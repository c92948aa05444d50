#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "format.hpp"
#include "json.hpp"
#include "tiretrack/cli.hpp"

namespace tiretrack::cli {

namespace {

using ojson = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LoadedCurve {
  std::string id;
  WaveFront front;
  Vec3 base;
};

std::string short_num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

// Non-finite values become JSON null.
ojson jnum(double x) { return std::isfinite(x) ? ojson(x) : ojson(nullptr); }

class Sink {
 public:
  Sink(const RunConfig& cfg, std::ostream& out) : cfg_(cfg), out_(out) {}

  [[nodiscard]] bool wants(const std::string& format) const { return formats().count(format) != 0; }

  void emit(const std::string& suffix, const std::string& ext, const std::string& content) {
    if (cfg_.out == "-") {
      out_ << content;
      if (!content.empty() && content.back() != '\n') out_ << '\n';
    } else {
      write_atomic(cfg_.out + suffix + "." + ext, content);
    }
  }

  [[nodiscard]] std::set<std::string> formats() const {
    if (!cfg_.formats.empty()) return cfg_.formats;
    switch (cfg_.command) {
      case Command::Monodromy:
      case Command::Verify: return {"json"};
      default: return {"csv"};
    }
  }

 private:
  const RunConfig& cfg_;
  std::ostream& out_;
};

bool is_csv_path(const std::string& path) { return std::filesystem::path(path).extension() == ".csv"; }

std::vector<CurveSpec> load_specs(const RunConfig& cfg) {
  if (is_csv_path(cfg.curve_file)) throw UsageError("this command needs a JSON curve file");
  auto specs = parse_curve_file(cfg.curve_file);
  if (cfg.samples > 0) {
    for (auto& s : specs) {
      s.samples = cfg.samples;
      s.validate();
    }
  }
  return specs;
}

std::vector<LoadedCurve> load_curves(const RunConfig& cfg) {
  std::vector<LoadedCurve> out;
  if (is_csv_path(cfg.curve_file)) {
    std::ifstream in(cfg.curve_file, std::ios::binary);
    if (!in) throw Error(ErrorKind::ParseError, "cannot open '" + cfg.curve_file + "'");
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    WaveFront w = parse_curve_csv(text, cfg.model);
    const Vec3 base = w.model() == Model::Sphere ? w[0].normal : Vec3{0.0, 0.0, 1.0};
    out.push_back({std::filesystem::path(cfg.curve_file).stem().string(), std::move(w), base});
    return out;
  }
  for (const auto& spec : load_specs(cfg)) out.push_back({spec.id, build(spec), spec.base_point});
  return out;
}

void require_ls(const RunConfig& cfg) {
  if (cfg.ls.empty()) throw UsageError("--l or --l-list is required for this command");
}

std::vector<double> cumulative(const WaveFront& w) {
  std::vector<double> out(w.size(), 0.0);
  for (std::size_t i = 1; i < w.size(); ++i) out[i] = out[i - 1] + 0.5 * w.step() * (w[i - 1].speed + w[i].speed);
  return out;
}

std::string suffix(const LoadedCurve& c) { return "_" + c.id; }
std::string suffix(const LoadedCurve& c, double l) { return "_" + c.id + "_l" + short_num(l); }

int run_simulate(const RunConfig& cfg, Sink& sink) {
  require_ls(cfg);
  ojson summary = ojson::array();
  for (const auto& c : load_curves(cfg)) {
    for (double l : cfg.ls) {
      const BicycleParams p{l, c.front.model(), cfg.steps_per_sample};
      const MobiusMap map = compute_monodromy(c.front, p, cfg.tol_parabolic);
      double alpha0 = std::numbers::pi;
      if (cfg.alpha0) {
        alpha0 = *cfg.alpha0;
      } else if (const auto fps = fixed_points(map); !fps.empty()) {
        alpha0 = fps.front().theta;
      }
      const SteeringSolution sol = integrate_steering(c.front, p, alpha0);
      const RearTrack rear = rear_track(c.front, sol);
      const WaveFront& r = rear.track;

      if (sink.wants("csv")) {
        const auto s = cumulative(c.front);
        const auto t = cumulative(r);
        std::string csv = "u,s,t,alpha,front_x,front_y,front_z,rear_x,rear_y,rear_z,kappa,k,sign\n";
        for (std::size_t i = 0; i < r.size(); ++i) {
          const Vec3& f = c.front[i].position;
          const Vec3& g = r[i].position;
          for (double x : {c.front.parameter(i), s[i], t[i], sol.alpha[i], f.x, f.y, f.z, g.x, g.y, g.z,
                           c.front.kappa(i), r.kappa(i)})
            csv += num(x) + ',';
          csv += std::to_string(r.sign(i)) + '\n';
        }
        sink.emit(suffix(c, l), "csv", csv);
      }
      if (sink.wants("svg")) {
        sink.emit(suffix(c, l), "svg",
                  svg_document({{"front " + c.id, c.front.positions(), "black"}, {"rear", r.positions(), "#c0392b"}},
                               c.front.model(), c.base));
      }
      ojson row;
      row["curve"] = c.id;
      row["l"] = l;
      row["alpha0"] = alpha0;
      row["class"] = std::string(to_string(map.classification()));
      row["periodicity_residual"] = sol.periodicity_residual;
      row["rear_length"] = algebraic_length(r);
      row["rear_curvature_integral"] = curvature_integral(r);
      row["rear_cusps"] = r.cusps().size();
      row["rear_inflections"] = inflection_scan(r).size();
      summary.push_back(row);
    }
  }
  if (sink.wants("json")) sink.emit("_summary", "json", summary.dump(2));
  return 0;
}

ojson map_json(const MobiusMap& map) {
  ojson j;
  const Mat2& m = map.matrix();
  j["matrix"] = {{"a", m.a}, {"b", m.b}, {"c", m.c}, {"d", m.d}};
  j["log_scale"] = map.log_scale();
  j["trace"] = jnum(map.trace());
  j["log_trace"] = map.log_trace();
  j["class"] = std::string(to_string(map.classification()));
  ojson fps = ojson::array();
  for (const auto& f : fixed_points(map)) {
    fps.push_back({{"theta", f.theta}, {"y", jnum(f.y)}, {"derivative", jnum(f.derivative)},
                   {"log_derivative", f.log_derivative}});
  }
  j["fixed_points"] = fps;
  return j;
}

int run_monodromy(const RunConfig& cfg, Sink& sink) {
  require_ls(cfg);
  ojson all = ojson::array();
  std::string csv = "curve,l,class,trace,log_trace,a,b,c,d,log_scale,fixed_points\n";
  for (const auto& c : load_curves(cfg)) {
    for (double l : cfg.ls) {
      const MobiusMap map = compute_monodromy(c.front, {l, c.front.model(), cfg.steps_per_sample}, cfg.tol_parabolic);
      ojson j;
      j["curve"] = c.id;
      j["l"] = l;
      j.update(map_json(map));
      all.push_back(j);
      const Mat2& m = map.matrix();
      csv += c.id + ',' + num(l) + ',' + std::string(to_string(map.classification())) + ',' + num(map.trace()) +
             ',' + num(map.log_trace()) + ',' + num(m.a) + ',' + num(m.b) + ',' + num(m.c) + ',' + num(m.d) + ',' +
             num(map.log_scale()) + ',' + std::to_string(fixed_points(map).size()) + '\n';
    }
  }
  if (sink.wants("json")) sink.emit("", "json", all.dump(2));
  if (sink.wants("csv")) sink.emit("", "csv", csv);
  return 0;
}

const std::vector<std::string> kChecks{"curvature_relation", "spherical_iso", "hyperbolic_iso",
                                       "duality",            "equidistant",   "derivative_law",
                                       "derivative_law_unscaled", "small_l",  "derivative_curve"};

bool hypothesis_kind(ErrorKind k) {
  switch (k) {
    case ErrorKind::NotHyperbolic:
    case ErrorKind::NoFixedPoint:
    case ErrorKind::NotHorocyclicallyConvex:
    case ErrorKind::NotConvex:
    case ErrorKind::NotProper: return true;
    default: return false;
  }
}

VerificationReport derivative_report(const WaveFront& front, const BicycleParams& p, bool unscaled) {
  const DerivativeLaw d = length_derivative_check(front, p);
  VerificationReport r;
  r.name = unscaled ? "derivative_law_unscaled" : "derivative_law";
  r.lhs = d.derivative;
  r.tolerance = 1e-6;
  if (unscaled) {
    r.rhs = d.unscaled_predicted;
    r.residual = d.unscaled_residual;
    r.note = "exp(-L) with L = " + num(d.rear_length) + "; trace " + num(d.trace) + " vs 2cosh(L/2) = " +
             num(d.unscaled_trace_predicted);
  } else {
    r.rhs = d.predicted;
    r.residual = std::max(d.relative_residual, d.trace_residual);
    r.note = "exp(-mcot(l) L) with L = " + num(d.rear_length) + "; trace " + num(d.trace) + " vs " +
             num(d.trace_predicted);
  }
  r.pass = r.residual <= r.tolerance;
  r.status = r.pass ? CheckStatus::Pass : CheckStatus::Fail;
  r.inputs = {{"l", num(p.l)}, {"theta0", num(d.theta0)}};
  return r;
}

VerificationReport small_l_report(const WaveFront& front) {
  const SmallLengthProbe s = small_l_probe(front);
  VerificationReport r;
  r.name = "small_l";
  r.lhs = s.max_distance_to_0_or_pi;
  r.rhs = 0.05;
  r.residual = s.max_distance_to_0_or_pi;
  r.tolerance = 0.05;
  r.pass = s.map.classification() == MobiusClass::Hyperbolic && s.fixed.size() == 2 && r.residual <= r.tolerance;
  r.status = r.pass ? CheckStatus::Pass : CheckStatus::Fail;
  r.note = "class " + std::string(to_string(s.map.classification())) + " at l = " + num(s.l);
  return r;
}

VerificationReport derivative_curve_report(const WaveFront& rear) {
  const DerivativeCurveIdentity d = derivative_curve_identity(rear);
  VerificationReport r;
  r.name = "derivative_curve";
  r.lhs = d.deviation;
  r.rhs = 0.0;
  r.residual = d.deviation;
  r.tolerance = 1e-4;
  r.pass = r.residual <= r.tolerance;
  r.status = r.pass ? CheckStatus::Pass : CheckStatus::Fail;
  return r;
}

std::vector<VerificationReport> run_check(const std::string& name, const LoadedCurve& c, const RunConfig& cfg) {
  const WaveFront& w = c.front;
  std::vector<VerificationReport> out;
  if (name == "curvature_relation" || name == "derivative_law" || name == "derivative_law_unscaled") {
    for (double l : cfg.ls) {
      const BicycleParams p{l, w.model(), cfg.steps_per_sample};
      out.push_back(name == "curvature_relation" ? check_curvature_relation(w, p)
                                                 : derivative_report(w, p, name == "derivative_law_unscaled"));
    }
  } else if (name == "spherical_iso") {
    out.push_back(check_spherical_isoperimetric(w));
  } else if (name == "hyperbolic_iso") {
    out.push_back(check_hyperbolic_isoperimetric(w));
  } else if (name == "duality") {
    out = check_duality(w);
  } else if (name == "equidistant") {
    const std::vector<double> ts = cfg.distance ? std::vector<double>{*cfg.distance} : std::vector<double>{0.25, 0.5, 1.0};
    for (double t : ts) out.push_back(check_equidistant_evolution(w, t));
  } else if (name == "small_l") {
    out.push_back(small_l_report(w));
  } else if (name == "derivative_curve") {
    out.push_back(derivative_curve_report(w));
  }
  return out;
}

std::vector<std::string> checks_for(const RunConfig& cfg, Model m) {
  if (cfg.check != "all") return {cfg.check};
  std::vector<std::string> out;
  if (m == Model::Sphere) out = {"spherical_iso", "duality", "small_l", "derivative_curve"};
  else out = {"hyperbolic_iso", "equidistant", "small_l"};
  if (!cfg.ls.empty()) {
    out.push_back("curvature_relation");
    out.push_back("derivative_law");
  }
  return out;
}

int run_verify(const RunConfig& cfg, Sink& sink, std::ostream& err) {
  if (cfg.check != "all" && std::find(kChecks.begin(), kChecks.end(), cfg.check) == kChecks.end())
    throw UsageError("unknown check '" + cfg.check + "'");
  if ((cfg.check == "curvature_relation" || cfg.check == "derivative_law" || cfg.check == "derivative_law_unscaled"))
    require_ls(cfg);

  ojson all = ojson::array();
  std::string csv = "curve,name,status,lhs,rhs,residual,tolerance,note\n";
  bool failed = false;
  for (const auto& c : load_curves(cfg)) {
    for (const auto& name : checks_for(cfg, c.front.model())) {
      std::vector<VerificationReport> reports;
      try {
        reports = run_check(name, c, cfg);
      } catch (const Error& e) {
        VerificationReport r;
        r.name = name;
        r.residual = std::numeric_limits<double>::quiet_NaN();
        r.note = e.what();
        r.pass = hypothesis_kind(e.kind());
        r.status = r.pass ? CheckStatus::HypothesisViolated : CheckStatus::Fail;
        reports.push_back(r);
      }
      for (auto& r : reports) {
        if (r.status == CheckStatus::HypothesisViolated)
          err << "warning: " << c.id << ": " << r.name << ": hypothesis not met: " << r.note << '\n';
        failed = failed || !r.pass;
        ojson j;
        j["curve"] = c.id;
        j["name"] = r.name;
        j["status"] = std::string(to_string(r.status));
        j["pass"] = r.pass;
        j["lhs"] = jnum(r.lhs);
        j["rhs"] = jnum(r.rhs);
        j["residual"] = jnum(r.residual);
        j["tolerance"] = r.tolerance;
        j["note"] = r.note;
        ojson inputs = ojson::object();
        for (const auto& [k, v] : r.inputs) inputs[k] = v;
        j["inputs"] = inputs;
        all.push_back(j);
        std::string note = r.note;
        std::replace(note.begin(), note.end(), ',', ';');
        csv += c.id + ',' + r.name + ',' + std::string(to_string(r.status)) + ',' + num(r.lhs) + ',' + num(r.rhs) +
               ',' + num(r.residual) + ',' + num(r.tolerance) + ',' + note + '\n';
      }
    }
  }
  if (sink.wants("json")) sink.emit("", "json", all.dump(2));
  if (sink.wants("csv")) sink.emit("", "csv", csv);
  return failed ? 1 : 0;
}

int run_sweep(const RunConfig& cfg, Sink& sink, std::ostream& err) {
  require_ls(cfg);
  const auto specs = load_specs(cfg);
  const Model m = specs.front().model;
  for (const auto& s : specs)
    if (s.model != m) throw UsageError("sweep curves must share one model");
  SweepOptions opts;
  opts.tol_parabolic = cfg.tol_parabolic;
  opts.search.steps_per_sample = cfg.steps_per_sample;
  const MenzinSweepReport report = menzin_sweep(specs, cfg.ls, m, opts);

  std::string csv =
      "curve_id,l,area,threshold,above_threshold,class,trace,l_parabolic,rear_min_abs_curvature,"
      "parabolic_rear_length,parabolic_rear_cusps,parabolic_rear_inflections,parabolic_signature_ok,counterexample,"
      "error\n";
  ojson rows = ojson::array();
  for (const auto& r : report.rows) {
    if (!r.error.empty()) err << "warning: " << r.curve_id << " l=" << short_num(r.l) << ": " << r.error << '\n';
    if (r.counterexample) err << "COUNTEREXAMPLE: " << r.curve_id << " l=" << short_num(r.l) << '\n';
    std::string error = r.error;
    std::replace(error.begin(), error.end(), ',', ';');
    csv += r.curve_id + ',' + num(r.l) + ',' + num(r.area) + ',' + num(r.threshold) + ',' +
           (r.above_threshold ? "1" : "0") + ',' + std::string(to_string(r.cls)) + ',' + num(r.trace) + ',' +
           (r.l_parabolic ? num(*r.l_parabolic) : "") + ',' + num(r.rear_min_abs_curvature) + ',' +
           num(r.parabolic_rear_length) + ',' + std::to_string(r.parabolic_rear_cusps) + ',' +
           std::to_string(r.parabolic_rear_inflections) + ',' + (r.parabolic_signature_ok ? "1" : "0") + ',' +
           (r.counterexample ? "1" : "0") + ',' + error + '\n';
    ojson j;
    j["curve_id"] = r.curve_id;
    j["l"] = r.l;
    j["area"] = r.area;
    j["threshold"] = r.threshold;
    j["above_threshold"] = r.above_threshold;
    j["class"] = std::string(to_string(r.cls));
    j["trace"] = jnum(r.trace);
    j["l_parabolic"] = r.l_parabolic ? ojson(*r.l_parabolic) : ojson(nullptr);
    j["rear_min_abs_curvature"] = jnum(r.rear_min_abs_curvature);
    j["parabolic_rear_length"] = r.parabolic_rear_length;
    j["parabolic_rear_cusps"] = r.parabolic_rear_cusps;
    j["parabolic_rear_inflections"] = r.parabolic_rear_inflections;
    j["parabolic_rear_collapsed"] = r.parabolic_rear_collapsed;
    j["parabolic_signature_ok"] = r.parabolic_signature_ok;
    j["counterexample"] = r.counterexample;
    j["error"] = r.error;
    rows.push_back(j);
  }
  if (sink.wants("csv")) sink.emit("", "csv", csv);
  if (sink.wants("json")) sink.emit("", "json", rows.dump(2));
  const bool bad = report.counterexamples() > 0 || report.signature_failures() > 0 || report.errors() > 0;
  return bad ? 1 : 0;
}

int run_offset(const RunConfig& cfg, Sink& sink) {
  if (cfg.command == Command::Equidistant && !cfg.distance) throw UsageError("--distance is required");
  ojson summary = ojson::array();
  for (const auto& c : load_curves(cfg)) {
    const WaveFront moved = cfg.command == Command::Dual ? dual(c.front) : equidistant(c.front, *cfg.distance);
    if (sink.wants("csv")) sink.emit(suffix(c), "csv", curve_csv(moved));
    if (sink.wants("svg")) {
      sink.emit(suffix(c), "svg",
                svg_document({{c.id, c.front.positions(), "black"}, {"moved", moved.positions(), "#2e86c1"}},
                             c.front.model(), c.base));
    }
    ojson j;
    j["curve"] = c.id;
    j["length"] = algebraic_length(c.front);
    j["curvature_integral"] = curvature_integral(c.front);
    j["moved_length"] = algebraic_length(moved);
    j["moved_curvature_integral"] = curvature_integral(moved);
    j["moved_cusps"] = moved.cusps().size();
    summary.push_back(j);
  }
  if (sink.wants("json")) sink.emit("_summary", "json", summary.dump(2));
  return 0;
}

std::set<std::string> parse_formats(const std::string& list) {
  std::set<std::string> out;
  std::stringstream ss(list);
  for (std::string f; std::getline(ss, f, ',');) {
    if (f != "json" && f != "csv" && f != "svg") throw UsageError("unknown format '" + f + "'");
    out.insert(f);
  }
  return out;
}

}  // namespace

std::string_view to_string(Command c) noexcept {
  switch (c) {
    case Command::Simulate: return "simulate";
    case Command::Monodromy: return "monodromy";
    case Command::Verify: return "verify";
    case Command::Sweep: return "sweep";
    case Command::Dual: return "dual";
    case Command::Equidistant: return "equidistant";
  }
  return "unknown";
}

Command command_from_string(std::string_view name) {
  for (Command c : {Command::Simulate, Command::Monodromy, Command::Verify, Command::Sweep, Command::Dual,
                    Command::Equidistant})
    if (to_string(c) == name) return c;
  throw UsageError("unknown command '" + std::string(name) + "'");
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    Sink sink(cfg, out);
    switch (cfg.command) {
      case Command::Simulate: return run_simulate(cfg, sink);
      case Command::Monodromy: return run_monodromy(cfg, sink);
      case Command::Verify: return run_verify(cfg, sink, err);
      case Command::Sweep: return run_sweep(cfg, sink, err);
      case Command::Dual:
      case Command::Equidistant: return run_offset(cfg, sink);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    switch (e.kind()) {
      case ErrorKind::ParseError:
      case ErrorKind::SchemaError:
      case ErrorKind::SpecInvalid: return 2;
      default: return 1;
    }
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

int main_entry(int argc, char** argv) {
  CLI::App app{"Bicycle tracks on the sphere and the hyperbolic plane"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string formats;
  std::string model;
  std::optional<double> l;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--curve", cfg.curve_file, "Curve file (JSON specs or curve CSV)")->required();
    sub->add_option("--model", model, "Model for CSV curves")->check(CLI::IsMember({"sphere", "hyperbolic"}));
    sub->add_option("--samples", cfg.samples, "Override the sample count");
    sub->add_option("--steps", cfg.steps_per_sample, "RK4 substeps per sample")->check(CLI::PositiveNumber);
    sub->add_option("--tol-parabolic", cfg.tol_parabolic, "Band on |tr| - 2 counted as parabolic");
    sub->add_option("--out", cfg.out, "Output path prefix, - for standard output");
    sub->add_option("--format", formats, "Comma list of json, csv, svg");
  };
  auto with_l = [&](CLI::App* sub) {
    sub->add_option("--l", l, "Bicycle length");
    sub->add_option("--l-list", cfg.ls, "Comma list of bicycle lengths")->delimiter(',');
  };

  auto* simulate = app.add_subcommand("simulate", "Rear track for a front curve");
  common(simulate);
  with_l(simulate);
  simulate->add_option("--alpha0", cfg.alpha0, "Initial steering angle (default: attracting fixed point)");
  auto* monodromy = app.add_subcommand("monodromy", "Monodromy map, class and fixed points");
  common(monodromy);
  with_l(monodromy);
  auto* verify = app.add_subcommand("verify", "Inequality and identity checks");
  common(verify);
  with_l(verify);
  verify->add_option("--check", cfg.check, "Check name or all");
  verify->add_option("--distance", cfg.distance, "Equidistant offset for the evolution check");
  auto* sweep = app.add_subcommand("sweep", "Menzin sweep over curves and lengths");
  common(sweep);
  with_l(sweep);
  auto* dual_cmd = app.add_subcommand("dual", "Dual curve (sphere)");
  common(dual_cmd);
  auto* equi = app.add_subcommand("equidistant", "Equidistant front");
  common(equi);
  equi->add_option("--distance", cfg.distance, "Signed distance along the co-orientation")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    cfg.command = command_from_string(app.get_subcommands().front()->get_name());
    if (l) cfg.ls.insert(cfg.ls.begin(), *l);
    if (!formats.empty()) cfg.formats = parse_formats(formats);
    else cfg.formats.clear();
    if (!model.empty()) cfg.model = model_from_string(model);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return run(cfg, std::cout, std::cerr);
}

}  // namespace tiretrack::cli
