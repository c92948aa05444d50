#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <limits>
#include <set>
#include <sstream>

#include "format.hpp"
#include "json.hpp"
#include "tiretrack/cli.hpp"

namespace tiretrack::cli {

namespace {

using nlohmann::json;

const std::set<std::string> kCurveKeys{"id", "model", "kind", "radius", "rho0", "cos", "sin", "samples", "base_point"};
constexpr std::string_view kCurveHeader =
    "u,x,y,z,tx,ty,tz,nx,ny,nz,speed,turning,dspeed,dturning,kappa,sign";

std::size_t line_of(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<long>(offset), '\n'));
}

// Byte offsets of the curve objects: the top-level object, or each object
// directly inside a top-level array.
std::vector<std::size_t> object_offsets(std::string_view text) {
  std::vector<std::size_t> out;
  int depth = 0;
  bool in_string = false;
  bool escaped = false;
  bool array_root = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (in_string) {
      if (escaped) escaped = false;
      else if (ch == '\\') escaped = true;
      else if (ch == '"') in_string = false;
      continue;
    }
    switch (ch) {
      case '"': in_string = true; break;
      case '[':
        if (depth == 0) array_root = true;
        ++depth;
        break;
      case '{':
        if ((depth == 0 && !array_root) || (depth == 1 && array_root)) out.push_back(i);
        ++depth;
        break;
      case ']':
      case '}': --depth; break;
      default: break;
    }
  }
  return out;
}

class CurveReader {
 public:
  CurveReader(const json& obj, std::size_t index, std::size_t line) : obj_(obj), index_(index), line_(line) {}

  CurveSpec read() {
    if (!obj_.is_object()) fail(ErrorKind::SchemaError, "curve entry must be an object");
    for (const auto& [key, value] : obj_.items()) {
      if (!kCurveKeys.count(key)) fail(ErrorKind::SchemaError, "unknown key '" + key + "'");
    }
    CurveSpec spec;
    spec.id = obj_.contains("id") ? string_field("id") : "curve" + std::to_string(index_);
    const std::string model = string_field("model");
    if (model != "sphere" && model != "hyperbolic")
      fail(ErrorKind::SchemaError, "model must be \"sphere\" or \"hyperbolic\"");
    spec.model = model_from_string(model);
    const std::string kind = string_field("kind");
    if (kind == "circle") {
      spec.kind = CurveKind::Circle;
      spec.radius = number_field("radius");
      for (const char* k : {"rho0", "cos", "sin"})
        if (obj_.contains(k)) fail(ErrorKind::SchemaError, std::string("key '") + k + "' is not used by a circle");
    } else if (kind == "polar_fourier") {
      spec.kind = CurveKind::PolarFourier;
      spec.rho0 = number_field("rho0");
      if (obj_.contains("radius")) fail(ErrorKind::SchemaError, "key 'radius' is not used by polar_fourier");
      spec.fourier_cos = number_list("cos");
      spec.fourier_sin = number_list("sin");
    } else {
      fail(ErrorKind::SchemaError, "kind must be \"circle\" or \"polar_fourier\"");
    }
    if (obj_.contains("samples")) {
      const json& s = obj_.at("samples");
      if (!s.is_number_integer()) fail(ErrorKind::SchemaError, "samples must be an integer");
      const auto n = s.get<long long>();
      if (n < 0 || n > std::numeric_limits<int>::max()) fail(ErrorKind::SpecInvalid, "samples out of range");
      spec.samples = static_cast<int>(n);
    }
    if (obj_.contains("base_point")) {
      const auto p = number_list("base_point");
      if (p.size() != 3) fail(ErrorKind::SchemaError, "base_point must have 3 components");
      spec.base_point = {p[0], p[1], p[2]};
    }
    try {
      spec.validate();
    } catch (const Error& e) {
      fail(e.kind(), e.detail());
    }
    return spec;
  }

 private:
  [[noreturn]] void fail(ErrorKind kind, const std::string& msg) const {
    throw Error(kind, "line " + std::to_string(line_) + ": curve[" + std::to_string(index_) + "]: " + msg);
  }

  const json& require(const char* key) const {
    if (!obj_.contains(key)) fail(ErrorKind::SchemaError, std::string("missing key '") + key + "'");
    return obj_.at(key);
  }

  std::string string_field(const char* key) const {
    const json& v = require(key);
    if (!v.is_string()) fail(ErrorKind::SchemaError, std::string("'") + key + "' must be a string");
    return v.get<std::string>();
  }

  double number_field(const char* key) const {
    const json& v = require(key);
    if (!v.is_number()) fail(ErrorKind::SchemaError, std::string("'") + key + "' must be a number");
    return v.get<double>();
  }

  std::vector<double> number_list(const char* key) const {
    if (!obj_.contains(key)) return {};
    const json& v = obj_.at(key);
    if (!v.is_array()) fail(ErrorKind::SchemaError, std::string("'") + key + "' must be an array of numbers");
    std::vector<double> out;
    for (const auto& x : v) {
      if (!x.is_number()) fail(ErrorKind::SchemaError, std::string("'") + key + "' must be an array of numbers");
      out.push_back(x.get<double>());
    }
    return out;
  }

  const json& obj_;
  std::size_t index_;
  std::size_t line_;
};

double parse_double(const std::string& field, std::size_t line) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(field.c_str(), &end);
  if (field.empty() || end != field.c_str() + field.size() || errno == ERANGE)
    throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": bad number '" + field + "'");
  return v;
}

Model infer_model(const Vec3& p) {
  if (std::abs(p.x * p.x + p.y * p.y + p.z * p.z - 1.0) < 1e-9) return Model::Sphere;
  if (p.z > 0.0 && std::abs(p.x * p.x + p.y * p.y - p.z * p.z + 1.0) < 1e-9) return Model::Hyperbolic;
  throw Error(ErrorKind::SchemaError, "first point lies on neither model; pass --model");
}

}  // namespace

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<CurveSpec> parse_curve_text(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseError, "line " + std::to_string(line_of(text, e.byte > 0 ? e.byte - 1 : 0)) +
                                           ": " + e.what());
  }
  const auto offsets = object_offsets(text);
  auto line_for = [&](std::size_t i) { return i < offsets.size() ? line_of(text, offsets[i]) : 1; };

  std::vector<CurveSpec> out;
  if (doc.is_object()) {
    out.push_back(CurveReader(doc, 0, line_for(0)).read());
  } else if (doc.is_array()) {
    if (doc.empty()) throw Error(ErrorKind::SchemaError, "line 1: curve list is empty");
    for (std::size_t i = 0; i < doc.size(); ++i) out.push_back(CurveReader(doc[i], i, line_for(i)).read());
  } else {
    throw Error(ErrorKind::SchemaError, "line 1: expected a curve object or an array of curves");
  }
  return out;
}

std::vector<CurveSpec> parse_curve_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open '" + path + "'");
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_curve_text(text);
}

std::string curve_csv(const WaveFront& w) {
  std::string out(kCurveHeader);
  out += '\n';
  for (std::size_t i = 0; i < w.size(); ++i) {
    const FrameSample& s = w[i];
    const double fields[] = {w.parameter(i), s.position.x, s.position.y, s.position.z, s.tangent.x,
                             s.tangent.y,    s.tangent.z,  s.normal.x,   s.normal.y,   s.normal.z,
                             s.speed,        s.turning,    s.dspeed,     s.dturning,   s.kappa()};
    for (double f : fields) {
      out += num(f);
      out += ',';
    }
    out += std::to_string(w.sign(i));
    out += '\n';
  }
  return out;
}

WaveFront parse_curve_csv(std::string_view text, std::optional<Model> model) {
  std::istringstream in{std::string(text)};
  std::string row;
  std::size_t line = 0;
  if (!std::getline(in, row) || (++line, row != kCurveHeader))
    throw Error(ErrorKind::SchemaError, "line 1: expected header '" + std::string(kCurveHeader) + "'");
  std::vector<FrameSample> samples;
  std::vector<double> us;
  while (std::getline(in, row)) {
    ++line;
    if (row.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(row);
    for (std::string f; std::getline(ss, f, ',');) fields.push_back(f);
    if (fields.size() != 16)
      throw Error(ErrorKind::SchemaError, "line " + std::to_string(line) + ": expected 16 fields");
    double v[14];
    for (int k = 0; k < 14; ++k) v[k] = parse_double(fields[static_cast<std::size_t>(k)], line);
    FrameSample s;
    s.position = {v[1], v[2], v[3]};
    s.tangent = {v[4], v[5], v[6]};
    s.normal = {v[7], v[8], v[9]};
    s.speed = v[10];
    s.turning = v[11];
    s.dspeed = v[12];
    s.dturning = v[13];
    us.push_back(v[0]);
    samples.push_back(s);
  }
  if (samples.size() < 4) throw Error(ErrorKind::SchemaError, "curve CSV needs at least 4 rows");
  const Model m = model ? *model : infer_model(samples.front().position);
  const double period = us[1] * static_cast<double>(samples.size());
  return WaveFront::from_samples(m, period, std::move(samples));
}

void write_atomic(const std::string& path, std::string_view content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorKind::ParseError, "cannot write '" + tmp + "'");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw Error(ErrorKind::ParseError, "write failed for '" + tmp + "'");
  }
  std::filesystem::rename(tmp, path);
}

std::string svg_document(const std::vector<Polyline>& lines, Model m, const Vec3& base) {
  const Vec3 p0 = normalize_point(base, m);
  Vec3 seed{1.0, 0.0, 0.0};
  if (m == Model::Sphere && std::abs(p0.x) > 0.9) seed = {0.0, 1.0, 0.0};
  const Vec3 e1 = TangentVector(SurfacePoint(p0, m), seed).normalized().v();
  const Vec3 e2 = cross(p0, e1, m);

  auto project = [&](const Vec3& x) -> std::pair<double, double> {
    if (m == Model::Hyperbolic) return {x.x / (1.0 + x.z), x.y / (1.0 + x.z)};
    const double d = 1.0 + inner(x, p0, m);
    return {inner(x, e1, m) / d, inner(x, e2, m) / d};
  };

  double extent = 1e-9;
  std::vector<std::vector<std::pair<double, double>>> projected;
  for (const auto& l : lines) {
    auto& pts = projected.emplace_back();
    for (const auto& x : l.points) {
      const auto q = project(x);
      if (!std::isfinite(q.first) || !std::isfinite(q.second)) continue;
      pts.push_back(q);
      extent = std::max({extent, std::abs(q.first), std::abs(q.second)});
    }
  }
  if (m == Model::Hyperbolic) extent = 1.0;
  const double size = 600.0;
  const double scale = 0.45 * size / extent;

  std::ostringstream out;
  out.precision(6);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size
      << "\" viewBox=\"0 0 " << size << ' ' << size << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (m == Model::Hyperbolic)
    out << "<circle cx=\"300\" cy=\"300\" r=\"" << scale << "\" fill=\"none\" stroke=\"#bbb\"/>\n";
  for (std::size_t i = 0; i < lines.size(); ++i) {
    out << "<polygon fill=\"none\" stroke=\"" << lines[i].stroke << "\" stroke-width=\"1.2\" points=\"";
    for (const auto& [x, y] : projected[i]) out << 300.0 + scale * x << ',' << 300.0 - scale * y << ' ';
    out << "\"><title>" << lines[i].label << "</title></polygon>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace tiretrack::cli
