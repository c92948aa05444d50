#pragma once

#include <string>
#include <vector>

#include "tiretrack/geometry.hpp"

namespace tiretrack::cli {

/// %.17g, so values re-read bit for bit.
std::string num(double x);

struct Polyline {
  std::string label;
  std::vector<Vec3> points;
  std::string stroke;
};

/// SVG drawing of surface curves. Sphere: stereographic projection from the
/// antipode of `base`. Hyperbolic: Poincare disk (x, y) / (1 + z). Display
/// only; neither projection preserves lengths.
std::string svg_document(const std::vector<Polyline>& lines, Model m, const Vec3& base);

}  // namespace tiretrack::cli
