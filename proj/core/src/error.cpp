#include "tiretrack/error.hpp"

namespace tiretrack {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NullVector: return "NullVector";
    case ErrorKind::WrongSheet: return "WrongSheet";
    case ErrorKind::NotOnModel: return "NotOnModel";
    case ErrorKind::SpecInvalid: return "SpecInvalid";
    case ErrorKind::WrongModel: return "WrongModel";
    case ErrorKind::NotConvex: return "NotConvex";
    case ErrorKind::NotProper: return "NotProper";
    case ErrorKind::DegenerateCurve: return "DegenerateCurve";
    case ErrorKind::StepUnstable: return "StepUnstable";
    case ErrorKind::NotHyperbolic: return "NotHyperbolic";
    case ErrorKind::NoFixedPoint: return "NoFixedPoint";
    case ErrorKind::NotHorocyclicallyConvex: return "NotHorocyclicallyConvex";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::SchemaError: return "SchemaError";
  }
  return "Unknown";
}

}  // namespace tiretrack
