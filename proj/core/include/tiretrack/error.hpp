#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tiretrack {

enum class ErrorKind {
  NullVector,
  WrongSheet,
  NotOnModel,
  SpecInvalid,
  WrongModel,
  NotConvex,
  NotProper,
  DegenerateCurve,
  StepUnstable,
  NotHyperbolic,
  NoFixedPoint,
  NotHorocyclicallyConvex,
  ParseError,
  SchemaError,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Single exception type for the library; callers switch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), detail_(what) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }
  /// Message without the kind prefix.
  [[nodiscard]] const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

}  // namespace tiretrack
