#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace aniso {

enum class ErrorKind {
  Supercritical,
  InvalidExponent,
  ConditionMViolated,
  InvalidGamma,
  Domain,
  InvalidLevel,
  GridMismatch,
  ZeroFunction,
  Validation,
  Diverged,
  NewtonStall,
  NotANumber,
  DegenerateProfile,
  Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Single exception type for the toolkit; the kind selects the CLI exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace aniso
