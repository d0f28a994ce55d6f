#include "aniso/error.hpp"

namespace aniso {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Supercritical: return "supercritical";
    case ErrorKind::InvalidExponent: return "invalid exponent";
    case ErrorKind::ConditionMViolated: return "condition (m) violated";
    case ErrorKind::InvalidGamma: return "invalid gamma";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::InvalidLevel: return "invalid level";
    case ErrorKind::GridMismatch: return "grid mismatch";
    case ErrorKind::ZeroFunction: return "zero function";
    case ErrorKind::Validation: return "validation";
    case ErrorKind::Diverged: return "diverged";
    case ErrorKind::NewtonStall: return "newton stall";
    case ErrorKind::NotANumber: return "nan";
    case ErrorKind::DegenerateProfile: return "degenerate profile";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

}  // namespace aniso
