#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wavedrift {

enum class ErrorKind {
  NonPositiveParameter,
  ValidityViolation,
  InvalidArgument,
  ConvergenceFailure,
  NotSuperCritical,
  OutOfDomain,
  EmptyInput,
  InvalidTolerance,
  StepSizeUnderflow,
  AboveSeparatrix,
  AboveCritical,
  SignViolation,
  QuadratureNonConvergence,
  MonotonicityViolation,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonPositiveParameter: return "NonPositiveParameter";
    case ErrorKind::ValidityViolation: return "ValidityViolation";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorKind::NotSuperCritical: return "NotSuperCritical";
    case ErrorKind::OutOfDomain: return "OutOfDomain";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::InvalidTolerance: return "InvalidTolerance";
    case ErrorKind::StepSizeUnderflow: return "StepSizeUnderflow";
    case ErrorKind::AboveSeparatrix: return "AboveSeparatrix";
    case ErrorKind::AboveCritical: return "AboveCritical";
    case ErrorKind::SignViolation: return "SignViolation";
    case ErrorKind::QuadratureNonConvergence: return "QuadratureNonConvergence";
    case ErrorKind::MonotonicityViolation: return "MonotonicityViolation";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-readable kind so
/// front ends can map it to exit codes without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace wavedrift
