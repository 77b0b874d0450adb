#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace scalesense {

enum class ErrorKind {
  InvalidClassCount,
  InsufficientSamples,
  EmptyInput,
  DegenerateCohort,
  AlignmentError,
  ThresholdOutOfRange,
  DimensionMismatch,
  InvalidProbability,
  NegativeProbability,
  InvalidDelta,
  NotCovered,
  InvariantViolation,
  InvalidGridStep,
  EmptyGrid,
  SpecValidation,
  EmptyExperiment,
  SchemaError,
  ParseError,
  IoError,
};

/// Stable kebab-case name used in CLI diagnostics, e.g. "invalid-class-count".
std::string_view error_name(ErrorKind kind) noexcept;

/// Domain error carrying a machine-readable kind next to a human message.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail);

  ErrorKind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept { return error_name(kind_); }

 private:
  ErrorKind kind_;
};

}  // namespace scalesense
