#include "scalesense/errors.hpp"

namespace scalesense {

std::string_view error_name(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidClassCount: return "invalid-class-count";
    case ErrorKind::InsufficientSamples: return "insufficient-samples";
    case ErrorKind::EmptyInput: return "empty-input";
    case ErrorKind::DegenerateCohort: return "degenerate-cohort";
    case ErrorKind::AlignmentError: return "alignment-error";
    case ErrorKind::ThresholdOutOfRange: return "threshold-out-of-range";
    case ErrorKind::DimensionMismatch: return "dimension-mismatch";
    case ErrorKind::InvalidProbability: return "invalid-probability";
    case ErrorKind::NegativeProbability: return "negative-probability";
    case ErrorKind::InvalidDelta: return "invalid-delta";
    case ErrorKind::NotCovered: return "not-covered";
    case ErrorKind::InvariantViolation: return "invariant-violation";
    case ErrorKind::InvalidGridStep: return "invalid-grid-step";
    case ErrorKind::EmptyGrid: return "empty-grid";
    case ErrorKind::SpecValidation: return "spec-validation-error";
    case ErrorKind::EmptyExperiment: return "empty-experiment";
    case ErrorKind::SchemaError: return "schema-error";
    case ErrorKind::ParseError: return "parse-error";
    case ErrorKind::IoError: return "io-error";
  }
  return "unknown-error";
}

Error::Error(ErrorKind kind, const std::string& detail)
    : std::runtime_error(std::string(error_name(kind)) + ": " + detail), kind_(kind) {}

}  // namespace scalesense
