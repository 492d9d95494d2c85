#pragma once

#include <stdexcept>
#include <string>

namespace hatchling {

// Commanded angle or phase outside its admissible interval.
struct RangeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Non-positive link length or other bad geometry.
struct LengthError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A (terrain, morphology, gait) cell the calibration table does not cover.
struct NotCalibratedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Entry lacks the field a sampling operation needs.
struct ModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad harness/table/policy configuration detected at load time.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parse failure in a structured text file; message carries line/field context.
struct ParseError : ConfigError {
  using ConfigError::ConfigError;
};

// Metric undefined for the given inputs (zero distance, zero cycles, ...).
struct UndefinedMetricError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Wrong element count handed to a fixed-arity operation.
struct ArityError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Trial made no displacement and no rotation for too many consecutive cycles.
struct StallError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Filesystem failure while emitting a report or trace.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace hatchling
