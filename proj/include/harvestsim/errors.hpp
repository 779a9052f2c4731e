#pragma once

#include <stdexcept>
#include <string>

namespace harvestsim {

/// Base of every toolkit error. The CLI maps UsageError (and subclasses) to
/// exit code 2 and every other Error to exit code 1.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Bad input: malformed files, invalid configuration, insufficient data.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file; the message names the source and row.
class ParseError : public UsageError {
 public:
  using UsageError::UsageError;
};

/// Invalid configuration value or argument; the message names the field.
class ConfigError : public UsageError {
 public:
  using UsageError::UsageError;
};

/// Too few samples/frames to carry out the requested computation.
class InsufficientDataError : public UsageError {
 public:
  using UsageError::UsageError;
};

/// Two comparison inputs share the same (label, gait, speed) key.
class DuplicateKeyError : public UsageError {
 public:
  using UsageError::UsageError;
};

/// Fewer than two distinct load resistances in a sweep fit.
class UnderdeterminedFitError : public UsageError {
 public:
  using UsageError::UsageError;
};

/// Computation failed on otherwise well-formed input.
class ComputeError : public Error {
 public:
  using Error::Error;
};

/// Coincident points leave a joint ray undefined.
class DegenerateGeometryError : public ComputeError {
 public:
  using ComputeError::ComputeError;
};

/// Meshing gears with different modules.
class IncompatibleMeshError : public ComputeError {
 public:
  using ComputeError::ComputeError;
};

/// Zero total circuit resistance.
class SingularCircuitError : public ComputeError {
 public:
  using ComputeError::ComputeError;
};

/// Efficiency requested with zero total power.
class UndefinedEfficiencyError : public ComputeError {
 public:
  using ComputeError::ComputeError;
};

/// Sweep fit did not converge; the message carries solver diagnostics.
class FitFailureError : public ComputeError {
 public:
  using ComputeError::ComputeError;
};

/// Capacitor voltage above the rated maximum.
class OverVoltageError : public ComputeError {
 public:
  using ComputeError::ComputeError;
};

}  // namespace harvestsim
