#pragma once

#include <stdexcept>
#include <string>

namespace nonrad {

// Time marching stopped contracting (large-data regime) or produced non-finite values.
struct SolverDivergenceError : std::runtime_error {
  explicit SolverDivergenceError(const std::string& what) : std::runtime_error(what) {}
};

// Scattering-profile extraction: exact accumulation and large-time sampling disagree.
struct ExtractionError : std::runtime_error {
  explicit ExtractionError(const std::string& what) : std::runtime_error(what) {}
};

// Fixed-point iteration exceeded max_iters or the measured ratio reached 1.
struct NonContractionError : std::runtime_error {
  double measured_ratio = 0.0;
  NonContractionError(const std::string& what, double ratio)
      : std::runtime_error(what), measured_ratio(ratio) {}
};

// A truncation sequence (e.g. principal-value moments) failed to stabilize.
struct ConvergenceError : std::runtime_error {
  explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input file.
struct InputError : std::runtime_error {
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace nonrad
