#pragma once

#include <stdexcept>
#include <string>

namespace coreloss {

// Error taxonomy mirrors the CLI exit codes: validation -> 2, numeric -> 3, io -> 4.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad inputs: violated preconditions, malformed configs, out-of-range parameters.
struct ValidationError : Error {
  using Error::Error;
};

// The computation itself failed: non-convergence, degenerate data discovered mid-run.
struct NumericError : Error {
  using Error::Error;
};

// Filesystem and parsing failures on external files.
struct IoError : Error {
  using Error::Error;
};

// Requested fundamental does not divide the series span into integer periods.
struct SpectralLeakageError : ValidationError {
  using ValidationError::ValidationError;
};

}  // namespace coreloss
