#pragma once

// Exception types shared across the library.

#include <stdexcept>
#include <string>

namespace fsprobe {

/// Base class for all library errors.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A parameter is outside its documented domain (eps, t, sigma, beta, ...).
struct bad_param : error {
  using error::error;
};

/// A 1-based column/row index is outside [1, n].
struct index_out_of_range : error {
  using error::error;
};

/// An operation requiring a square free-space matrix got a rectangular one.
struct non_square : error {
  using error::error;
};

/// A curve has two coincident vertices where distinct ones are required.
struct coincident_vertices : error {
  using error::error;
};

/// Arc-length subsampling step is non-positive or longer than the curve.
struct bad_step : error {
  using error::error;
};

/// Two curves that must have (near-)equal arc length / vertex count do not.
struct length_mismatch : error {
  using error::error;
};

/// Layer decomposition requires both corner entries to be zero.
struct not_zero_corners : error {
  using error::error;
};

/// An instance recipe failed its reference certification after all retries.
struct recipe_verification_failed : error {
  using error::error;
};

/// Malformed input file (curve or matrix).
struct parse_error : error {
  using error::error;
};

}  // namespace fsprobe
