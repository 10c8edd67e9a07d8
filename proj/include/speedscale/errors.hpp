#pragma once

#include <stdexcept>
#include <string>

namespace speedscale {

// Base class for all toolkit errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid user-supplied parameter or malformed input value.
struct ParameterError : Error {
  using Error::Error;
};

// A schedule or file refers to a job/processor that does not exist.
struct ReferenceError : Error {
  using Error::Error;
};

// The instance admits no feasible solution at the requested granularity.
struct InfeasibleError : Error {
  using Error::Error;
};

// An internal invariant failed; indicates a bug upstream.
struct InternalError : Error {
  using Error::Error;
};

// File/format problems.
struct IoError : Error {
  using Error::Error;
};

}  // namespace speedscale
