#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace champion {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

// Problem too large for an exhaustive routine.
class SizeError : public Error {
 public:
  using Error::Error;
};

// A grid search hit its boundary; the caller must widen the bounds.
class BoundaryError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Failure inside a per-path solver, tagged with the sample-path index.
class SolverError : public Error {
 public:
  SolverError(std::size_t path_index, const std::string& what)
      : Error("solver failed on sample path " + std::to_string(path_index) + ": " + what),
        path_index_(path_index) {}

  std::size_t path_index() const noexcept { return path_index_; }

 private:
  std::size_t path_index_;
};

}  // namespace champion
