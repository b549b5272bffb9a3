#pragma once

#include <stdexcept>
#include <string>

namespace ulrm {

// Every failure raised by the library derives from Error so callers (the CLI
// in particular) can map categories to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

class UnknownSpeciesError : public UsageError {
 public:
  explicit UnknownSpeciesError(const std::string& name)
      : UsageError("unknown species '" + name + "' (expected Rb, Cs or H)") {}
};

class InvalidStateError : public UsageError {
 public:
  using UsageError::UsageError;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

class IntegrationError : public Error {
 public:
  using Error::Error;
};

class AccuracyError : public Error {
 public:
  using Error::Error;
};

class DegeneracyError : public Error {
 public:
  using Error::Error;
};

class ResolutionError : public Error {
 public:
  using Error::Error;
};

class EigenSolverError : public Error {
 public:
  EigenSolverError(const std::string& what, std::size_t grid_index)
      : Error(what + " at R-grid index " + std::to_string(grid_index)),
        grid_index_(grid_index) {}
  std::size_t grid_index() const { return grid_index_; }

 private:
  std::size_t grid_index_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ManifestError : public Error {
 public:
  using Error::Error;
};

}  // namespace ulrm
