#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace relsol {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid arguments, inconsistent grids, malformed configuration.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Grid is too short or too coarse for the requested field.
class GridError : public Error {
 public:
  using Error::Error;
};

/// An iterative method failed to converge. Carries the iteration trace
/// (quotients, Ritz values, residuals, depending on the method).
class SolverError : public Error {
 public:
  SolverError(const std::string& what, std::vector<double> trace = {})
      : Error(what), trace_(std::move(trace)) {}

  const std::vector<double>& trace() const noexcept { return trace_; }

 private:
  std::vector<double> trace_;
};

}  // namespace relsol
