#pragma once

#include <stdexcept>
#include <string>

namespace latmon {

/// Requested accuracy cannot be reached with the given cutoff / table.
class insufficient_cutoff_error : public std::runtime_error {
public:
  explicit insufficient_cutoff_error(const std::string& what)
      : std::runtime_error(what) {}
};

/// A quadrature or series refinement failed to converge.
class accuracy_error : public std::runtime_error {
public:
  explicit accuracy_error(const std::string& what) : std::runtime_error(what) {}
};

/// A table would exceed its configured memory budget.
class capacity_error : public std::runtime_error {
public:
  explicit capacity_error(const std::string& what) : std::runtime_error(what) {}
};

/// A caller broke a documented precondition (sign pattern, rank, grid size).
class precondition_error : public std::invalid_argument {
public:
  explicit precondition_error(const std::string& what)
      : std::invalid_argument(what) {}
};

}  // namespace latmon
