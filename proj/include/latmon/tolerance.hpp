#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace latmon {

/// Accuracy request: satisfied when either the absolute or the relative
/// target holds. At least one target must be strictly positive.
struct Tolerance {
  double abs_tol = 0.0;
  double rel_tol = 0.0;

  Tolerance() = default;
  Tolerance(double abs_t, double rel_t) : abs_tol(abs_t), rel_tol(rel_t) {
    if (!(abs_tol >= 0.0) || !(rel_tol >= 0.0))
      throw std::domain_error("Tolerance: targets must be >= 0");
    if (abs_tol == 0.0 && rel_tol == 0.0)
      throw std::domain_error("Tolerance: at least one target must be > 0");
  }

  static Tolerance absolute(double a) { return Tolerance(a, 0.0); }
  static Tolerance relative(double r) { return Tolerance(0.0, r); }
  static Tolerance both(double a, double r) { return Tolerance(a, r); }

  /// Effective absolute budget for a quantity of magnitude `scale`.
  double budget(double scale) const {
    return std::max(abs_tol, rel_tol * std::fabs(scale));
  }

  bool satisfied(double err, double scale) const {
    return std::fabs(err) <= budget(scale);
  }
};

}  // namespace latmon
