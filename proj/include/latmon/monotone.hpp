#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "latmon/errors.hpp"
#include "latmon/specfun.hpp"
#include "latmon/tolerance.hpp"

namespace latmon {

namespace detail {

// r_2(k) for k <= 64, enough for the transformed series at y <= 2.
inline const std::array<int, 65>& small_r2() {
  static const std::array<int, 65> table = [] {
    std::array<int, 65> r{};
    for (int a = -8; a <= 8; ++a)
      for (int b = -8; b <= 8; ++b) {
        const int k = a * a + b * b;
        if (k >= 1 && k <= 64) ++r[k];
      }
    return r;
  }();
  return table;
}

/// 2 y^2 phi(y) phi'(y) + 1, transformed series form
/// sum_{n in Z^2_0} (pi|n|^2/y - 1) e^{-pi|n|^2/y}; stable as y -> 0+.
inline double condmon_transformed(double y) {
  const auto& r2 = small_r2();
  double s = 0.0;
  for (int k = 1; k <= 64; ++k) {
    if (r2[k] == 0) continue;
    const double a = kPi * k / y;
    if (a > 745.0) break;
    s += r2[k] * (a - 1.0) * std::exp(-a);
  }
  return s;
}

/// Direct form 1 + 2 y^2 phi(y) phi'(y); intended for y >= ~0.5.
inline double condmon_direct(double y) {
  return 1.0 + 2.0 * y * y * phi(y) * phi_prime(y);
}

/// 2 y^2 phi(y) phi'(y), i.e. condmon_expr(y) - 1 without cancellation on
/// either branch.
inline double condmon_minus_one(double y) {
  if (y >= 1.0) return 2.0 * y * y * phi(y) * phi_prime(y);
  return condmon_transformed(y) - 1.0;
}

/// 6 y^{5/2} phi^2(y) phi'(y) + 3, the integrand bracket of the 3D
/// m-derivative (equals 2 * suff3_expr(y) - 1).
inline double deriv3_bracket(double y) {
  if (y > kPi)
    return 6.0 * std::pow(y, 2.5) * phi(y) * phi(y) * phi_prime(y) + 3.0;
  return 3.0 * phi(1.0 / y) * condmon_minus_one(y) + 3.0;
}

}  // namespace detail

/// 2 y^2 phi(y) phi'(y) + 1 (> 0 for all y > 0); evaluated through the
/// transformed lattice series for y < 1, directly otherwise.
inline double condmon_expr(double y) {
  if (!(y > 0.0)) throw std::domain_error("condmon_expr: requires y > 0");
  if (y < 1.0) return detail::condmon_transformed(y);
  return detail::condmon_direct(y);
}

/// 3 y^{5/2} phi^2(y) phi'(y) + 2 (> 0 for all y > 0); for y <= pi reduced
/// via the functional equation to (3/2) phi(1/y) (2 y^2 phi phi') + 2.
inline double suff3_expr(double y) {
  if (!(y > 0.0)) throw std::domain_error("suff3_expr: requires y > 0");
  if (y > kPi)
    return 3.0 * std::pow(y, 2.5) * phi(y) * phi(y) * phi_prime(y) + 2.0;
  return 1.5 * phi(1.0 / y) * detail::condmon_minus_one(y) + 2.0;
}

/// Root of psi(1/y) = 4/3 on [1, 2] by bisection. Closed form:
/// pi / (2 arcoth(4/3)).
inline double find_y_star(Tolerance tol = Tolerance::absolute(1e-12)) {
  double lo = 1.0, hi = 2.0;
  const auto f = [](double y) { return psi(1.0 / y) - 4.0 / 3.0; };
  // f is increasing in y; the root is bracketed analytically
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
    if (hi - lo < tol.budget(mid) * 0.5) break;
  }
  return 0.5 * (lo + hi);
}

enum class CertCondition { condmon_2d, suff3_3d };

inline const char* to_string(CertCondition c) {
  return c == CertCondition::condmon_2d ? "condmon" : "suff3";
}

struct CertificateReport {
  CertCondition condition = CertCondition::condmon_2d;
  double y_min = 0.0, y_max = 0.0;
  long samples = 0;
  bool refined = false;
  double min_value = 0.0;
  double min_location = 0.0;
  std::vector<double> violations;  // y values where the expression <= 0
  struct Named {
    double y_star = 0.0;
    double g_at_pi = 0.0;
    double h_at_y_star = 0.0;
  } named_constants;
};

/// Scan the chosen positivity condition on a log-spaced grid, optionally
/// refine the minimum by golden-section descent, and attach the named
/// constants. Violations are data, not errors.
inline CertificateReport certify(CertCondition condition, double y_min,
                                 double y_max, long samples,
                                 bool refine = true) {
  if (!(y_min > 0.0) || !(y_min < y_max))
    throw precondition_error("certify: requires 0 < y_min < y_max");
  if (samples < 100) throw precondition_error("certify: requires samples >= 100");

  const auto expr = [condition](double y) {
    return condition == CertCondition::condmon_2d ? condmon_expr(y)
                                                  : suff3_expr(y);
  };

  CertificateReport rep;
  rep.condition = condition;
  rep.y_min = y_min;
  rep.y_max = y_max;
  rep.samples = samples;
  rep.refined = refine;

  const double la = std::log(y_min), lb = std::log(y_max);
  double best_v = std::numeric_limits<double>::infinity();
  long best_i = 0;
  for (long i = 0; i < samples; ++i) {
    const double y = std::exp(la + (lb - la) * i / double(samples - 1));
    const double v = expr(y);
    if (v <= 0.0) rep.violations.push_back(y);
    if (v < best_v) {
      best_v = v;
      best_i = i;
    }
  }
  double best_y = std::exp(la + (lb - la) * best_i / double(samples - 1));

  if (refine) {
    // golden-section in log-y between the neighbours of the sampled minimum
    double a = la + (lb - la) * std::max<long>(best_i - 1, 0) / double(samples - 1);
    double b = la + (lb - la) * std::min<long>(best_i + 1, samples - 1) /
                        double(samples - 1);
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = expr(std::exp(c)), fd = expr(std::exp(d));
    while (b - a > 1e-6 / std::max(1.0, std::exp(a))) {
      if (fc < fd) {
        b = d; d = c; fd = fc;
        c = b - gr * (b - a);
        fc = expr(std::exp(c));
      } else {
        a = c; c = d; fc = fd;
        d = a + gr * (b - a);
        fd = expr(std::exp(d));
      }
      if (b - a < 1e-14) break;
    }
    const double yr = std::exp(0.5 * (a + b));
    const double vr = expr(yr);
    if (vr < best_v) {
      best_v = vr;
      best_y = yr;
      if (vr <= 0.0) rep.violations.push_back(yr);
    }
  }

  rep.min_value = best_v;
  rep.min_location = best_y;
  rep.named_constants.y_star = find_y_star();
  rep.named_constants.g_at_pi = g_fun(kPi);
  rep.named_constants.h_at_y_star = h_fun(rep.named_constants.y_star);
  return rep;
}

}  // namespace latmon
