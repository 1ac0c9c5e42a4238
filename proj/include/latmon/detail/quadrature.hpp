#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <mutex>
#include <vector>

#include "latmon/errors.hpp"

namespace latmon::detail {

/// Gauss-Legendre rule on [-1, 1]. Nodes by Newton iteration on P_n with
/// Chebyshev initial guesses; symmetric, so only half are solved.
struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
};

inline GaussRule make_gauss_rule(int n) {
  GaussRule r;
  r.x.resize(n);
  r.w.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      double dz = p0 / pp;
      z -= dz;
      if (std::fabs(dz) < 1e-16) break;
    }
    r.x[i] = -z;
    r.x[n - 1 - i] = z;
    r.w[i] = r.w[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
  }
  return r;
}

inline const GaussRule& gauss_rule(int n) {
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make_gauss_rule(n)).first;
  return it->second;
}

template <class F>
double integrate_fixed(F&& f, double a, double b, const GaussRule& r) {
  const double c = 0.5 * (b - a), m = 0.5 * (a + b);
  double s = 0.0;
  for (std::size_t i = 0; i < r.x.size(); ++i) s += r.w[i] * f(m + c * r.x[i]);
  return c * s;
}

struct QuadResult {
  double value = 0.0;
  double err_est = 0.0;  // |last refinement difference|
};

/// Refine the node count until two successive levels differ by < tol_abs.
template <class F>
QuadResult integrate_auto(F&& f, double a, double b, double tol_abs,
                          int n0 = 16, int n_max = 4096) {
  double prev = integrate_fixed(f, a, b, gauss_rule(n0));
  for (int n = 2 * n0; n <= n_max; n *= 2) {
    double cur = integrate_fixed(f, a, b, gauss_rule(n));
    double diff = std::fabs(cur - prev);
    if (diff < tol_abs) return {cur, diff};
    prev = cur;
  }
  throw accuracy_error("integrate_auto: refinement did not converge");
}

/// Integrate over (0, b] with panels graded geometrically toward 0.
/// Handles integrands behaving like x^alpha * (smooth), alpha > -1.
template <class F>
QuadResult integrate_graded_zero(F&& f, double b, double tol_abs,
                                 int nodes = 24, int max_levels = 80) {
  const GaussRule& lo = gauss_rule(nodes);
  const GaussRule& hi = gauss_rule(2 * nodes);
  double sum_lo = 0.0, sum_hi = 0.0;
  double hi_edge = b;
  for (int j = 0; j < max_levels; ++j) {
    double lo_edge = hi_edge * 0.5;
    sum_lo += integrate_fixed(f, lo_edge, hi_edge, lo);
    double ph = integrate_fixed(f, lo_edge, hi_edge, hi);
    sum_hi += ph;
    hi_edge = lo_edge;
    if (j > 4 && std::fabs(ph) < 0.25 * tol_abs && hi_edge < 1e-6 * b) break;
  }
  return {sum_hi, std::fabs(sum_hi - sum_lo) + std::fabs(f(hi_edge * 0.5)) * hi_edge};
}

}  // namespace latmon::detail
