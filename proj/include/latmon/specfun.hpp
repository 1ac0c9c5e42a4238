#pragma once

#include <cmath>
#include <stdexcept>

#include "latmon/detail/incgamma.hpp"
#include "latmon/detail/quadrature.hpp"
#include "latmon/errors.hpp"
#include "latmon/lattice.hpp"

namespace latmon {

inline constexpr double kPi = detail::kPi;

/// Gamma function for positive real argument (Lanczos, g = 7).
inline double gamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("gamma: requires x > 0");
  return detail::lanczos_gamma(x);
}

/// theta3(q) = sum_{n in Z} q^{n^2}, 0 <= q < 1. The series is truncated when
/// the next term drops below abs_tol/10; the tail is dominated by a geometric
/// series, so the truncation is rigorous.
inline double theta3(double q, double abs_tol = 1e-16) {
  if (!(q >= 0.0) || !(q < 1.0))
    throw std::domain_error("theta3: requires 0 <= q < 1");
  if (q == 0.0) return 1.0;
  double sum = 1.0;
  double term = 1.0;      // q^{n^2}
  double step = q;        // q^{2n-1} for the next n
  const double q2 = q * q;
  for (long n = 1; n < 100000000L; ++n) {
    term *= step;         // q^{n^2}
    step *= q2;
    if (2.0 * term < 0.1 * abs_tol) break;
    sum += 2.0 * term;
  }
  return sum;
}

/// phi(x) = theta3(e^{-pi x}); for x < 1 routed through the functional
/// equation phi(x) = phi(1/x)/sqrt(x) so the series argument stays >= 1.
inline double phi(double x) {
  if (!(x > 0.0)) throw std::domain_error("phi: requires x > 0");
  if (x >= 1.0) return theta3(std::exp(-kPi * x));
  return theta3(std::exp(-kPi / x)) / std::sqrt(x);
}

namespace detail {

// -2 pi sum_{n>=1} n^2 e^{-pi n^2 x}, valid series form for x >= 1 (converges
// for any x > 0; used directly only at arguments >= 1).
inline double phi_prime_series(double x) {
  double s = 0.0;
  for (int n = 1; n <= 64; ++n) {
    const double t = n * static_cast<double>(n);
    const double term = t * std::exp(-kPi * t * x);
    s += term;
    if (term < 1e-20 * (s + 1e-300)) break;
  }
  return -2.0 * kPi * s;
}

}  // namespace detail

/// phi'(x); for x < 1 via the differentiated functional equation
/// phi'(x) = -(1/2) x^{-3/2} phi(1/x) - x^{-5/2} phi'(1/x).
inline double phi_prime(double x) {
  if (!(x > 0.0)) throw std::domain_error("phi_prime: requires x > 0");
  if (x >= 1.0) return detail::phi_prime_series(x);
  const double ix = 1.0 / x;
  return -0.5 * std::pow(x, -1.5) * phi(ix) -
         std::pow(x, -2.5) * detail::phi_prime_series(ix);
}

/// (phi^2)'(y) = -pi sum_k k r_2(k) e^{-pi k y}, summed over lattice shells.
/// Throws insufficient_cutoff_error when the table cannot certify abs_tol
/// (tail bound uses r_2(k) <= 8 sqrt(k)).
inline double phi_sq_prime_lattice(double y, const ShellTable& shells,
                                   double abs_tol = 1e-13) {
  if (!(y > 0.0)) throw std::domain_error("phi_sq_prime_lattice: requires y > 0");
  if (shells.dimension != 2)
    throw precondition_error("phi_sq_prime_lattice: needs a dimension-2 table");
  const double decay = std::exp(-kPi * y);
  double s = 0.0;
  std::uint64_t K = shells.max_norm_sq;
  for (std::uint64_t k = 1; k <= K; ++k) {
    const std::uint32_t r = shells.counts[static_cast<std::size_t>(k)];
    const double kk = static_cast<double>(k);
    if (r != 0) s += kk * r * std::exp(-kPi * kk * y);
    // rigorous stop: remaining tail below a geometric majorant
    const double knext = kk + 1.0;
    const double lead = 8.0 * knext * std::sqrt(knext) * std::exp(-kPi * knext * y);
    const double ratio = decay * std::pow(1.0 + 1.0 / knext, 1.5);
    if (ratio < 0.95 && lead / (1.0 - ratio) < 0.1 * abs_tol / kPi) {
      return -kPi * s;
    }
  }
  throw insufficient_cutoff_error(
      "phi_sq_prime_lattice: table cutoff cannot certify the tolerance");
}

/// psi(y) = coth(pi y / 2), the hyperbolic majorant of phi for y >= 1.
inline double psi(double y) {
  if (!(y > 0.0)) throw std::domain_error("psi: requires y > 0 (pole at 0)");
  return 1.0 + 2.0 / std::expm1(kPi * y);
}

/// psi'(y) = -(pi/2) / sinh^2(pi y / 2).
inline double psi_prime(double y) {
  if (!(y > 0.0)) throw std::domain_error("psi_prime: requires y > 0");
  const double t = 0.5 * kPi * y;
  if (t > 350.0) {  // sinh overflows; the value has long underflowed
    return -0.0;
  }
  const double sh = std::sinh(t);
  return -0.5 * kPi / (sh * sh);
}

/// Modified Bessel function K_nu(t) from the integral representation
/// K_nu(t) = int_0^inf e^{-t cosh s} cosh(nu s) ds, by adaptive
/// Gauss-Legendre refinement on [0, s_max].
inline double bessel_k(double nu, double t, double rel_tol = 1e-12) {
  if (!(t > 0.0)) throw std::domain_error("bessel_k: requires t > 0");
  if (!(nu >= 0.0)) throw std::domain_error("bessel_k: requires nu >= 0");
  // choose s_max so that t(cosh s - 1) - nu s >= L beyond it
  const double L = std::log(1.0 / (rel_tol * 1e-3)) + 4.0;
  double s_max = std::acosh(1.0 + L / t);
  for (int it = 0; it < 12; ++it)
    s_max = std::acosh(1.0 + (L + nu * s_max) / t);
  const auto integrand = [nu, t](double s) {
    const double e = nu * s - t * std::cosh(s);
    if (e < -745.0) return 0.0;
    return 0.5 * std::exp(e) * (1.0 + std::exp(-2.0 * nu * s));
  };
  const double rough =
      detail::integrate_fixed(integrand, 0.0, s_max, detail::gauss_rule(64));
  const auto q = detail::integrate_auto(integrand, 0.0, s_max,
                                        rel_tol * 0.3 * rough, 64, 8192);
  return q.value;
}

/// F_p(t) = t^p K_p(t); bounded as t -> 0+ with limit 2^{p-1} Gamma(p).
inline double cap_f(double p, double t) {
  if (!(p > 0.0)) throw std::domain_error("cap_f: requires p > 0");
  return std::pow(t, p) * bessel_k(p, t);
}

/// g(y) = pi y^2 cosh(pi y/2) / sinh^3(pi y/2), via exponentials of
/// differences so large y underflows to 0 instead of overflowing.
inline double g_fun(double y) {
  if (!(y > 0.0)) throw std::domain_error("g_fun: requires y > 0");
  const double e = std::exp(-kPi * y);  // e^{-2t}, t = pi y / 2
  if (e == 0.0) return 0.0;
  const double om = -std::expm1(-kPi * y);  // 1 - e^{-2t}
  return 4.0 * kPi * y * y * e * (1.0 + e) / (om * om * om);
}

/// h(y) = pi y^{5/2} cosh^2(pi y/2) / sinh^4(pi y/2)  (the printed form; it
/// equals -2 y^{5/2} psi^2(y) psi'(y)).
inline double h_fun(double y) {
  if (!(y > 0.0)) throw std::domain_error("h_fun: requires y > 0");
  const double e = std::exp(-kPi * y);
  if (e == 0.0) return 0.0;
  const double om = -std::expm1(-kPi * y);
  const double opl = 1.0 + e;
  const double om2 = om * om;
  return 4.0 * kPi * std::pow(y, 2.5) * e * opl * opl / (om2 * om2);
}

}  // namespace latmon
