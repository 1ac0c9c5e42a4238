#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "latmon/detail/incgamma.hpp"
#include "latmon/errors.hpp"

namespace latmon {

namespace constants {

inline constexpr double pi = detail::kPi;

/// Lieb-Thirring constant candidates, stored as R/(2 pi) with R named by
/// source; the classical lower bound is 1/(2 pi).
inline double clt_lt_original() { return 3.0 * pi / (2.0 * pi); }
inline double clt_hlw() { return 2.0 / (2.0 * pi); }
inline double clt_dll() { return (pi / std::sqrt(3.0)) / (2.0 * pi); }
inline double clt_fhjn() { return 1.456 / (2.0 * pi); }
inline double clt_lower() { return 1.0 / (2.0 * pi); }

inline double clad_upper() { return 16.0 / (27.0 * pi); }
inline double clad_sharp() { return 1.0 / (pi * 1.8622); }

inline double stokes_c2d() { return 2.0 * pi; }

inline const std::map<std::string, double>& clt_candidates() {
  static const std::map<std::string, double> m = {
      {"lt", clt_lt_original()},
      {"hlw", clt_hlw()},
      {"dll", clt_dll()},
      {"fhjn", clt_fhjn()},
  };
  return m;
}

/// B_p <= ((p-1)/(4 pi))^{(p-1)/p}; B_1 = 1.
inline double b_p(double p) {
  if (!(p >= 1.0)) throw std::domain_error("b_p: requires p >= 1");
  if (p == 1.0) return 1.0;
  return std::pow((p - 1.0) / (4.0 * pi), (p - 1.0) / p);
}

/// Babenko-Beckner factor q^{(q-2)/q} / (q-1)^{(q-1)/q}: 1 at q = 2, < 1 on
/// (2, inf).
inline double babenko_factor(double q) {
  if (!(q >= 2.0)) throw std::domain_error("babenko_factor: requires q >= 2");
  return std::pow(q, (q - 2.0) / q) / std::pow(q - 1.0, (q - 1.0) / q);
}

}  // namespace constants

enum class GagSpace { torus, plane };

/// Interpolation-inequality constant: (1/(4 pi))^{(q-2)/(2q)} (q/2)^{1/2} on
/// the torus; the plane constant multiplies in the Babenko-Beckner factor.
inline double gagnir_constant(double q, GagSpace space) {
  if (!(q >= 2.0)) throw std::domain_error("gagnir_constant: requires q >= 2");
  const double torus = std::pow(1.0 / (4.0 * constants::pi), (q - 2.0) / (2.0 * q)) *
                       std::sqrt(0.5 * q);
  if (space == GagSpace::torus) return torus;
  return torus * constants::babenko_factor(q);
}

/// Physical parameters feeding the dimension-bound formulas. Only the fields
/// used by the selected formula need to be set.
struct PhysicalParams {
  double nu = 0.0;     // viscosity
  double area = 0.0;   // |Omega|
  double f_l2 = 0.0;   // ||f||
  double gamma = 0.0;  // Ekman damping
  double alpha = 0.0;  // filter parameter
  std::optional<double> g_l2;       // ||g||
  std::optional<double> curl_g_l2;  // ||curl g|| (2D no-boundary branch)
};

/// Grashof number G = ||f|| |Omega| / nu^2.
inline double grashof(const PhysicalParams& params) {
  if (!(params.nu > 0.0) || !(params.area > 0.0))
    throw std::domain_error("grashof: requires nu > 0 and area > 0");
  if (!(params.f_l2 >= 0.0))
    throw std::domain_error("grashof: requires ||f|| >= 0");
  return params.f_l2 * params.area / (params.nu * params.nu);
}

enum class QCurveKind { lieb_thirring, ladyzhenskaya };

/// Upper-bound curve for the sums of global Lyapunov exponents:
///   lieb_thirring:  q(n) = -a n^2 + b        (b = c_LT ||f||^2 |Omega| / (8 pi nu^3))
///   ladyzhenskaya:  q(n) = -a n^2 + b n
/// with a = nu pi / |Omega| > 0, so the curve is concave.
struct QCurve {
  QCurveKind kind = QCurveKind::lieb_thirring;
  double a = 1.0;
  double b = 0.0;

  double operator()(double n) const {
    return kind == QCurveKind::lieb_thirring ? -a * n * n + b
                                             : -a * n * n + b * n;
  }

  /// Positive root n* with q(n*) = 0.
  double positive_root() const {
    return kind == QCurveKind::lieb_thirring ? std::sqrt(b / a) : b / a;
  }
};

inline QCurve q_lt_curve(const PhysicalParams& p, double clt) {
  const double a = p.nu * constants::pi / p.area;
  const double b =
      clt * p.f_l2 * p.f_l2 * p.area / (8.0 * constants::pi * p.nu * p.nu * p.nu);
  return QCurve{QCurveKind::lieb_thirring, a, b};
}

inline QCurve q_lad_curve(const PhysicalParams& p, double clad) {
  const double a = p.nu * constants::pi / p.area;
  const double b =
      clad * p.f_l2 * p.f_l2 * p.area / (8.0 * constants::pi * p.nu * p.nu * p.nu);
  return QCurve{QCurveKind::ladyzhenskaya, a, b};
}

inline double q_lt(double n, const PhysicalParams& p, double clt) {
  if (!(n >= 0.0)) throw std::domain_error("q_lt: requires n >= 0");
  return q_lt_curve(p, clt)(n);
}

inline double q_lad(double n, const PhysicalParams& p, double clad) {
  if (!(n >= 0.0)) throw std::domain_error("q_lad: requires n >= 0");
  return q_lad_curve(p, clad)(n);
}

struct LifschitzResult {
  double n_l = 0.0;     // n + q(n) / (q(n) - q(n+1))
  double n_star = 0.0;  // positive root of the curve
};

/// Dimension bound from the integer sign change of q: requires q(n) >= 0 and
/// q(n+1) < 0; by concavity n_l <= n_star.
inline LifschitzResult n_lifschitz(const QCurve& curve, long n) {
  const double qn = curve(double(n));
  const double qn1 = curve(double(n) + 1.0);
  if (!(qn >= 0.0) || !(qn1 < 0.0))
    throw precondition_error(
        "n_lifschitz: needs q(n) >= 0 and q(n+1) < 0 at the given n");
  LifschitzResult r;
  r.n_l = double(n) + qn / (qn - qn1);
  r.n_star = curve.positive_root();
  return r;
}

/// Scan integers for the sign change required by n_lifschitz.
inline long find_sign_change(const QCurve& curve, long n_max = 100000000L) {
  for (long n = 0; n < n_max; ++n) {
    if (curve(double(n)) >= 0.0 && curve(double(n) + 1.0) < 0.0) return n;
  }
  throw precondition_error("find_sign_change: no sign change found");
}

enum class Ns2dVariant { li_yau, no_li_yau, pre_lt };

/// Attractor-dimension bounds for the 2D Navier-Stokes system:
///   li_yau:    c_LT^{1/2}/(2 sqrt(2) pi) G
///   no_li_yau: c_LT/(2 sqrt(pi)) G
///   pre_lt:    (c_Lad/(8 pi^2)) G^2   (constant argument read as c_Lad)
inline double dim_bound_ns2d(const PhysicalParams& params, double c,
                             Ns2dVariant variant) {
  const double G = grashof(params);
  switch (variant) {
    case Ns2dVariant::li_yau:
      return std::sqrt(c) / (2.0 * std::sqrt(2.0) * constants::pi) * G;
    case Ns2dVariant::no_li_yau:
      return c / (2.0 * std::sqrt(constants::pi)) * G;
    default:
      return c / (8.0 * constants::pi * constants::pi) * G * G;
  }
}

enum class AlphaBc { no_boundary, proper_domain };

/// Attractor-dimension bounds for the damped regularized Euler system.
/// 2D no-boundary: (1/(8 pi)) (1/(alpha gamma^4)) min(||curl g||^2,
/// ||g||^2/(2 alpha)); 2D proper domain: (1/(8 pi)) ||g||^2/(2 alpha^2
/// gamma^4); 3D: (1/(12 pi)) ||g||^2/(alpha^{5/2} gamma^4).
inline double dim_bound_alpha(int dimension, AlphaBc bc,
                              const PhysicalParams& params) {
  if (dimension != 2 && dimension != 3)
    throw std::domain_error("dim_bound_alpha: dimension must be 2 or 3");
  if (!(params.gamma > 0.0) || !(params.alpha > 0.0))
    throw std::domain_error("dim_bound_alpha: requires gamma > 0 and alpha > 0");
  const double g4 = std::pow(params.gamma, 4.0);
  const double al = params.alpha;
  if (dimension == 3) {
    if (!params.g_l2)
      throw precondition_error("dim_bound_alpha: 3D bound needs ||g||");
    const double g2 = *params.g_l2 * *params.g_l2;
    return g2 / (12.0 * constants::pi * std::pow(al, 2.5) * g4);
  }
  if (bc == AlphaBc::proper_domain) {
    if (!params.g_l2)
      throw precondition_error("dim_bound_alpha: proper-domain bound needs ||g||");
    const double g2 = *params.g_l2 * *params.g_l2;
    return g2 / (8.0 * constants::pi * 2.0 * al * al * g4);
  }
  // 2D without boundary: min over the available branches
  if (!params.curl_g_l2 && !params.g_l2)
    throw precondition_error(
        "dim_bound_alpha: 2D no-boundary bound needs ||curl g|| or ||g||");
  double best = std::numeric_limits<double>::infinity();
  if (params.curl_g_l2) best = std::min(best, *params.curl_g_l2 * *params.curl_g_l2);
  if (params.g_l2) best = std::min(best, *params.g_l2 * *params.g_l2 / (2.0 * al));
  return best / (8.0 * constants::pi * al * g4);
}

struct StokesBounds {
  double sum_bound = 0.0;     // lower bound on sum_k ||grad u_k||^2
  double lambda1_bound = 0.0; // lower bound on the first eigenvalue
};

/// Li-Yau-type lower bounds for eigenvalue sums of the Stokes operator:
/// sum >= d/(2+d) ((2 pi)^d / (omega_d (d-1) |Omega|))^{2/d} m^{1+2/d}.
/// For d = 2 this reduces exactly to (2 pi/|Omega|) m^2.
inline StokesBounds stokes_lower_bounds(long m, double area, int dimension) {
  if (!(area > 0.0)) throw std::domain_error("stokes_lower_bounds: area > 0");
  if (m < 1) throw std::domain_error("stokes_lower_bounds: m >= 1");
  if (dimension < 2) throw std::domain_error("stokes_lower_bounds: d >= 2");
  const double d = double(dimension);
  // omega_d = pi^{d/2} / Gamma(d/2 + 1)
  const double omega_d =
      std::pow(constants::pi, 0.5 * d) / detail::lanczos_gamma(0.5 * d + 1.0);
  const double base = std::pow(2.0 * constants::pi, d) / (omega_d * (d - 1.0) * area);
  const double factor = d / (2.0 + d) * std::pow(base, 2.0 / d);
  StokesBounds b;
  b.sum_bound = factor * std::pow(double(m), 1.0 + 2.0 / d);
  b.lambda1_bound = factor;
  return b;
}

}  // namespace latmon
