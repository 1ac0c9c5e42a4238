#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "latmon/bounds.hpp"
#include "latmon/errors.hpp"
#include "latmon/specfun.hpp"

namespace latmon {

namespace detail {

// splitmix64: tiny, portable, bit-reproducible
struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  double uniform01() {  // in (0, 1]
    return (next() >> 11) * 0x1.0p-53 + 0x1.0p-54;
  }
};

// Box-Muller on top of SplitMix64; returns one normal per call, caching the
// second of each pair.
struct GaussianGen {
  SplitMix64 rng;
  bool have = false;
  double cached = 0.0;
  explicit GaussianGen(std::uint64_t seed) : rng(seed) {}
  double next() {
    if (have) {
      have = false;
      return cached;
    }
    const double u1 = rng.uniform01();
    const double u2 = rng.uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    cached = r * std::sin(2.0 * kPi * u2);
    have = true;
    return r * std::cos(2.0 * kPi * u2);
  }
};

}  // namespace detail

/// Zero-mean trigonometric polynomial on the 2 pi-periodic torus, stored as a
/// dense coefficient block a_k for k in [-k_max, k_max]^2 restricted to
/// |k|^2 <= k_max^2, with a_0 = 0. Parseval on [0, 2 pi]^2:
/// ||phi||^2 = 4 pi^2 sum |a_k|^2, ||grad phi||^2 = 4 pi^2 sum |k|^2 |a_k|^2.
struct FourierField {
  int k_max = 0;
  bool real_valued = true;
  std::vector<std::complex<double>> a;  // (2 k_max + 1)^2, row-major over k1

  explicit FourierField(int kmax = 0, bool real = true)
      : k_max(kmax), real_valued(real),
        a(std::size_t(2 * kmax + 1) * std::size_t(2 * kmax + 1)) {}

  std::size_t idx(int k1, int k2) const {
    return std::size_t(k1 + k_max) * std::size_t(2 * k_max + 1) +
           std::size_t(k2 + k_max);
  }
  std::complex<double>& mode(int k1, int k2) { return a[idx(k1, k2)]; }
  const std::complex<double>& mode(int k1, int k2) const { return a[idx(k1, k2)]; }

  bool in_disk(int k1, int k2) const {
    return k1 * k1 + k2 * k2 <= k_max * k_max && !(k1 == 0 && k2 == 0);
  }

  double l2_norm_sq() const {
    double s = 0.0;
    for (int k1 = -k_max; k1 <= k_max; ++k1)
      for (int k2 = -k_max; k2 <= k_max; ++k2)
        if (in_disk(k1, k2)) s += std::norm(mode(k1, k2));
    return 4.0 * kPi * kPi * s;
  }

  double grad_norm_sq() const {
    double s = 0.0;
    for (int k1 = -k_max; k1 <= k_max; ++k1)
      for (int k2 = -k_max; k2 <= k_max; ++k2)
        if (in_disk(k1, k2)) s += (k1 * k1 + k2 * k2) * std::norm(mode(k1, k2));
    return 4.0 * kPi * kPi * s;
  }

  /// Values on the uniform n x n grid x_j = 2 pi j / n, by separable
  /// synthesis; row-major over x1.
  std::vector<std::complex<double>> evaluate_grid(int n) const {
    const int K = k_max, W = 2 * K + 1;
    // e[g*W + (k+K)] = exp(i k x_g)
    std::vector<std::complex<double>> e(std::size_t(n) * W);
    for (int g = 0; g < n; ++g) {
      const double x = 2.0 * kPi * g / n;
      for (int k = -K; k <= K; ++k)
        e[std::size_t(g) * W + (k + K)] =
            std::complex<double>(std::cos(k * x), std::sin(k * x));
    }
    // partial[k1][g2] = sum_{k2} a_{k1,k2} e^{i k2 x_{g2}}
    std::vector<std::complex<double>> partial(std::size_t(W) * n);
    for (int k1 = -K; k1 <= K; ++k1) {
      for (int g2 = 0; g2 < n; ++g2) {
        std::complex<double> s(0.0, 0.0);
        for (int k2 = -K; k2 <= K; ++k2) {
          const auto& c = a[idx(k1, k2)];
          if (c.real() != 0.0 || c.imag() != 0.0)
            s += c * e[std::size_t(g2) * W + (k2 + K)];
        }
        partial[std::size_t(k1 + K) * n + g2] = s;
      }
    }
    std::vector<std::complex<double>> out(std::size_t(n) * n);
    for (int g1 = 0; g1 < n; ++g1)
      for (int g2 = 0; g2 < n; ++g2) {
        std::complex<double> s(0.0, 0.0);
        for (int k1 = -K; k1 <= K; ++k1)
          s += e[std::size_t(g1) * W + (k1 + K)] *
               partial[std::size_t(k1 + K) * n + g2];
        out[std::size_t(g1) * n + g2] = s;
      }
    return out;
  }
};

/// Family orthonormal in <u,v>_m = m^2 (u,v) + (grad u, grad v).
struct OrthoFamily {
  double m = 1.0;
  std::vector<FourierField> fields;
  double gram_residual = 0.0;
};

namespace detail {

/// Weighted inner product in coefficient space:
/// 4 pi^2 sum (c0 + c1 |k|^2) conj(a_k) b_k.
/// (c0, c1) = (m^2, 1) gives <.,.>_m, (1, alpha) gives the alpha product.
inline std::complex<double> inner_weighted(const FourierField& u,
                                           const FourierField& v, double c0,
                                           double c1) {
  std::complex<double> s(0.0, 0.0);
  const int K = u.k_max;
  for (int k1 = -K; k1 <= K; ++k1)
    for (int k2 = -K; k2 <= K; ++k2)
      if (u.in_disk(k1, k2))
        s += (c0 + c1 * (k1 * k1 + k2 * k2)) * std::conj(u.mode(k1, k2)) *
             v.mode(k1, k2);
  return 4.0 * kPi * kPi * s;
}

inline std::complex<double> inner_m(const FourierField& u, const FourierField& v,
                                    double m) {
  return inner_weighted(u, v, m * m, 1.0);
}

inline void axpy(FourierField& y, std::complex<double> alpha,
                 const FourierField& x) {
  for (std::size_t i = 0; i < y.a.size(); ++i) y.a[i] += alpha * x.a[i];
}

inline void scale(FourierField& y, double s) {
  for (auto& c : y.a) c *= s;
}

inline FourierField random_field(int k_max, bool real_valued, GaussianGen& gen) {
  FourierField f(k_max, real_valued);
  const int K = k_max;
  for (int k1 = -K; k1 <= K; ++k1) {
    for (int k2 = -K; k2 <= K; ++k2) {
      if (!f.in_disk(k1, k2)) continue;
      if (real_valued) {
        // draw once per conjugate pair, in lexicographic half-lattice order
        const bool lead = (k1 > 0) || (k1 == 0 && k2 > 0);
        if (!lead) continue;
        const std::complex<double> c(gen.next(), gen.next());
        f.mode(k1, k2) = c;
        f.mode(-k1, -k2) = std::conj(c);
      } else {
        f.mode(k1, k2) = std::complex<double>(gen.next(), gen.next());
      }
    }
  }
  return f;
}

}  // namespace detail

/// Count of admissible modes (the dimension of the span available to the
/// family; conjugate symmetry halves the complex dimension but the real
/// dimension is the full mode count).
inline long mode_count(int k_max) {
  long c = 0;
  for (int k1 = -k_max; k1 <= k_max; ++k1)
    for (int k2 = -k_max; k2 <= k_max; ++k2)
      if ((k1 || k2) && k1 * k1 + k2 * k2 <= k_max * k_max) ++c;
  return c;
}

namespace detail {

/// Gram-Schmidt (classical, one reorthogonalization pass) of n Gaussian draws
/// under the weighted inner product. Deterministic for a given seed.
inline OrthoFamily ortho_family_weighted(int n, double c0, double c1, int k_max,
                                         std::uint64_t seed, bool real_valued) {
  GaussianGen gen(seed);
  OrthoFamily fam;
  fam.m = std::sqrt(c0 / c1);
  for (int retry = 0; retry < 8; ++retry) {
    fam.fields.clear();
    fam.fields.reserve(n);
    bool ok = true;
    for (int j = 0; j < n && ok; ++j) {
      FourierField f = random_field(k_max, real_valued, gen);
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& g : fam.fields) {
          const auto c = inner_weighted(g, f, c0, c1);
          axpy(f, -c, g);
        }
      }
      const double nrm2 = inner_weighted(f, f, c0, c1).real();
      if (!(nrm2 > 1e-24)) {
        ok = false;  // rank-deficient draw; refresh everything
        break;
      }
      scale(f, 1.0 / std::sqrt(nrm2));
      fam.fields.push_back(std::move(f));
    }
    if (!ok) continue;
    double resid = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        const double target = i == j ? 1.0 : 0.0;
        resid = std::max(
            resid, std::abs(inner_weighted(fam.fields[i], fam.fields[j], c0, c1) -
                            std::complex<double>(target, 0.0)));
      }
    fam.gram_residual = resid;
    return fam;
  }
  throw accuracy_error("ortho_family_weighted: repeated rank-deficient draws");
}

}  // namespace detail

/// Draw i.i.d. standard-normal coefficients for n fields and orthonormalize
/// by classical Gram-Schmidt (one reorthogonalization pass) in <.,.>_m.
/// Deterministic for a given seed.
inline OrthoFamily random_ortho_family(int n, double m, int k_max,
                                       std::uint64_t seed,
                                       bool real_valued = true) {
  if (n < 1) throw precondition_error("random_ortho_family: n >= 1");
  if (!(m > 0.0)) throw std::domain_error("random_ortho_family: m > 0");
  if (n > mode_count(k_max))
    throw precondition_error("random_ortho_family: n exceeds available modes");
  return detail::ortho_family_weighted(n, m * m, 1.0, k_max, seed, real_valued);
}

/// rho(x) = sum_j |phi_j(x)|^2 sampled on the n x n grid.
inline std::vector<double> rho_on_grid(const OrthoFamily& fam, int grid_n) {
  std::vector<double> rho(std::size_t(grid_n) * grid_n, 0.0);
  for (const auto& f : fam.fields) {
    const auto vals = f.evaluate_grid(grid_n);
    for (std::size_t i = 0; i < rho.size(); ++i) rho[i] += std::norm(vals[i]);
  }
  return rho;
}

/// ||rho||_{L^p(T^2)} by the uniform-grid rectangle rule. Exact for even
/// integer p when grid_n > 2 p k_max (rho^p is then a trigonometric
/// polynomial below the aliasing threshold); the caller must satisfy that
/// precondition, checked here.
inline double rho_lp_norm(const OrthoFamily& fam, double p, int grid_n) {
  if (fam.fields.empty()) throw precondition_error("rho_lp_norm: empty family");
  if (!(p >= 1.0)) throw std::domain_error("rho_lp_norm: requires p >= 1");
  const int k_max = fam.fields.front().k_max;
  if (grid_n < 4 * k_max + 4)
    throw precondition_error("rho_lp_norm: grid_n must be >= 4 k_max + 4");
  const bool even_int = p == std::floor(p) && (long(p) % 2 == 0);
  if (even_int && grid_n <= 2.0 * p * k_max + 1)
    throw precondition_error(
        "rho_lp_norm: aliasing (needs grid_n > 2 p k_max + 1 for even integer p)");
  const auto rho = rho_on_grid(fam, grid_n);
  double s = 0.0;
  for (double v : rho) s += std::pow(v, p);
  const double cell = (2.0 * kPi / grid_n) * (2.0 * kPi / grid_n);
  return std::pow(s * cell, 1.0 / p);
}

/// Grid-doubling wrapper: for non-integer p refines until successive grids
/// agree to 1e-8; integer p are exact on a grid above the aliasing threshold
/// (rho >= 0, so rho^p is a trigonometric polynomial of degree <= 2 p k_max).
inline double rho_lp_norm_auto(const OrthoFamily& fam, double p) {
  const int k_max = fam.fields.front().k_max;
  const bool int_p = p == std::floor(p);
  int n0 = std::max(4 * k_max + 4, int(2.0 * p * k_max) + 2);
  if (int_p) return rho_lp_norm(fam, p, n0);
  double prev = rho_lp_norm(fam, p, n0);
  for (int n = 2 * n0; n <= 64 * n0; n *= 2) {
    const double cur = rho_lp_norm(fam, p, n);
    if (std::fabs(cur - prev) < 1e-8 * std::max(1.0, std::fabs(cur))) return cur;
    prev = cur;
  }
  throw accuracy_error("rho_lp_norm_auto: grid doubling did not converge");
}

struct CheckResult {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

/// ||rho||_{L^p} <= B_p m^{-2/p} n^{1/p} for families orthonormal in <.,.>_m.
inline CheckResult check_liebd2(const OrthoFamily& fam, double p) {
  CheckResult r;
  r.lhs = rho_lp_norm_auto(fam, p);
  const double n = double(fam.fields.size());
  r.rhs = constants::b_p(p) * std::pow(fam.m, -2.0 / p) * std::pow(n, 1.0 / p);
  r.holds = r.lhs <= r.rhs;
  return r;
}

struct GagnirResult {
  double ratio = 0.0;   // ||phi||_q / (||phi||^{2/q} ||grad phi||^{1-2/q})
  double bound = 0.0;   // torus interpolation constant
  bool holds = false;
  double additive_min = 0.0;        // min over sampled m of the additive form
  double multiplicative_rhs = 0.0;  // bound * ||phi||^{2/q} ||grad phi||^{1-2/q}
  bool additive_holds = false;      // additive form held at all sampled m
};

namespace detail {

inline double field_lq_norm(const FourierField& f, double q) {
  OrthoFamily tmp;
  tmp.m = 1.0;
  tmp.fields.push_back(f);
  // ||phi||_q = (int |phi|^q)^{1/q} = (int (rho)^{q/2})^{1/q} with rho = |phi|^2
  const int k_max = f.k_max;
  const double p = 0.5 * q;  // exponent applied to rho = |phi|^2 >= 0
  const bool int_p = p == std::floor(p);
  int n0 = std::max(4 * k_max + 4, int(2.0 * p * k_max) + 2);
  auto norm_at = [&](int n) {
    const auto rho = rho_on_grid(tmp, n);
    double s = 0.0;
    for (double v : rho) s += std::pow(v, p);
    const double cell = (2.0 * kPi / n) * (2.0 * kPi / n);
    return std::pow(s * cell, 1.0 / q);
  };
  if (int_p) return norm_at(n0);
  double prev = norm_at(n0);
  for (int n = 2 * n0; n <= 64 * n0; n *= 2) {
    const double cur = norm_at(n);
    if (std::fabs(cur - prev) < 1e-8 * std::max(1.0, std::fabs(cur))) return cur;
    prev = cur;
  }
  throw accuracy_error("field_lq_norm: grid doubling did not converge");
}

}  // namespace detail

/// Interpolation inequality ||phi||_q <= C(q) ||phi||^{2/q} ||grad phi||^{1-2/q}
/// on the torus, plus the additive form
/// ||phi||_{2p}^2 <= B_p (m^{2-2/p} ||phi||^2 + m^{-2/p} ||grad phi||^2)
/// sampled at five m values around the exact minimizer.
inline GagnirResult check_gagnir(const FourierField& field, double q) {
  if (!(q >= 2.0)) throw std::domain_error("check_gagnir: requires q >= 2");
  const double l2 = std::sqrt(field.l2_norm_sq());
  const double h1 = std::sqrt(field.grad_norm_sq());
  if (!(l2 > 0.0) || !(h1 > 0.0))
    throw precondition_error("check_gagnir: field must be nonzero");

  GagnirResult r;
  const double lq = detail::field_lq_norm(field, q);
  r.ratio = lq / (std::pow(l2, 2.0 / q) * std::pow(h1, 1.0 - 2.0 / q));
  r.bound = gagnir_constant(q, GagSpace::torus);
  r.holds = r.ratio <= r.bound;

  const double p = 0.5 * q;
  const double bp = constants::b_p(p);
  r.multiplicative_rhs =
      r.bound * r.bound * std::pow(l2, 4.0 / q) * std::pow(h1, 2.0 - 4.0 / q);
  // exact minimizer of the additive right side: m*^2 = h1^2 / ((p-1) l2^2)
  const double mstar =
      p > 1.0 ? std::sqrt(h1 * h1 / ((p - 1.0) * l2 * l2)) : 1.0;
  r.additive_min = std::numeric_limits<double>::infinity();
  r.additive_holds = true;
  const double lq2 = lq * lq;
  for (double factor : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    const double m = mstar * factor;
    const double rhs = bp * (std::pow(m, 2.0 - 2.0 / p) * l2 * l2 +
                             std::pow(m, -2.0 / p) * h1 * h1);
    r.additive_min = std::min(r.additive_min, rhs);
    if (lq2 > rhs) r.additive_holds = false;
  }
  return r;
}

struct AlphaConsistency {
  double lhs = 0.0;        // ||rho||_{L^2} of the alpha-orthonormal family
  double rhs = 0.0;        // (1/(2 sqrt(pi))) n^{1/2} / alpha^{1/2}
  bool holds = false;
  double lhs_m = 0.0;      // ||rho||_{L^2} of the matching <.,.>_m family
  double rhs_m = 0.0;      // B_2 m^{-1} n^{1/2}
  bool holds_m = false;
  double rescale_rel_diff = 0.0;  // |lhs - lhs_m/alpha| / lhs
};

/// Builds the family orthonormal in (u,v) + alpha (grad u, grad v) from the
/// same draws as the <.,.>_m family with m^2 = 1/alpha, checks the L^2 bound
/// (1/(2 sqrt(pi))) n^{1/2}/alpha^{1/2}, and verifies that it reproduces the
/// p = 2 case exactly under the rescaling rho_alpha = rho_m / alpha.
inline AlphaConsistency check_alpha_consistency(int n, double alpha,
                                                std::uint64_t seed,
                                                int k_max = 8) {
  if (!(alpha > 0.0)) throw std::domain_error("check_alpha_consistency: alpha > 0");
  if (n < 1 || n > mode_count(k_max))
    throw precondition_error("check_alpha_consistency: bad family size");
  const double m = 1.0 / std::sqrt(alpha);

  const OrthoFamily fam_m = detail::ortho_family_weighted(n, m * m, 1.0, k_max, seed, true);
  const OrthoFamily fam_a = detail::ortho_family_weighted(n, 1.0, alpha, k_max, seed, true);

  AlphaConsistency r;
  r.lhs_m = rho_lp_norm_auto(fam_m, 2.0);
  r.rhs_m = constants::b_p(2.0) / m * std::sqrt(double(n));
  r.holds_m = r.lhs_m <= r.rhs_m;

  r.lhs = rho_lp_norm_auto(fam_a, 2.0);
  r.rhs = 1.0 / (2.0 * std::sqrt(constants::pi)) * std::sqrt(double(n) / alpha);
  r.holds = r.lhs <= r.rhs;
  r.rescale_rel_diff = std::fabs(r.lhs - r.lhs_m / alpha) / r.lhs;
  return r;
}

}  // namespace latmon
