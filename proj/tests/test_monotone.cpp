#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "latmon/latsum.hpp"
#include "latmon/monotone.hpp"

using namespace latmon;

namespace {

// independent oracles built on the raw series, no functional-equation routing
double phi_brute(double y) {
  double s = 1.0;
  for (int n = 1; n <= 80; ++n) s += 2.0 * std::exp(-kPi * n * n * y);
  return s;
}
double phi_prime_brute(double y) {
  double s = 0.0;
  for (int n = 1; n <= 80; ++n)
    s += -2.0 * kPi * n * n * std::exp(-kPi * n * n * y);
  return s;
}
double condmon_oracle(double y) {
  return 1.0 + 2.0 * y * y * phi_brute(y) * phi_prime_brute(y);
}
double suff3_oracle(double y) {
  return 3.0 * std::pow(y, 2.5) * phi_brute(y) * phi_brute(y) *
             phi_prime_brute(y) + 2.0;
}

}  // namespace

TEST_CASE("condmon_expr: frozen values and asymptotics", "[monotone]") {
  CHECK(condmon_expr(kPi) == Catch::Approx(0.99358436270535096).epsilon(1e-12));
  // 2 pi^2 phi(pi) phi'(pi) ~ -6.4e-3
  CHECK(condmon_expr(kPi) - 1.0 ==
        Catch::Approx(-6.41563729464904e-3).epsilon(1e-9));
  // y -> 0+: tiny but strictly positive
  const double v005 = condmon_expr(0.05);
  CHECK(v005 > 0.0);
  CHECK(v005 < 1e-20);
  CHECK(v005 == Catch::Approx(1.2756901e-25).epsilon(1e-6));
  // y -> infinity: 1 from below, exponentially fast
  CHECK(std::fabs(condmon_expr(20.0) - 1.0) < 1e-50);
}

TEST_CASE("condmon_expr branches agree on the overlap", "[monotone]") {
  for (double y = 0.8; y <= 1.2001; y += 0.02) {
    const double a = detail::condmon_transformed(y);
    const double b = detail::condmon_direct(y);
    CHECK(std::fabs(a - b) < 1e-10);
    CHECK(condmon_expr(y) == Catch::Approx(condmon_oracle(y)).epsilon(1e-11));
  }
}

TEST_CASE("condmon positivity and comparison chain", "[monotone]") {
  // positive on a wide log grid; min over [0.5, 100] at least 0.99
  double min_inner = 1e300;
  for (int i = 0; i < 4000; ++i) {
    const double y = std::exp(std::log(1e-3) + i * (std::log(100.0) - std::log(1e-3)) / 3999.0);
    const double v = condmon_expr(y);
    CHECK(v > 0.0);
    if (y >= 0.5) min_inner = std::min(min_inner, v);
  }
  CHECK(min_inner >= 0.99);
  // for y >= pi: condmon_expr(y) >= 1 - g(y) and g decreases
  double gprev = g_fun(kPi) + 1e-15;
  for (double y = kPi; y <= 20.0; y += 0.1) {
    CHECK(condmon_expr(y) >= 1.0 - g_fun(y));
    CHECK(g_fun(y) <= gprev);
    gprev = g_fun(y);
  }
}

TEST_CASE("suff3_expr: values, reduction, and limits", "[monotone]") {
  // reduced form vs the raw-series oracle on (0.3, pi]
  for (double y : {0.35, 0.5, 0.8, 1.0, 1.6, 2.0, 3.0}) {
    CHECK(suff3_expr(y) == Catch::Approx(suff3_oracle(y)).epsilon(1e-11));
  }
  // approaches 2 as y grows and 1/2 as y -> 0+
  CHECK(std::fabs(suff3_expr(20.0) - 2.0) < 1e-40);
  CHECK(suff3_expr(1e-3) == Catch::Approx(0.5).epsilon(1e-9));
  // positive on the log grid, including the near-minimum region
  for (int i = 0; i < 4000; ++i) {
    const double y = std::exp(std::log(1e-3) + i * (std::log(100.0) - std::log(1e-3)) / 3999.0);
    CHECK(suff3_expr(y) > 0.0);
  }
}

TEST_CASE("find_y_star: root and closed form", "[monotone]") {
  const double ystar = find_y_star();
  const double closed = kPi / (2.0 * 0.5 * std::log(7.0));  // arcoth(4/3) = ln(7)/2
  CHECK(ystar == Catch::Approx(closed).epsilon(1e-10));
  CHECK(std::fabs(ystar - 1.6144) < 5e-4);
  CHECK(psi(1.0 / ystar) == Catch::Approx(4.0 / 3.0).epsilon(1e-10));
  CHECK(ystar < kPi);
}

TEST_CASE("certify: clean scans and named constants", "[monotone]") {
  const auto rep = certify(CertCondition::condmon_2d, 1e-3, 100.0, 20000, true);
  CHECK(rep.violations.empty());
  CHECK(rep.min_value > 0.0);
  CHECK(std::fabs(rep.named_constants.g_at_pi - 0.0064) < 5e-4);
  CHECK(std::fabs(rep.named_constants.y_star - 1.6144) < 5e-4);
  CHECK(std::fabs(rep.named_constants.h_at_y_star - 0.270) < 5e-3);

  const auto rep3 = certify(CertCondition::suff3_3d, 1e-3, 100.0, 20000, true);
  CHECK(rep3.violations.empty());
  CHECK(rep3.min_value > 0.0);

  CHECK_THROWS_AS(certify(CertCondition::condmon_2d, 1.0, 0.5, 1000, false),
                  precondition_error);
  CHECK_THROWS_AS(certify(CertCondition::condmon_2d, 0.1, 1.0, 10, false),
                  precondition_error);
}

TEST_CASE("certificate implies a positive m-derivative", "[monotone]") {
  for (const auto& [d, p, m] :
       {std::tuple{2, 1.5, 0.3}, {2, 3.0, 2.0}, {3, 1.7, 0.7}, {3, 2.5, 4.0}}) {
    const double der = derivative_dm(LatticeSumQuery{d, p, m});
    CHECK(der > 0.0);
  }
}
