#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "latmon/latsum.hpp"

using namespace latmon;

namespace {

const ShellTable& table2() {
  static const auto t = get_shell_table(2, 1 << 17);
  return *t;
}
const ShellTable& table3() {
  static const auto t = get_shell_table(3, 1 << 17);
  return *t;
}

LatticeSumQuery mk(int d, double p, double m) {
  return LatticeSumQuery{d, p, m, Tolerance::both(1e-10, 1e-10)};
}

// frozen 30-digit references (cross-validated between two independent
// representations; agreement ~1e-15 or better)
struct Frozen { int d; double p, m, value; };
const Frozen kFrozen[] = {
    {2, 2.0, 1.0, 0.70874286068854898848},
    {2, 1.25, 0.5, 0.77938184742893153008},
    {2, 1.25, 0.1, 0.38176587991432679947},
    {2, 2.0, 10.0, 0.99681690113816209328},
    {2, 5.0, 10.0, 0.98726760455264837314},
    {3, 2.0, 1.0, 8.9985054779666136567},
    {3, 1.6, 2.0, 59.162655619976904726},
    {3, 1.6, 0.5, 55.283954374709664398},
    {3, 2.0, 50.0, 9.8695964010893586188},
};

}  // namespace

TEST_CASE("query validation", "[latsum]") {
  CHECK_THROWS_AS(mk(2, 1.0, 1.0).validate(), std::domain_error);
  CHECK_THROWS_AS(mk(3, 1.5, 1.0).validate(), std::domain_error);
  CHECK_THROWS_AS(mk(4, 2.0, 1.0).validate(), std::domain_error);
  CHECK_THROWS_AS(mk(2, 2.0, -1.0).validate(), std::domain_error);
  CHECK_NOTHROW(mk(2, 1.0000001, 0.0).validate());
}

TEST_CASE("frozen reference values, all methods", "[latsum]") {
  for (const auto& f : kFrozen) {
    const auto q = mk(f.d, f.p, f.m);
    const auto& tab = f.d == 2 ? table2() : table3();
    const auto dir = direct_sum(q, tab);
    CHECK(dir.value == Catch::Approx(f.value).epsilon(5e-12));
    const auto th = theta_integral(q);
    CHECK(th.value == Catch::Approx(f.value).epsilon(5e-12));
    if (f.d == 2) {
      const auto be = bessel_series(q, tab);
      CHECK(be.value == Catch::Approx(f.value).epsilon(5e-11));
      CHECK(std::fabs(be.value - f.value) <=
            be.error_bound + 1e-11 * std::fabs(f.value));
    }
    // error bounds must actually contain the truth
    CHECK(std::fabs(dir.value - f.value) <= dir.error_bound);
    CHECK(std::fabs(th.value - f.value) <=
          th.error_bound + 1e-12 * std::fabs(f.value));
  }
}

TEST_CASE("m = 0 short-circuit and domain errors", "[latsum]") {
  const auto q0 = mk(2, 2.0, 0.0);
  const auto r = direct_sum(q0, table2());
  CHECK(r.value == 0.0);
  CHECK(r.error_bound == 0.0);
  CHECK_THROWS_AS(theta_integral(q0), std::domain_error);
  CHECK_THROWS_AS(bessel_series(q0, table2()), std::domain_error);
  CHECK_THROWS_AS(bessel_series(mk(3, 2.0, 1.0), table3()), std::domain_error);
}

TEST_CASE("three-method pairwise agreement (spot grid)", "[latsum]") {
  for (double p : {1.25, 2.0, 5.0}) {
    for (double m : {0.1, 1.0, 10.0}) {
      const auto q = mk(2, p, m);
      const double a = direct_sum(q, table2()).value;
      const double b = theta_integral(q).value;
      const double c = bessel_series(q, table2()).value;
      const double scale = std::max(1.0, std::fabs(b));
      CHECK(std::fabs(a - b) <= 1e-9 * scale);
      CHECK(std::fabs(a - c) <= 1e-9 * scale);
      CHECK(std::fabs(b - c) <= 1e-9 * scale);
      CHECK(a < 1.0);
    }
  }
}

TEST_CASE("3D two-method agreement and bound", "[latsum]") {
  for (double p : {1.6, 2.0, 3.0}) {
    const double lim = gamma(p - 1.5) * std::pow(kPi, 1.5) / gamma(p);
    for (double m : {0.5, 1.0, 5.0}) {
      const auto q = mk(3, p, m);
      const double a = direct_sum(q, table3()).value;
      const double b = theta_integral(q).value;
      CHECK(std::fabs(a - b) <= 1e-8 * std::max(1.0, std::fabs(b)));
      CHECK(a < lim);
    }
  }
}

TEST_CASE("sandwich against a plain truncated oracle", "[latsum]") {
  // the tapered value must live between the truncated sum plus integral
  // tails from radii R+2 and R-2 (unit-cell comparison)
  const auto q = mk(2, 2.0, 1.0);
  const double v = direct_sum(q, table2()).value;
  const double R = 60.0;
  double brute = 0.0;
  for (int k = 1; k <= int(R * R); ++k)
    brute += table2().r(k) * std::pow(1.0 + k, -2.0);
  const double pref = q.prefactor();
  auto tail = [&](double s) { return kPi / ((q.p - 1.0) * (1.0 + s * s)); };
  CHECK(v >= pref * (brute + tail(R + 2.0)));
  CHECK(v <= pref * (brute + tail(R - 2.0)));
}

TEST_CASE("bessel series structure at large m", "[latsum]") {
  const auto q = mk(2, 2.0, 10.0);
  const auto r = bessel_series(q, table2());
  const double base = 1.0 - 1.0 / (100.0 * kPi);
  CHECK(r.value == Catch::Approx(base).epsilon(1e-14));
  CHECK(r.value - base > 0.0);       // Bessel corrections are positive
  CHECK(r.value - base < 1e-20);
  // approach rate 1 - I ~ (p-1)/(pi m^2)
  const auto q2 = mk(2, 3.0, 20.0);
  const double v = bessel_series(q2, table2()).value;
  CHECK(std::fabs((1.0 - v) * kPi * 400.0 / 2.0 - 1.0) < 1e-8);
}

TEST_CASE("limits and the continuum identity", "[latsum]") {
  // d=2 value at m = 100 within 1e-4 of 1
  const double v = theta_integral(mk(2, 2.0, 100.0)).value;
  CHECK(std::fabs(v - 1.0) < 1e-4);
  CHECK(v < 1.0);
  // the d=2 m->infinity limit is exactly (p-1) Gamma(p-1) / Gamma(p) = 1
  for (double p : {1.25, 1.7, 2.0, 3.3, 8.0, 21.0}) {
    CHECK((p - 1.0) * gamma(p - 1.0) / gamma(p) ==
          Catch::Approx(1.0).epsilon(1e-14));
  }
  // d=3 approach to the limit at p = 2: |I - pi^2| ~ 1/m^3
  const double v3 = theta_integral(mk(3, 2.0, 50.0)).value;
  CHECK(std::fabs(v3 - kPi * kPi) < 1e-3);
  CHECK(v3 < kPi * kPi);
}

TEST_CASE("monotonicity in m (coarse scan)", "[latsum]") {
  for (int d : {2, 3}) {
    const double p = d == 2 ? 1.5 : 2.0;
    double prev = -1.0;
    for (double m = 0.1; m <= 20.0; m += 0.5) {
      const double v = theta_integral(mk(d, p, m)).value;
      CHECK(v > prev);
      prev = v;
    }
  }
}

TEST_CASE("derivative: positivity and finite-difference oracle", "[latsum]") {
  for (const auto& [d, p, m] : {std::tuple{2, 2.0, 1.0}, {2, 1.25, 0.5},
                                {3, 2.0, 1.0}, {3, 1.6, 2.0}}) {
    const double der = derivative_dm(mk(d, p, m));
    CHECK(der > 0.0);
    const double h = 1e-4;
    const double fp = theta_integral(mk(d, p, m + h)).value;
    const double fm = theta_integral(mk(d, p, m - h)).value;
    CHECK(der == Catch::Approx((fp - fm) / (2.0 * h)).epsilon(1e-5));
  }
  // the spec'd oracle pairing: central differences of direct_sum
  const double der = derivative_dm(mk(2, 2.0, 1.0));
  const double h = 1e-4;
  const double fp = direct_sum(mk(2, 2.0, 1.0 + h), table2()).value;
  const double fm = direct_sum(mk(2, 2.0, 1.0 - h), table2()).value;
  CHECK(der == Catch::Approx((fp - fm) / (2.0 * h)).epsilon(1e-5));
}

TEST_CASE("insufficient cutoffs raise", "[latsum]") {
  const auto tiny = build_shell_table(2, 64);
  CHECK_THROWS_AS(direct_sum(mk(2, 2.0, 1.0), tiny), insufficient_cutoff_error);
  CHECK_THROWS_AS(bessel_series(mk(2, 2.0, 0.02), tiny),
                  insufficient_cutoff_error);
  // tolerance below the method floor
  auto q = mk(2, 2.0, 1.0);
  q.tol = Tolerance::absolute(1e-16);
  CHECK_THROWS_AS(direct_sum(q, table2()), insufficient_cutoff_error);
}
