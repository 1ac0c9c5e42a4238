#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "latmon/bounds.hpp"

using namespace latmon;
using constants::pi;

TEST_CASE("grashof number", "[bounds]") {
  PhysicalParams p;
  p.nu = 0.01; p.area = 1.0; p.f_l2 = 1.0;
  CHECK(grashof(p) == Catch::Approx(1e4).epsilon(1e-15));
  p.nu = 1.0; p.area = 4.0 * pi * pi;
  CHECK(grashof(p) == Catch::Approx(4.0 * pi * pi).epsilon(1e-15));
  // linearity in ||f||
  p.f_l2 = 3.7;
  CHECK(grashof(p) == Catch::Approx(3.7 * 4.0 * pi * pi).epsilon(1e-14));
  p.nu = 0.0;
  CHECK_THROWS_AS(grashof(p), std::domain_error);
}

TEST_CASE("registry constants and orderings", "[bounds]") {
  const auto& c = constants::clt_candidates();
  CHECK(c.at("lt") == Catch::Approx(1.5).epsilon(1e-15));
  CHECK(c.at("hlw") == Catch::Approx(2.0 / (2.0 * pi)).epsilon(1e-15));
  CHECK(c.at("dll") == Catch::Approx(1.0 / (2.0 * std::sqrt(3.0))).epsilon(1e-14));
  CHECK(c.at("fhjn") == Catch::Approx(1.456 / (2.0 * pi)).epsilon(1e-15));
  for (const auto& [name, v] : c) CHECK(v >= constants::clt_lower());
  CHECK(constants::clad_sharp() < constants::clad_upper());
  CHECK(constants::stokes_c2d() == Catch::Approx(2.0 * pi));
  CHECK(constants::b_p(1.0) == 1.0);
  CHECK(constants::b_p(2.0) == Catch::Approx(std::sqrt(1.0 / (4.0 * pi))).epsilon(1e-15));
}

TEST_CASE("q-curves: values and roots", "[bounds]") {
  PhysicalParams p;
  p.nu = 0.02; p.area = 2.0; p.f_l2 = 1.3;
  const double clt = constants::clt_fhjn();
  const double clad = constants::clad_upper();
  CHECK(q_lt(0.0, p, clt) ==
        Catch::Approx(clt * 1.3 * 1.3 * 2.0 / (8.0 * pi * 0.02 * 0.02 * 0.02))
            .epsilon(1e-13));
  CHECK(q_lt(0.0, p, clt) > 0.0);
  CHECK(q_lad(0.0, p, clad) == 0.0);
  // roots match the closed forms in terms of the Grashof number
  const double G = grashof(p);
  const auto lt = q_lt_curve(p, clt);
  const auto lad = q_lad_curve(p, clad);
  CHECK(lt.positive_root() ==
        Catch::Approx(std::sqrt(clt) / (2.0 * std::sqrt(2.0) * pi) * G).epsilon(1e-12));
  CHECK(lad.positive_root() ==
        Catch::Approx(clad / (8.0 * pi * pi) * G * G).epsilon(1e-12));
  // and the curves actually vanish there
  CHECK(std::fabs(lt(lt.positive_root())) < 1e-9 * std::fabs(lt(0.0)));
  CHECK(std::fabs(lad(lad.positive_root())) < 1e-9 * std::fabs(lad(1.0)));
}

TEST_CASE("n_lifschitz: worked examples and precondition", "[bounds]") {
  // q(n) = -n^2 + 4: root exactly at n = 2
  QCurve c1{QCurveKind::lieb_thirring, 1.0, 4.0};
  CHECK_THROWS_AS(n_lifschitz(c1, 1), precondition_error);  // q(2) = 0 not < 0
  const auto r1 = n_lifschitz(c1, 2);
  CHECK(r1.n_l == Catch::Approx(2.0));
  CHECK(r1.n_star == Catch::Approx(2.0));
  // q(n) = -n^2 + 6n: integer root at 6
  QCurve c2{QCurveKind::ladyzhenskaya, 1.0, 6.0};
  const auto r2 = n_lifschitz(c2, 6);
  CHECK(r2.n_l == Catch::Approx(6.0));
  CHECK(r2.n_star == Catch::Approx(6.0));
  // q(n) = -n^2 + 2.5: n_L = 1.5 <= n* = sqrt(2.5)
  QCurve c3{QCurveKind::lieb_thirring, 1.0, 2.5};
  const auto r3 = n_lifschitz(c3, 1);
  CHECK(r3.n_l == Catch::Approx(1.5).epsilon(1e-15));
  CHECK(r3.n_star == Catch::Approx(std::sqrt(2.5)).epsilon(1e-15));
  CHECK(r3.n_l <= r3.n_star);
}

TEST_CASE("n_lifschitz <= n_star on random concave quadratics", "[bounds]") {
  std::mt19937_64 rng(20240817);
  std::uniform_real_distribution<double> ua(0.01, 10.0), ub(0.1, 500.0);
  int done = 0;
  while (done < 100) {
    QCurve c;
    c.kind = (done % 2 == 0) ? QCurveKind::lieb_thirring : QCurveKind::ladyzhenskaya;
    c.a = ua(rng);
    c.b = ub(rng);
    if (c.positive_root() < 1.0) continue;  // need an integer sign change
    const long n = find_sign_change(c);
    const auto r = n_lifschitz(c, n);
    CHECK(r.n_l <= r.n_star + 1e-12 * r.n_star);
    ++done;
  }
}

TEST_CASE("ns2d dimension bounds", "[bounds]") {
  PhysicalParams p;
  p.nu = 0.01; p.area = 1.0; p.f_l2 = 1.0;  // G = 1e4
  const double li = dim_bound_ns2d(p, constants::clt_fhjn(), Ns2dVariant::li_yau);
  CHECK(std::fabs(li - 541.8) < 0.5);
  const double pre = dim_bound_ns2d(p, constants::clad_upper(), Ns2dVariant::pre_lt);
  CHECK(std::fabs(pre - 2.389e5) < 1e2);
  // li_yau < no_li_yau for every registry constant (since c_LT > 1/(2 pi))
  for (const auto& [name, clt] : constants::clt_candidates()) {
    CHECK(dim_bound_ns2d(p, clt, Ns2dVariant::li_yau) <
          dim_bound_ns2d(p, clt, Ns2dVariant::no_li_yau));
  }
  // crossover: li_yau < pre_lt beyond G0
  const double clt = constants::clt_fhjn(), clad = constants::clad_upper();
  const double G0 = std::sqrt(clt) / (2.0 * std::sqrt(2.0) * pi) * 8.0 * pi * pi / clad;
  for (double scale : {1.5, 10.0, 1e3}) {
    PhysicalParams pp;
    pp.nu = 1.0; pp.area = 1.0; pp.f_l2 = G0 * scale;
    CHECK(dim_bound_ns2d(pp, clt, Ns2dVariant::li_yau) <
          dim_bound_ns2d(pp, clad, Ns2dVariant::pre_lt));
  }
  // monotone in the constant
  CHECK(dim_bound_ns2d(p, constants::clt_hlw(), Ns2dVariant::li_yau) >
        dim_bound_ns2d(p, constants::clt_fhjn(), Ns2dVariant::li_yau));
}

TEST_CASE("alpha-model dimension bounds", "[bounds]") {
  PhysicalParams p;
  p.gamma = 1.0; p.alpha = 0.1; p.g_l2 = 1.0; p.curl_g_l2 = 1.0;
  const double b2nb = dim_bound_alpha(2, AlphaBc::no_boundary, p);
  CHECK(b2nb == Catch::Approx(10.0 / (8.0 * pi)).epsilon(1e-10));
  const double b2pd = dim_bound_alpha(2, AlphaBc::proper_domain, p);
  CHECK(b2pd == Catch::Approx(50.0 / (8.0 * pi)).epsilon(1e-10));
  const double b3 = dim_bound_alpha(3, AlphaBc::no_boundary, p);
  CHECK(b3 == Catch::Approx(std::pow(0.1, -2.5) / (12.0 * pi)).epsilon(1e-10));
  CHECK(b3 == Catch::Approx(8.3882).epsilon(1e-4));

  // monotone decreasing in gamma and alpha
  double prev2 = 1e300, prev3 = 1e300;
  for (double gamma = 0.5; gamma <= 5.0; gamma += 0.45) {
    PhysicalParams pp = p;
    pp.gamma = gamma;
    const double v = dim_bound_alpha(2, AlphaBc::no_boundary, pp);
    CHECK(v < prev2);
    prev2 = v;
    const double w = dim_bound_alpha(3, AlphaBc::no_boundary, pp);
    CHECK(w < prev3);
    prev3 = w;
  }
  prev2 = prev3 = 1e300;
  for (double alpha = 0.05; alpha <= 2.0; alpha += 0.195) {
    PhysicalParams pp = p;
    pp.alpha = alpha;
    const double v = dim_bound_alpha(2, AlphaBc::no_boundary, pp);
    CHECK(v < prev2);
    prev2 = v;
    const double w = dim_bound_alpha(3, AlphaBc::no_boundary, pp);
    CHECK(w < prev3);
    prev3 = w;
  }

  // missing-parameter semantics
  PhysicalParams missing;
  missing.gamma = 1.0; missing.alpha = 0.1;
  CHECK_THROWS_AS(dim_bound_alpha(2, AlphaBc::no_boundary, missing),
                  precondition_error);
  CHECK_THROWS_AS(dim_bound_alpha(3, AlphaBc::no_boundary, missing),
                  precondition_error);
  missing.g_l2 = 1.0;  // min degenerates to the ||g|| branch
  CHECK(dim_bound_alpha(2, AlphaBc::no_boundary, missing) ==
        Catch::Approx(1.0 / (2.0 * 0.1) / (8.0 * pi * 0.1)).epsilon(1e-12));
}

TEST_CASE("stokes lower bounds", "[bounds]") {
  const auto b1 = stokes_lower_bounds(1, 4.0 * pi * pi, 2);
  CHECK(b1.lambda1_bound == Catch::Approx(1.0 / (2.0 * pi)).epsilon(1e-14));
  const auto b2 = stokes_lower_bounds(10, 1.0, 2);
  CHECK(b2.sum_bound == Catch::Approx(200.0 * pi).epsilon(1e-14));
  // d = 2 reduction of the general formula is exact
  for (double area : {0.5, 1.0, 9.3}) {
    for (long m : {1L, 3L, 17L}) {
      const auto b = stokes_lower_bounds(m, area, 2);
      CHECK(b.sum_bound ==
            Catch::Approx(2.0 * pi / area * double(m) * double(m)).epsilon(1e-14));
    }
  }
  const auto b3 = stokes_lower_bounds(5, 2.0, 3);
  CHECK(b3.sum_bound > 0.0);
  CHECK_THROWS_AS(stokes_lower_bounds(0, 1.0, 2), std::domain_error);
  CHECK_THROWS_AS(stokes_lower_bounds(1, -1.0, 2), std::domain_error);
}

TEST_CASE("interpolation constants", "[bounds]") {
  CHECK(gagnir_constant(2.0, GagSpace::torus) == Catch::Approx(1.0).epsilon(1e-15));
  CHECK(gagnir_constant(2.0, GagSpace::plane) == Catch::Approx(1.0).epsilon(1e-15));
  // q = 4: the 4th power of the torus constant is exactly 1/pi
  const double c4 = gagnir_constant(4.0, GagSpace::torus);
  CHECK(std::pow(c4, 4.0) == Catch::Approx(1.0 / pi).epsilon(1e-14));
  CHECK(c4 == Catch::Approx(0.75112554446494248).epsilon(1e-12));
  // plane middle factor at q = 4: 4^{1/2} / 3^{3/4}
  CHECK(constants::babenko_factor(4.0) ==
        Catch::Approx(2.0 / std::pow(3.0, 0.75)).epsilon(1e-14));
  CHECK(constants::babenko_factor(4.0) == Catch::Approx(0.8774).epsilon(1e-4));
  // plane <= torus, equality only at q = 2
  for (double q = 2.0; q <= 100.0; q += 0.5) {
    CHECK(gagnir_constant(q, GagSpace::plane) <=
          gagnir_constant(q, GagSpace::torus));
    if (q > 2.0) CHECK(constants::babenko_factor(q) < 1.0);
  }
  // babenko -> 1 as q -> 2+
  CHECK(constants::babenko_factor(2.0 + 1e-9) == Catch::Approx(1.0).epsilon(1e-7));
  // growth envelope of the torus constant: ratio to sqrt(q) stays within
  // [0.199, 0.71] on [2, 1000] (the ratio is (4 pi)^{-(q-2)/(2q)}/sqrt(2),
  // which dips just below 0.2 near q = 1000)
  for (double q = 2.0; q <= 1000.0; q *= 1.13) {
    const double ratio = gagnir_constant(q, GagSpace::torus) / std::sqrt(q);
    CHECK(ratio >= 0.199);
    CHECK(ratio <= 0.71);
  }
  CHECK_THROWS_AS(gagnir_constant(1.5, GagSpace::torus), std::domain_error);
}
