#include <doctest.h>

#include <cmath>
#include <vector>

#include "gtsc/errors.hpp"
#include "gtsc/gtsc_model.hpp"
#include "gtsc/quadrature.hpp"
#include "oracles.hpp"

using namespace gtsc;

namespace {

GtscParams reference(double alpha, double rho = 0.5) { return {1.0, 0.5, 1.0, alpha, rho}; }

// alpha with f(alpha) = target, located by the Boost bisection oracle
double alpha_with_f(double target) {
  return oracle::bisect(
      [&](double a) { return oracle::discriminant(1.0, 0.5, 1.0, a, 0.5) - target; }, 0.01, 0.5);
}

}  // namespace

TEST_CASE("parameter validation names the violated constraint") {
  CHECK_NOTHROW(reference(0.1).validate());
  const auto message = [](GtscParams p) {
    try {
      p.validate();
    } catch (const DomainError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message({0.0, 0.5, 1.0, 0.1, 0.5}).find("q") != std::string::npos);
  CHECK(message({1.0, -0.1, 1.0, 0.1, 0.5}).find("d_H") != std::string::npos);
  CHECK(message({1.0, 0.5, 0.0, 0.1, 0.5}).find("c") != std::string::npos);
  CHECK(message({1.0, 0.5, 1.0, 0.0, 0.5}).find("alpha") != std::string::npos);
  CHECK(message({1.0, 0.5, 1.0, 0.1, 1.0}).find("rho") != std::string::npos);
  CHECK(message({1.0, 0.5, 1.0, 0.1, -1.0}).find("rho") != std::string::npos);
  CHECK(reference(0.1).sigma() == doctest::Approx(1.0));
}

TEST_CASE("psi_X basics") {
  const GtscParams p = reference(0.1);
  CHECK(psi_X(p, 0.0) == 0.0);
  const double h = 1e-6;
  CHECK((psi_X(p, h) - psi_X(p, -h)) / (2 * h) == doctest::Approx(-p.q).epsilon(1e-6));
  CHECK(std::abs(psi_X(p, 0.0977)) < 1e-4);
  for (double theta : {-0.5, 0.01, 0.05, 0.09}) {
    CAPTURE(theta);
    CHECK(psi_X(p, theta) == doctest::Approx(oracle::psi_x(1, 0.5, 1, 0.1, 0.5, theta)).epsilon(1e-9));
  }
  CHECK_THROWS_AS(psi_X(p, 0.2), DomainError);
}

TEST_CASE("psi_H basics") {
  const GtscParams p = reference(0.1);
  CHECK(psi_H(p, 0.0) == doctest::Approx(-p.q));
  CHECK(0.03 * psi_H(p, 0.03) == doctest::Approx(psi_X(p, 0.03)).epsilon(1e-12));
  const GtscParams ce = reference(0.05);
  CHECK(psi_H(ce, 0.05) == doctest::Approx(-0.18233454).epsilon(1e-7));
}

TEST_CASE("rho = 0 uses the logarithmic branch continuously") {
  GtscParams p = reference(0.1, 0.0);
  GtscParams near = reference(0.1, 1e-7);
  CHECK(psi_X(p, 0.05) == doctest::Approx(psi_X(near, 0.05)).epsilon(1e-5));
  CHECK(pi_H_tail(p, 2.0) == doctest::Approx(pi_H_tail(near, 2.0)).epsilon(1e-5));
}

TEST_CASE("Levy tails") {
  const GtscParams p = reference(0.05);
  CHECK(pi_X_tail(p, 1.0) == doctest::Approx(std::exp(-0.05)).epsilon(1e-14));
  CHECK(pi_X_tail(p, 1e4) < 1e-10);
  CHECK(pi_X_tail(p, 0.2) / pi_X_tail(p, 0.1) ==
        doctest::Approx(std::pow(2.0, -1.5) * std::exp(-0.005)).epsilon(1e-13));
  // closed form vs quadrature of the density
  for (double x : {0.1, 1.0, 10.0}) {
    const double ref = oracle::tail_integral([&](double y) { return pi_X_density(p, y); }, x);
    CHECK(pi_X_tail(p, x) == doctest::Approx(ref).epsilon(1e-9));
  }
  // rho <= 0 goes through quadrature of the density
  const GtscParams neg = reference(0.5, -0.5);
  const double ref = oracle::tail_integral([&](double y) { return pi_X_density(neg, y); }, 0.7);
  CHECK(pi_X_tail(neg, 0.7) == doctest::Approx(ref).epsilon(1e-8));
}

TEST_CASE("ladder tail") {
  const GtscParams unit{1.0, 0.5, 1.0, 1.0, 0.5};
  CHECK(pi_H_tail(unit, 1.0) == doctest::Approx(oracle::upper_gamma(-0.5, 1.0)).epsilon(1e-12));
  CHECK(1e-6 * pi_H_tail(unit, 1e-6) < 2e-3);
  const double h = 1e-5;
  const double deriv = -(pi_H_tail(unit, 0.5 + h) - pi_H_tail(unit, 0.5 - h)) / (2 * h);
  CHECK(deriv == doctest::Approx(std::pow(0.5, -1.5) * std::exp(-0.5)).epsilon(1e-6));
  double prev = pi_H_tail(unit, 0.01);
  for (double x = 0.02; x < 30.0; x *= 1.3) {
    const double v = pi_H_tail(unit, x);
    CHECK(v <= prev);
    prev = v;
  }
}

TEST_CASE("discriminant values and monotonicity") {
  CHECK(discriminant_f(reference(0.10)) == doctest::Approx(0.1709982).epsilon(1e-6));
  CHECK(discriminant_f(reference(0.03)) == doctest::Approx(-0.3710040).epsilon(1e-6));
  for (double a : {0.02, 0.07, 0.3}) {
    CHECK(discriminant_f(reference(a)) == doctest::Approx(oracle::discriminant(1, 0.5, 1, a, 0.5)).epsilon(1e-13));
  }
  double prev = discriminant_f(reference(0.01));
  for (double a = 0.015; a < 0.5; a += 0.005) {
    const double v = discriminant_f(reference(a));
    CHECK(v > prev);
    prev = v;
  }
  CHECK_THROWS_AS(discriminant_f(reference(0.1, -0.5)), DomainError);
}

TEST_CASE("boundary root of the discriminant") {
  const double ref = alpha_with_f(0.0);
  const double root = solve_alpha_for_discriminant(reference(0.1), 0.0, 0.01, 0.5);
  CHECK(root == doctest::Approx(ref).epsilon(1e-12));
  CHECK(root > 0.06);
  CHECK(root < 0.08);
  std::vector<double> grid;
  for (double a = 0.01; a <= 0.2; a += 0.01) grid.push_back(a);
  const auto located = locate_discriminant_root(reference(0.1), grid);
  REQUIRE(located.has_value());
  CHECK(*located == doctest::Approx(ref).epsilon(1e-12));
  const std::vector<double> all_positive{0.1, 0.2};
  CHECK_FALSE(locate_discriminant_root(reference(0.1), all_positive).has_value());
}

TEST_CASE("classification") {
  const RegimeReport cr = classify(reference(0.10));
  CHECK(cr.regime == Regime::Cramer);
  REQUIRE(cr.nu0.has_value());
  CHECK(*cr.nu0 > 0.0);
  CHECK(*cr.nu0 < 0.1);
  CHECK(*cr.m_star > 0.0);
  CHECK_FALSE(cr.beta1.has_value());
  CHECK_FALSE(cr.beta2.has_value());

  const RegimeReport ce = classify(reference(0.03));
  CHECK(ce.regime == Regime::ConvolutionEquivalent);
  CHECK(*ce.beta2 == doctest::Approx(0.371004).epsilon(1e-5));
  CHECK(*ce.beta1 == doctest::Approx(-0.03 * ce.f_alpha).epsilon(1e-14));
  CHECK_FALSE(ce.nu0.has_value());

  for (double a : {0.01, 0.1, 1.0, 5.0}) CHECK(classify(reference(a, -0.5)).regime == Regime::Cramer);
  CHECK(classify(reference(0.1, 0.0)).regime == Regime::Cramer);

  GtscParams boundary = reference(alpha_with_f(0.0));
  const RegimeReport b = classify(boundary, 1e-9);
  CHECK(b.regime == Regime::Boundary);
  CHECK_FALSE(b.nu0.has_value());
  CHECK_FALSE(b.beta2.has_value());
  CHECK(to_string(Regime::ConvolutionEquivalent) == "ConvolutionEquivalent");
}

TEST_CASE("Cramer root") {
  const GtscParams p = reference(0.10);
  // psi_X(t) / t = d_H t - q - c Gamma(-rho) (alpha^rho - (alpha - t)^rho)
  const auto psi_over_t = [](double t) {
    return 0.5 * t - 1.0 - oracle::tgamma(-0.5) * (std::sqrt(0.1) - std::sqrt(0.1 - t));
  };
  const double ref = oracle::bisect(psi_over_t, 1e-6, 0.1 - 1e-12);
  CHECK(cramer_root(p) == doctest::Approx(ref).epsilon(1e-12));
  CHECK(cramer_root(p) == doctest::Approx(0.0977).epsilon(1e-3));
  CHECK(std::abs(psi_X(p, cramer_root(p))) < 1e-12);

  const GtscParams near = reference(alpha_with_f(1e-6));
  const CramerRoot r = cramer_root_detail(near);
  CHECK(r.gap < 1e-3);
  CHECK(r.gap == doctest::Approx(near.alpha - r.nu0).epsilon(1e-9));
  CHECK(m_star(near) > 1e3);

  const GtscParams neg{1.0, 0.5, 1.0, 1.0, -0.5};
  const double nu = cramer_root(neg);
  CHECK(nu > 0.0);
  CHECK(nu < 1.0);
  CHECK(std::abs(psi_X(neg, nu)) < 1e-12);

  CHECK_THROWS_AS(cramer_root(reference(0.03)), StateError);
}

TEST_CASE("beta constants") {
  CHECK(beta_constants(reference(0.05)).beta2 == doctest::Approx(0.1823345).epsilon(1e-6));
  const double a = alpha_with_f(-1e-8);
  CHECK(beta_constants(reference(a), 1e-12).beta2 < 1e-7);
  for (double alpha : {0.02, 0.04, 0.06}) {
    const GtscParams p = reference(alpha);
    CHECK(beta_constants(p).beta2 * p.q == doctest::Approx(-discriminant_f(p)).epsilon(1e-14));
  }
  CHECK_THROWS_AS(beta_constants(reference(0.1)), StateError);
}

TEST_CASE("m* closed form and the root identity") {
  const GtscParams p = reference(0.10);
  const double nu = cramer_root(p);
  const double jumps = oracle::tail_integral(
      [&](double y) { return std::pow(y, -0.5) * std::exp((nu - 0.1) * y); }, 0.0);
  CHECK(m_star(p) == doctest::Approx(p.d_H + jumps).epsilon(1e-8));
  const double integral = oracle::tail_integral(
      [&](double h) {
        // integration by parts of int (e^(nu h) - 1) Pi_H(dh)
        const double tail = pi_H_tail(p, h);
        return tail > 0.0 ? nu * std::exp(nu * h + std::log(tail)) : 0.0;
      },
      0.0);
  CHECK(nu * p.d_H + integral == doctest::Approx(p.q).epsilon(1e-8));
}
