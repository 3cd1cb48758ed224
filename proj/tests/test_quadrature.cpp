#include <doctest.h>

#include <cmath>

#include "gtsc/errors.hpp"
#include "gtsc/quadrature.hpp"
#include "gtsc/special_functions.hpp"
#include "oracles.hpp"

using namespace gtsc;

TEST_CASE("tempered power integrand matches the gamma closed form") {
  const double rho = 0.5;
  // theta = alpha = 1: (e^y - 1) e^-y = 1 - e^-y, so the integrand decays like y^(-rho-1)
  const auto f = [&](double y) { return -std::expm1(-y) * std::pow(y, -rho - 1.0); };
  const double v = integrate_singular(f, 0.0, kInfinity, rho, {1e-14, 1e-12, 400},
                                      TailDecay::algebraic(rho + 1.0));
  CHECK(v == doctest::Approx(2.0 * std::sqrt(M_PI)).epsilon(1e-9));
}

TEST_CASE("zero integrand integrates to zero") {
  CHECK(integrate_singular([](double) { return 0.0; }, 0.0, kInfinity, 0.5) == 0.0);
}

TEST_CASE("endpoint singularity on a finite range") {
  const double v = integrate_singular([](double y) { return 1.0 / std::sqrt(y); }, 0.0, 1.0, 0.5);
  CHECK(v == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("singular integrals agree with tanh-sinh") {
  for (double order : {0.1, 0.5, 0.9}) {
    const auto f = [&](double y) { return std::pow(y, -order) * std::cos(3.0 * y); };
    CAPTURE(order);
    CHECK(integrate_singular(f, 0.0, 2.0, order) ==
          doctest::Approx(oracle::finite_integral(f, 0.0, 2.0)).epsilon(1e-9));
  }
}

TEST_CASE("exponential tail map agrees with exp-sinh") {
  const auto f = [](double y) { return std::pow(y, -0.3) * std::exp(-0.02 * y); };
  const double ref = oracle::tail_integral(f, 0.0);
  const double v =
      integrate_singular(f, 0.0, kInfinity, 0.3, {1e-14, 1e-12, 400}, TailDecay::exponential(0.02));
  CHECK(v == doctest::Approx(ref).epsilon(1e-9));
  CHECK(ref == doctest::Approx(gtsc::gamma(0.7) * std::pow(0.02, -0.7)).epsilon(1e-9));
}

TEST_CASE("adaptive Gauss-Kronrod on smooth integrands") {
  const auto r = integrate_adaptive([](double y) { return std::exp(-y * y); }, -3.0, 3.0);
  CHECK(r.value == doctest::Approx(std::sqrt(M_PI) * std::erf(3.0)).epsilon(1e-12));
  CHECK(r.error >= 0.0);
  CHECK(r.evaluations > 0);
}

TEST_CASE("quadrature input validation") {
  CHECK_THROWS_AS(QuadratureSpec({0.0, 1e-10, 10}).validate(), DomainError);
  CHECK_THROWS_AS(QuadratureSpec({1e-10, 1e-10, 0}).validate(), DomainError);
  CHECK_THROWS_AS(integrate_singular([](double y) { return y; }, 0.0, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(integrate_singular([](double y) { return y; }, 1.0, 0.0, 0.0), DomainError);
}

TEST_CASE("non-finite integrands and exhausted budgets are reported") {
  CHECK_THROWS_AS(integrate_singular([](double) { return std::nan(""); }, 0.0, 1.0, 0.0),
                  DomainError);
  // overflows to inf * 0 far out in the tail; must not be silently dropped
  const auto overflowing = [](double y) { return std::expm1(y) * std::exp(-y) / (y * y); };
  CHECK_THROWS_AS(integrate_singular(overflowing, 0.5, kInfinity, 0.0), DomainError);
  const auto wild = [](double y) { return std::sin(1.0 / (y + 1e-9)); };
  try {
    integrate_singular(wild, 0.0, 1.0, 0.0, {1e-15, 1e-15, 2});
    FAIL("expected AccuracyError");
  } catch (const AccuracyError& e) {
    CHECK(std::isfinite(e.estimate()));
    CHECK(e.error_bound() > 0.0);
  }
}
