#include "gtsc/special_functions.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "gtsc/errors.hpp"

namespace gtsc {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;
constexpr int kMaxIterations = 100000;

bool is_pole(double x) { return x <= 0.0 && x == std::floor(x); }

// Modified Lentz evaluation of the Legendre continued fraction.
// Returns h with Gamma(s, x) = e^-x x^s h. Converges for every real s once x >= 1.
double continued_fraction(double s, double x) {
  double b = x + 1.0 - s;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIterations; ++i) {
    const double an = -i * (i - s);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  throw AccuracyError("upper_incomplete_gamma: continued fraction did not converge", h, 0.0);
}

// gamma_lower(s, x) e^x x^-s = sum_n x^n / (s (s+1) ... (s+n)), s > 0.
double positive_series(double s, double x) {
  double ap = s;
  double term = 1.0 / s;
  double sum = term;
  for (int n = 1; n <= kMaxIterations; ++n) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) return sum;
  }
  throw AccuracyError("upper_incomplete_gamma: series did not converge", sum, term);
}

// s in (-1, 1), moderate x. Splits off the k = 0 term of the lower series so that
// the pole of Gamma(s) at s = 0 cancels analytically:
//   Gamma(s, x) = (Gamma(1+s) - 1)/s - (x^s - 1)/s - sum_{k>=1} (-1)^k x^(s+k) / (k! (s+k)).
double small_shape(double s, double x) {
  const double lx = std::log(x);
  double head;
  if (s == 0.0) {
    head = -std::numbers::egamma - lx;
  } else {
    head = (std::expm1(std::lgamma(1.0 + s)) - std::expm1(s * lx)) / s;
  }
  const double xs = std::exp(s * lx);
  double term = 1.0;
  double sum = 0.0;
  for (int k = 1; k <= kMaxIterations; ++k) {
    term *= -x / k;
    const double contrib = term * xs / (s + k);
    sum += contrib;
    if (std::abs(contrib) <= kEps * std::abs(sum)) return head - sum;
  }
  throw AccuracyError("upper_incomplete_gamma: small-x series did not converge", head - sum, 0.0);
}

bool continued_fraction_region(double s, double x) { return x >= 1.0 && x >= s + 1.0; }

}  // namespace

double gamma(double x) {
  if (std::isnan(x) || is_pole(x)) {
    throw DomainError("gamma: pole at non-positive integer x = " + std::to_string(x));
  }
  return std::tgamma(x);
}

double upper_incomplete_gamma(double s, double x) {
  if (!(x > 0.0) || !std::isfinite(s)) {
    throw DomainError("upper_incomplete_gamma: requires x > 0 and finite s");
  }
  if (std::isinf(x)) return 0.0;
  if (continued_fraction_region(s, x)) {
    return std::exp(-x + s * std::log(x)) * continued_fraction(s, x);
  }
  if (s > -1.0 && s < 1.0) return small_shape(s, x);
  if (s >= 1.0) {
    return gamma(s) - std::exp(-x + s * std::log(x)) * positive_series(s, x);
  }
  // s <= -1 and x < 1: step down from a base shape in [0, 1).
  const int steps = static_cast<int>(std::ceil(-s));
  double a = s + steps;
  double value = small_shape(a, x);
  for (int k = 0; k < steps; ++k) {
    a -= 1.0;
    value = (value - std::exp(a * std::log(x) - x)) / a;
  }
  return value;
}

double upper_incomplete_gamma_scaled(double s, double x) {
  if (!(x > 0.0) || !std::isfinite(s)) {
    throw DomainError("upper_incomplete_gamma_scaled: requires x > 0 and finite s");
  }
  if (std::isinf(x)) return 1.0;
  if (continued_fraction_region(s, x)) return x * continued_fraction(s, x);
  return upper_incomplete_gamma(s, x) * std::exp(x + (1.0 - s) * std::log(x));
}

}  // namespace gtsc
