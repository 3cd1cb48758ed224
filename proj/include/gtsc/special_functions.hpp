#pragma once

namespace gtsc {

/// Euler gamma function. Throws DomainError at the poles 0, -1, -2, ...
double gamma(double x);

/// Upper incomplete gamma Gamma(s, x) = int_x^inf t^(s-1) e^(-t) dt for any real s
/// and x > 0. Negative shapes are supported (analytic continuation in s).
double upper_incomplete_gamma(double s, double x);

/// e^x x^(1-s) Gamma(s, x). Tends to 1 as x -> inf; stays finite where
/// Gamma(s, x) itself underflows.
double upper_incomplete_gamma_scaled(double s, double x);

}  // namespace gtsc
