#pragma once

#include <functional>
#include <limits>

namespace gtsc {

using Integrand = std::function<double(double)>;

/// Tolerances for integrate_singular. Integration stops once the estimated
/// error is below max(abs_tol, rel_tol * |I|).
struct QuadratureSpec {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_refinements = 60;  ///< bisections allowed per finite piece

  void validate() const;
};

/// How an integrand behaves as y -> inf, used to pick the map of [y0, inf)
/// onto a finite interval.
struct TailDecay {
  enum class Kind { Exponential, Algebraic };
  Kind kind = Kind::Algebraic;
  double parameter = 2.0;

  /// Integrand carries a factor e^(-rate y); maps t = e^(-rate (y - y0)).
  static TailDecay exponential(double rate) { return {Kind::Exponential, rate}; }
  /// Integrand ~ y^-power with power > 1; maps y = y0 t^(-1/(power-1)).
  static TailDecay algebraic(double power) { return {Kind::Algebraic, power}; }
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
};

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Integral of f over (a, b), b possibly +inf, where f(y) ~ (y - a)^-singularity_order
/// near a (order in [0, 1)). The endpoint singularity is removed by the substitution
/// y = a + h t^(1/(1-order)); an infinite range is split at a + 1 and the tail mapped
/// according to `tail`. Throws AccuracyError when the refinement budget runs out.
QuadratureResult integrate_singular_detailed(const Integrand& f, double a, double b,
                                             double singularity_order,
                                             const QuadratureSpec& spec = {},
                                             TailDecay tail = TailDecay::algebraic(2.0));

inline double integrate_singular(const Integrand& f, double a, double b,
                                 double singularity_order, const QuadratureSpec& spec = {},
                                 TailDecay tail = TailDecay::algebraic(2.0)) {
  return integrate_singular_detailed(f, a, b, singularity_order, spec, tail).value;
}

/// Plain adaptive 21-point Gauss-Kronrod on a finite interval.
QuadratureResult integrate_adaptive(const Integrand& f, double a, double b,
                                    const QuadratureSpec& spec = {});

}  // namespace gtsc
