#pragma once

#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "gtsc/gtsc_model.hpp"
#include "gtsc/quadrature.hpp"

namespace gtsc {

/// The three ruin variables whose limiting conditional laws (given ruin, u -> inf)
/// are evaluated here: X_tau - u, u - X_tau-, u - sup_{s<tau} X_s.
enum class Law { Overshoot, Undershoot, MaxUndershoot };

std::string_view to_string(Law law);

/// Ladder data feeding the generic limit-law evaluators.
///
/// `pi_H_tail` is the tail of the ladder Levy measure and `g_kernel(x, y)` the
/// undershoot kernel g_x(y), 0 <= y <= x. `exponent` is nu0 (Cramer) or alpha
/// (convolution equivalent); `beta2` is 0 in the Cramer regime.
///
/// The quadrature hints describe the integrands: pi_H_tail(y) = O(y^-singularity_order)
/// at 0, and e^(exponent y) pi_H_tail(y) decays like `tail_decay`.
struct LadderModel {
  double q = 1.0;
  double d_H = 0.0;
  std::function<double(double)> pi_H_tail;
  std::function<double(double, double)> g_kernel;
  /// Optional log of pi_H_tail, used where pi_H_tail itself underflows.
  std::function<double(double)> log_pi_H_tail;
  double exponent = 0.0;
  Regime regime = Regime::Cramer;
  double beta2 = 0.0;

  double singularity_order = 0.0;
  TailDecay tail_decay = TailDecay::algebraic(2.0);
  QuadratureSpec quadrature{1e-13, 1e-11, 400};

  void validate() const;
  double creep_probability() const { return exponent * d_H / q; }
};

double overshoot_cdf(const LadderModel& m, double x);
double undershoot_cdf(const LadderModel& m, double x);
double max_undershoot_cdf(const LadderModel& m, double x);
double cdf(const LadderModel& m, Law law, double x);

/// Total mass the law attains as x -> inf: 1, or 1 - beta2 for the undershoots in
/// the convolution equivalent regime.
double total_mass(Regime regime, double beta2, Law law);

/// Ladder data of a GTSC model. The descending ladder is a unit drift, so
/// g_x(y) = int_0^(x-y) pi_X_tail(z + y) dz, evaluated here by quadrature.
LadderModel gtsc_ladder(const GtscParams& p, const RegimeReport& report);

/// Incomplete-gamma closed forms of the GTSC limit laws (rho in (0, 1)).
class GtscLimitLaws {
 public:
  GtscLimitLaws(const GtscParams& p, const RegimeReport& report);

  double overshoot_cdf(double x) const;
  double undershoot_cdf(double x) const;
  double max_undershoot_cdf(double x) const;
  double cdf(Law law, double x) const;

  /// exponent * d_H / q, the common value of all three laws at x = 0.
  double creep_probability() const;
  /// The creep probability written through the jump part only:
  /// 1 + (c/q) Gamma(-rho)(alpha^rho - (alpha-nu0)^rho), or 1 - beta2 + (c/q) alpha^rho Gamma(-rho).
  double creep_probability_from_jumps() const;

  double mass_at_infinity(Law law) const;
  /// log(total mass - cdf(x)), accurate where the defect underflows.
  double log_defect(Law law, double x) const;

  const GtscParams& params() const { return params_; }
  const RegimeReport& report() const { return report_; }
  double exponent() const { return exponent_; }
  double beta2() const { return beta2_; }

 private:
  GtscParams params_;
  RegimeReport report_;
  double exponent_;
  double gap_;  // alpha - exponent; 0 in the convolution equivalent regime
  double beta2_;
  double kappa_;  // c / q
};

/// Leading-order tails of the limit laws as x -> inf.
double overshoot_tail_asymptotic(const GtscParams& p, const RegimeReport& report, double x);
double undershoot_tail_asymptotic(const GtscParams& p, const RegimeReport& report, double x);
double max_undershoot_tail_asymptotic(const GtscParams& p, const RegimeReport& report,
                                      double x);
double log_tail_asymptotic(const GtscParams& p, const RegimeReport& report, Law law,
                           double x);

/// Smallest x on a doubling search at which the tail asymptotic is below `bound`.
double analytic_horizon(const GtscParams& p, const RegimeReport& report, Law law,
                        double bound = 1e-9);

/// P(tau_u < inf) as u -> inf, in the GTSC closed form of each regime.
double ruin_probability_asymptotic(const GtscParams& p, const RegimeReport& report, double u);
/// Same asymptotic through the general constants: q e^(-nu0 u) / (nu0 m*) in the
/// Cramer regime, pi_X_tail(u) / (beta1 beta2) in the convolution equivalent one.
double ruin_probability_general_form(const GtscParams& p, const RegimeReport& report,
                                     double u);
/// Convolution equivalent only: pi_H_tail(u) / (q beta2^2). Asymptotically equivalent
/// to the other forms, not equal at finite u.
double ruin_probability_ladder_form(const GtscParams& p, const RegimeReport& report, double u);

/// Tabulated distribution function.
struct CdfCurve {
  std::vector<double> grid;
  std::vector<double> values;
  double mass_at_infinity = 0.0;
  double atom_at_zero = 0.0;

  /// Monotone, within [0, 1], last value plus escaping mass at most 1 + tol.
  bool is_valid(double tol = 1e-9) const;
};

/// Grid points are evaluated in parallel (OpenMP); results match tabulate_serial.
CdfCurve tabulate(const LadderModel& m, Law law, std::span<const double> grid);
CdfCurve tabulate(const GtscLimitLaws& laws, Law law, std::span<const double> grid);
CdfCurve tabulate_serial(const LadderModel& m, Law law, std::span<const double> grid);
CdfCurve tabulate_serial(const GtscLimitLaws& laws, Law law, std::span<const double> grid);

std::vector<double> linear_grid(double lo, double hi, int n);

}  // namespace gtsc
