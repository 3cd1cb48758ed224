#pragma once

#include <optional>
#include <span>
#include <string_view>

namespace gtsc {

/// Five-parameter GTSC claim-surplus model. X is spectrally positive with
/// E[X_1] = -q, Gaussian coefficient sigma^2 = 2 d_H and Levy density
/// c (alpha y^(-rho-1) + (rho+1) y^(-rho-2)) e^(-alpha y) on y > 0. Its ascending
/// ladder height process is killed at rate q, has drift d_H and Levy density
/// c y^(-rho-1) e^(-alpha y).
struct GtscParams {
  double q = 1.0;
  double d_H = 0.5;
  double c = 1.0;
  double alpha = 0.1;
  double rho = 0.5;

  /// Throws DomainError naming the violated constraint.
  void validate() const;
  double sigma() const;

  bool operator==(const GtscParams&) const = default;
};

enum class Regime { Cramer, ConvolutionEquivalent, Boundary };

std::string_view to_string(Regime regime);

struct RegimeReport {
  Regime regime = Regime::Boundary;
  double f_alpha = 0.0;
  std::optional<double> nu0;     ///< Cramer exponent
  std::optional<double> gap;     ///< alpha - nu0, kept separately for precision near the boundary
  std::optional<double> m_star;  ///< Cramer only
  std::optional<double> beta1;   ///< convolution equivalent only
  std::optional<double> beta2;   ///< convolution equivalent only, in (0, 1)

  /// Exponent of the limit laws: nu0 (Cramer) or alpha (convolution equivalent).
  double exponent(const GtscParams& p) const;
};

inline constexpr double kDefaultBoundaryTol = 1e-10;

/// log E e^(theta X_1), theta < alpha.
double psi_X(const GtscParams& p, double theta);
/// Laplace exponent of the ladder height process; psi_X(theta) = theta psi_H(theta).
/// theta = alpha is admitted as the left limit when rho in (0, 1).
double psi_H(const GtscParams& p, double theta);

double pi_X_density(const GtscParams& p, double y);
/// Tail of the Levy measure of X: c x^(-rho-1) e^(-alpha x).
double pi_X_tail(const GtscParams& p, double x);
/// Tail of the ladder Levy measure: c alpha^rho Gamma(-rho, alpha x).
double pi_H_tail(const GtscParams& p, double x);

/// f(alpha) = d_H alpha - q - c alpha^rho Gamma(-rho); its sign separates the regimes
/// for rho in (0, 1).
double discriminant_f(const GtscParams& p);

RegimeReport classify(const GtscParams& p, double boundary_tol = kDefaultBoundaryTol);

struct CramerRoot {
  double nu0;
  double gap;  ///< alpha - nu0
};

/// Unique root of psi_X on (0, alpha). Throws StateError outside the Cramer regime.
CramerRoot cramer_root_detail(const GtscParams& p,
                              double boundary_tol = kDefaultBoundaryTol);
double cramer_root(const GtscParams& p, double boundary_tol = kDefaultBoundaryTol);

struct BetaConstants {
  double beta1;  ///< -log E e^(alpha X_1)
  double beta2;  ///< -psi_H(alpha) / q
};
BetaConstants beta_constants(const GtscParams& p, double boundary_tol = kDefaultBoundaryTol);

/// d_H + int y e^(nu0 y) Pi_H(dy). Throws StateError outside the Cramer regime.
double m_star(const GtscParams& p, double boundary_tol = kDefaultBoundaryTol);

/// alpha in (lo, hi) with discriminant_f = target, other parameters held fixed.
/// f is strictly increasing in alpha for rho in (0, 1).
double solve_alpha_for_discriminant(const GtscParams& p, double target, double lo,
                                    double hi);

/// First sign change of discriminant_f along an ascending alpha grid, refined to
/// full precision. Empty when f does not change sign on the grid.
std::optional<double> locate_discriminant_root(const GtscParams& p,
                                               std::span<const double> alphas);

}  // namespace gtsc
