#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gtsc/gtsc_model.hpp"

namespace gtsc {

struct CheckResult {
  int id = 0;
  std::string name;
  bool passed = false;
  double observed = 0.0;   ///< worst observed discrepancy (or the tested quantity)
  double tolerance = 0.0;  ///< bound the observation is compared against
  double seconds = 0.0;
  double time_limit = 0.0;
  std::string detail;
};

/// Monte Carlo settings for the simulation checks.
struct McOptions {
  long n_ruined = 100'000;      ///< ruined paths per run
  long required_ruined = 100'000;  ///< sample size the agreement check demands
  long max_paths = 50'000'000;  ///< path budget per run
  double u_start = 10.0;
  double u_growth = 1.5;
  int u_levels = 3;  ///< levels u_start * growth^k tried by the stability search
  double epsilon = 0.05;
  double dt = 0.05;
  double revival = 1e-6;  ///< barrier from default_barrier
  double creep_allowance = 0.0;
  int workers = 0;

  long calibration_paths = 100'000;
  double calibration_u = 5.0;
  long calibration_ruined = 10'000;
  double calibration_revival = 1e-3;
};

struct VerifyOptions {
  GtscParams base{};  ///< q, d_H, c, rho of the reference point; alpha is set per check
  double tol_scale = 1.0;
  std::uint64_t seed = 20240601;
  McOptions mc{};
};

/// Roots and discriminant of the reference figure: alpha = 0.10 (Cramer), 0.05 (CE).
inline constexpr double kCramerAlpha = 0.10;
inline constexpr double kCeAlpha = 0.05;
inline constexpr double kReportedBoundaryAlpha = 0.069;

CheckResult check_gamma_integral_identity(const VerifyOptions& o);    // 1
CheckResult check_cramer_root_creep(const VerifyOptions& o);          // 2
CheckResult check_ce_creep(const VerifyOptions& o);                   // 3
CheckResult check_mass_limits(const VerifyOptions& o);                // 4
CheckResult check_ruin_cross_forms(const VerifyOptions& o);           // 5
CheckResult check_boundary_continuity(const VerifyOptions& o);        // 6
CheckResult check_boundary_root(const VerifyOptions& o);              // 7
CheckResult check_generic_vs_closed_form(const VerifyOptions& o);     // 8
CheckResult check_tail_ratios(const VerifyOptions& o);                // 9
CheckResult check_mc_agreement(const VerifyOptions& o);               // 10
CheckResult check_simulator_calibration(const VerifyOptions& o);      // 11

/// Checks 1-9.
std::vector<CheckResult> run_identity_checks(const VerifyOptions& o);
/// Checks 10-11.
std::vector<CheckResult> run_mc_checks(const VerifyOptions& o);

std::string format_check(const CheckResult& r);

}  // namespace gtsc
