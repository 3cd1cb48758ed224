#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <vector>

#include "gtsc/gtsc_model.hpp"
#include "gtsc/limit_laws.hpp"

namespace gtsc {

/// Discretisation of the claim-surplus process: jumps of size >= epsilon are exact,
/// smaller ones are replaced by their compensating drift (and, optionally, a Brownian
/// term of matching variance). The Brownian part is simulated exactly on sub-steps of
/// length <= dt, with the bridge maximum sampled on each sub-step.
struct SimScheme {
  double epsilon = 0.05;
  bool use_gaussian_correction = false;
  double dt = 0.05;
  double barrier = 100.0;   ///< path abandoned once X < -barrier
  double horizon = 1e5;     ///< path censored once t > horizon
  std::uint64_t seed = 1;

  void validate() const;
};

struct RuinEvent {
  bool ruined = false;
  bool censored = false;
  bool crept = false;
  double tau = 0.0;  ///< for creeping, resolved to the end of the sub-step
  double overshoot = 0.0;
  double undershoot = 0.0;
  double max_undershoot = 0.0;
};

using Rng = std::mt19937_64;

/// Independent generator for path `index`; paths are reproducible in isolation.
Rng path_rng(std::uint64_t seed, std::uint64_t index);

/// Poisson rate of jumps above epsilon: c eps^(-rho-1) e^(-alpha eps).
double big_jump_rate(const GtscParams& p, double epsilon);
/// Jump size conditioned on exceeding epsilon.
double sample_jump_above(const GtscParams& p, double epsilon, Rng& rng);
/// int_eps^inf y Pi_X(dy) = c eps^(-rho) e^(-alpha eps) + pi_H_tail(eps).
double large_jump_mean(const GtscParams& p, double epsilon);
/// Drift of the truncated process: -q - large_jump_mean.
double compensated_drift(const GtscParams& p, double epsilon);
/// int_0^eps y^2 Pi_X(dy), by singular quadrature.
double small_jump_variance(const GtscParams& p, double epsilon);
/// int_eps^inf y^2 Pi_X(dy), closed form.
double large_jump_second_moment(const GtscParams& p, double epsilon);

/// Largest epsilon on a halving sequence from 1 with small_jump_variance below
/// `fraction` of the total Gaussian variance (or 1e-3 when d_H = 0).
double default_epsilon(const GtscParams& p, double fraction = 0.01);
/// ln(1/revival) / exponent: revival from -M to the level is e^(-exponent M) relative.
double default_barrier(const GtscParams& p, const RegimeReport& report,
                       double revival = 1e-6);

RuinEvent simulate_first_passage(const GtscParams& p, double u, const SimScheme& scheme,
                                 Rng& rng);
/// X_t for a path started at 0 (no barrier).
double simulate_position(const GtscParams& p, double t, const SimScheme& scheme, Rng& rng);

struct EmpiricalCdf {
  std::vector<double> grid;
  std::vector<double> values;
  long n_ruined = 0;
  double ruin_fraction = 0.0;
  double ruin_half_width = 0.0;  ///< 95% normal-approximation half-width
};

struct ConditionalLaws {
  EmpiricalCdf overshoot;
  EmpiricalCdf undershoot;
  EmpiricalCdf max_undershoot;
  long n_paths = 0;
  long n_ruined = 0;
  long n_censored = 0;
  long n_crept = 0;
  double creep_fraction = 0.0;
  double creep_se = 0.0;
  double ruin_fraction = 0.0;
  double ruin_se = 0.0;
  double ruin_half_width = 0.0;
  /// Per-path events in path order; filled only when requested.
  std::vector<RuinEvent> events;

  const EmpiricalCdf& law(Law which) const;
};

struct EstimateOptions {
  long max_paths = 100'000'000;
  int workers = 0;  ///< 0: OpenMP default
  bool keep_events = false;
};

/// Runs paths 0, 1, 2, ... until n_target_ruined ruined paths are collected or the
/// path budget is spent. Throws EstimationError if no path was ruined.
ConditionalLaws estimate_conditional_laws(const GtscParams& p, double u, long n_target_ruined,
                                          const SimScheme& scheme, std::span<const double> grid,
                                          const EstimateOptions& options = {});
/// Single-threaded reference; results are identical to the parallel version.
ConditionalLaws estimate_conditional_laws_serial(const GtscParams& p, double u,
                                                 long n_target_ruined, const SimScheme& scheme,
                                                 std::span<const double> grid,
                                                 const EstimateOptions& options = {});

struct MeanEstimate {
  double mean = 0.0;
  double se = 0.0;
  long n = 0;
};

MeanEstimate estimate_mean_position(const GtscParams& p, double t, long n_paths,
                                    const SimScheme& scheme, int workers = 0);
MeanEstimate estimate_mean_position_serial(const GtscParams& p, double t, long n_paths,
                                           const SimScheme& scheme);

/// CSV columns ruined,tau,overshoot,undershoot,max_undershoot,crept.
void write_events_csv(std::ostream& out, std::span<const RuinEvent> events);

/// 1.5 sqrt(1/n1 + 1/n2): two-sample Kolmogorov-Smirnov band at about the 2% level.
double two_sample_band(long n1, long n2);
/// 1.36 / sqrt(n): one-sample Kolmogorov-Smirnov band at the 5% level.
double one_sample_band(long n);

double sup_distance(std::span<const double> a, std::span<const double> b);

}  // namespace gtsc
