#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "gtsc/simulator.hpp"

namespace gtsc::detail {

// Per-model constants of the truncated process, computed once per estimation run.
struct Truncation {
  double epsilon;
  double rate;
  double drift;
  double sigma;
  double alpha;
  double pareto_index;  // rho + 1

  Truncation(const GtscParams& p, const SimScheme& scheme);
};

// Uniform, exponential and normal variates straight from the 64-bit engine; the
// <random> distributions route through generate_canonical, which dominated run time.
class Variates {
 public:
  explicit Variates(Rng& rng) : rng_(rng) {}
  double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }  // [0, 1)
  double exponential() { return -std::log1p(-uniform()); }
  double normal();

 private:
  Rng& rng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// min(Pareto(eps, index), eps + Exp(alpha)) drawn as the Pareto value kept with
// probability e^(-alpha (P - eps)), otherwise the exponential truncated below P.
double draw_jump(Variates& draw, double epsilon, double index, double alpha);

RuinEvent run_path(const Truncation& k, double u, const SimScheme& scheme, Rng& rng);
double run_position(const Truncation& k, double t, Rng& rng);

void check_inputs(const GtscParams& p, double u, long n_target_ruined, const SimScheme& scheme,
                  std::span<const double> grid, long max_paths);

// Consumes path events in path order.
class EventTally {
 public:
  explicit EventTally(bool keep_events) : keep_events_(keep_events) {}
  void add(const RuinEvent& ev);
  long ruined() const { return n_ruined_; }
  ConditionalLaws finish(std::span<const double> grid);

 private:
  bool keep_events_;
  long n_paths_ = 0;
  long n_ruined_ = 0;
  long n_censored_ = 0;
  long n_crept_ = 0;
  std::vector<double> over_;
  std::vector<double> under_;
  std::vector<double> max_under_;
  std::vector<RuinEvent> events_;
};

MeanEstimate summarize_positions(std::span<const double> positions);

}  // namespace gtsc::detail
