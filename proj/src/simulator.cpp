#include "gtsc/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "gtsc/errors.hpp"
#include "gtsc/quadrature.hpp"
#include "gtsc/special_functions.hpp"
#include "simulator_detail.hpp"

namespace gtsc {
namespace {

void require_epsilon(double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw DomainError("epsilon must be a finite positive number");
  }
}

}  // namespace

void SimScheme::validate() const {
  if (!(epsilon > 0.0 && dt > 0.0 && barrier > 0.0 && horizon > 0.0)) {
    throw DomainError("SimScheme: epsilon, dt, barrier and horizon must be > 0");
  }
}

Rng path_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

double big_jump_rate(const GtscParams& p, double epsilon) {
  require_epsilon(epsilon);
  return pi_X_tail(p, epsilon);
}

double sample_jump_above(const GtscParams& p, double epsilon, Rng& rng) {
  require_epsilon(epsilon);
  // P(J > x) = (x/eps)^(-rho-1) e^(-alpha (x - eps)), the law of the minimum of
  // independent Pareto and shifted exponential variables
  detail::Variates draw(rng);
  return detail::draw_jump(draw, epsilon, p.rho + 1.0, p.alpha);
}

double large_jump_mean(const GtscParams& p, double epsilon) {
  require_epsilon(epsilon);
  return epsilon * pi_X_tail(p, epsilon) + pi_H_tail(p, epsilon);
}

double compensated_drift(const GtscParams& p, double epsilon) {
  return -p.q - large_jump_mean(p, epsilon);
}

double small_jump_variance(const GtscParams& p, double epsilon) {
  require_epsilon(epsilon);
  const auto integrand = [&](double y) {
    return y == 0.0 ? 0.0 : y * y * pi_X_density(p, y);
  };
  return integrate_singular(integrand, 0.0, epsilon, std::max(p.rho, 0.0),
                            {1e-300, 1e-13, 200});
}

double large_jump_second_moment(const GtscParams& p, double epsilon) {
  require_epsilon(epsilon);
  // eps^2 Pi(eps) + 2 int_eps^inf y Pi(y) dy
  return epsilon * epsilon * pi_X_tail(p, epsilon) +
         2.0 * p.c * std::pow(p.alpha, p.rho - 1.0) *
             upper_incomplete_gamma(1.0 - p.rho, p.alpha * epsilon);
}

double default_epsilon(const GtscParams& p, double fraction) {
  p.validate();
  if (p.d_H == 0.0) return 1e-3;
  double eps = 1.0;
  for (int i = 0; i < 200; ++i, eps *= 0.5) {
    const double v = small_jump_variance(p, eps);
    if (v < fraction * (2.0 * p.d_H + v)) return eps;
  }
  throw AccuracyError("default_epsilon: no admissible epsilon", eps, eps);
}

double default_barrier(const GtscParams& p, const RegimeReport& report, double revival) {
  if (!(revival > 0.0 && revival < 1.0)) throw DomainError("default_barrier: revival in (0, 1)");
  const double theta = report.regime == Regime::Boundary ? p.alpha : report.exponent(p);
  return std::log(1.0 / revival) / theta;
}

namespace detail {

Truncation::Truncation(const GtscParams& p, const SimScheme& scheme)
    : epsilon(scheme.epsilon),
      rate(big_jump_rate(p, scheme.epsilon)),
      drift(compensated_drift(p, scheme.epsilon)),
      sigma(std::sqrt(2.0 * p.d_H +
                      (scheme.use_gaussian_correction ? small_jump_variance(p, scheme.epsilon)
                                                      : 0.0))),
      alpha(p.alpha),
      pareto_index(p.rho + 1.0) {}

double Variates::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // Marsaglia polar method
  double a;
  double b;
  double r;
  do {
    a = 2.0 * uniform() - 1.0;
    b = 2.0 * uniform() - 1.0;
    r = a * a + b * b;
  } while (r >= 1.0 || r == 0.0);
  const double scale = std::sqrt(-2.0 * std::log(r) / r);
  spare_ = b * scale;
  has_spare_ = true;
  return a * scale;
}

double draw_jump(Variates& draw, double epsilon, double index, double alpha) {
  const double pareto = epsilon * std::exp(draw.exponential() / index);
  const double a = alpha * (pareto - epsilon);
  const double v = draw.uniform();
  if (v <= 1.0 - a || v < std::exp(-a)) return pareto;
  return epsilon - std::log1p(draw.uniform() * std::expm1(-a)) / alpha;
}

RuinEvent run_path(const Truncation& k, double u, const SimScheme& scheme, Rng& rng) {
  Variates draw(rng);
  const double var = k.sigma * k.sigma;

  RuinEvent ev;
  double t = 0.0;
  double x = 0.0;
  double xmax = 0.0;
  for (;;) {
    double span = draw.exponential() / k.rate;
    const bool censor = t + span > scheme.horizon;
    if (censor) span = scheme.horizon - t;

    const long steps = std::max(1L, static_cast<long>(std::ceil(span / scheme.dt)));
    const double h = span / static_cast<double>(steps);
    const double sd = k.sigma * std::sqrt(h);
    for (long i = 0; i < steps; ++i) {
      const double x1 = x + k.drift * h + sd * draw.normal();
      double peak = std::max(x, x1);
      if (var > 0.0) {
        // Maximum of the Brownian bridge from x to x1 over a step of length h, drawn
        // as (x + x1 + sqrt(d^2 + 2 var h E)) / 2 with E = -log(1 - U). It is only
        // needed when it can exceed xmax (>= x); E <= 53 ln 2 < 37 for 53-bit U.
        const double u01 = draw.uniform();
        const double a = 2.0 * (xmax - x) * (xmax - x1) / (var * h);
        if (a < 37.0) {
          const double d = x1 - x;
          peak = 0.5 * (x + x1 + std::sqrt(d * d - 2.0 * var * h * std::log1p(-u01)));
        }
      }
      t += h;
      if (peak > u) {
        ev.ruined = true;
        ev.crept = true;
        ev.tau = t;
        return ev;
      }
      xmax = std::max(xmax, peak);
      x = x1;
      if (x < -scheme.barrier) return ev;
    }
    if (censor) {
      ev.censored = true;
      return ev;
    }

    const double jump = draw_jump(draw, k.epsilon, k.pareto_index, k.alpha);
    if (x + jump > u) {
      ev.ruined = true;
      ev.tau = t;
      ev.overshoot = x + jump - u;
      ev.undershoot = u - x;
      ev.max_undershoot = u - xmax;
      return ev;
    }
    x += jump;
    xmax = std::max(xmax, x);
  }
}

double run_position(const Truncation& k, double t_end, Rng& rng) {
  Variates draw(rng);
  double t = 0.0;
  double x = 0.0;
  for (;;) {
    double span = draw.exponential() / k.rate;
    const bool last = t + span >= t_end;
    if (last) span = t_end - t;
    // sub-stepping is unnecessary for the endpoint alone; one Gaussian increment
    x += k.drift * span + k.sigma * std::sqrt(span) * draw.normal();
    t += span;
    if (last) return x;
    x += draw_jump(draw, k.epsilon, k.pareto_index, k.alpha);
  }
}

void check_inputs(const GtscParams& p, double u, long n_target_ruined, const SimScheme& scheme,
                  std::span<const double> grid, long max_paths) {
  p.validate();
  scheme.validate();
  if (!(u > 0.0)) throw DomainError("estimate_conditional_laws: u must be > 0");
  if (n_target_ruined < 1) throw DomainError("estimate_conditional_laws: n_target_ruined >= 1");
  if (max_paths < 1) throw DomainError("estimate_conditional_laws: max_paths >= 1");
  if (grid.empty() || !std::is_sorted(grid.begin(), grid.end())) {
    throw DomainError("estimate_conditional_laws: grid must be non-empty and ascending");
  }
}

void EventTally::add(const RuinEvent& ev) {
  ++n_paths_;
  if (keep_events_) events_.push_back(ev);
  if (ev.censored) ++n_censored_;
  if (!ev.ruined) return;
  ++n_ruined_;
  if (ev.crept) ++n_crept_;
  over_.push_back(ev.overshoot);
  under_.push_back(ev.undershoot);
  max_under_.push_back(ev.max_undershoot);
}

ConditionalLaws EventTally::finish(std::span<const double> grid) {
  if (n_ruined_ == 0) {
    throw EstimationError("no ruined path among " + std::to_string(n_paths_) + " paths");
  }
  ConditionalLaws out;
  out.n_paths = n_paths_;
  out.n_ruined = n_ruined_;
  out.n_censored = n_censored_;
  out.n_crept = n_crept_;
  const double n = static_cast<double>(n_ruined_);
  const double np = static_cast<double>(n_paths_);
  out.creep_fraction = static_cast<double>(n_crept_) / n;
  out.creep_se = std::sqrt(out.creep_fraction * (1.0 - out.creep_fraction) / n);
  out.ruin_fraction = n / np;
  out.ruin_se = std::sqrt(out.ruin_fraction * (1.0 - out.ruin_fraction) / np);
  out.ruin_half_width = 1.96 * out.ruin_se;

  const auto ecdf = [&](std::vector<double>& sample, EmpiricalCdf& cdf) {
    std::sort(sample.begin(), sample.end());
    cdf.grid.assign(grid.begin(), grid.end());
    cdf.values.reserve(grid.size());
    for (double x : grid) {
      const auto count = std::upper_bound(sample.begin(), sample.end(), x) - sample.begin();
      cdf.values.push_back(static_cast<double>(count) / n);
    }
    cdf.n_ruined = out.n_ruined;
    cdf.ruin_fraction = out.ruin_fraction;
    cdf.ruin_half_width = out.ruin_half_width;
  };
  ecdf(over_, out.overshoot);
  ecdf(under_, out.undershoot);
  ecdf(max_under_, out.max_undershoot);
  out.events = std::move(events_);
  return out;
}

MeanEstimate summarize_positions(std::span<const double> positions) {
  MeanEstimate est;
  est.n = static_cast<long>(positions.size());
  if (est.n < 2) throw EstimationError("mean position: need at least two paths");
  double mean = 0.0;
  double m2 = 0.0;
  long k = 0;
  for (double x : positions) {
    ++k;
    const double d = x - mean;
    mean += d / static_cast<double>(k);
    m2 += d * (x - mean);
  }
  est.mean = mean;
  est.se = std::sqrt(m2 / static_cast<double>(est.n - 1) / static_cast<double>(est.n));
  return est;
}

}  // namespace detail

RuinEvent simulate_first_passage(const GtscParams& p, double u, const SimScheme& scheme,
                                 Rng& rng) {
  p.validate();
  scheme.validate();
  if (!(u > 0.0)) throw DomainError("simulate_first_passage: u must be > 0");
  return detail::run_path(detail::Truncation(p, scheme), u, scheme, rng);
}

double simulate_position(const GtscParams& p, double t, const SimScheme& scheme, Rng& rng) {
  p.validate();
  scheme.validate();
  if (!(t > 0.0)) throw DomainError("simulate_position: t must be > 0");
  return detail::run_position(detail::Truncation(p, scheme), t, rng);
}

const EmpiricalCdf& ConditionalLaws::law(Law which) const {
  switch (which) {
    case Law::Overshoot:
      return overshoot;
    case Law::Undershoot:
      return undershoot;
    case Law::MaxUndershoot:
      return max_undershoot;
  }
  throw DomainError("ConditionalLaws::law: unknown law");
}

ConditionalLaws estimate_conditional_laws_serial(const GtscParams& p, double u,
                                                 long n_target_ruined, const SimScheme& scheme,
                                                 std::span<const double> grid,
                                                 const EstimateOptions& options) {
  detail::check_inputs(p, u, n_target_ruined, scheme, grid, options.max_paths);
  const detail::Truncation k(p, scheme);
  detail::EventTally tally(options.keep_events);
  for (long i = 0; i < options.max_paths && tally.ruined() < n_target_ruined; ++i) {
    Rng rng = path_rng(scheme.seed, static_cast<std::uint64_t>(i));
    tally.add(detail::run_path(k, u, scheme, rng));
  }
  return tally.finish(grid);
}

MeanEstimate estimate_mean_position_serial(const GtscParams& p, double t, long n_paths,
                                           const SimScheme& scheme) {
  p.validate();
  scheme.validate();
  if (!(t > 0.0)) throw DomainError("estimate_mean_position: t must be > 0");
  const detail::Truncation k(p, scheme);
  std::vector<double> xs(static_cast<std::size_t>(std::max(0L, n_paths)));
  for (long i = 0; i < n_paths; ++i) {
    Rng rng = path_rng(scheme.seed, static_cast<std::uint64_t>(i));
    xs[static_cast<std::size_t>(i)] = detail::run_position(k, t, rng);
  }
  return detail::summarize_positions(xs);
}

void write_events_csv(std::ostream& out, std::span<const RuinEvent> events) {
  const auto old_precision = out.precision(17);
  out << "ruined,tau,overshoot,undershoot,max_undershoot,crept\n";
  for (const RuinEvent& ev : events) {
    out << (ev.ruined ? 1 : 0) << ',' << ev.tau << ',' << ev.overshoot << ',' << ev.undershoot
        << ',' << ev.max_undershoot << ',' << (ev.crept ? 1 : 0) << '\n';
  }
  out.precision(old_precision);
}

double two_sample_band(long n1, long n2) {
  if (n1 < 1 || n2 < 1) throw DomainError("two_sample_band: sample sizes must be >= 1");
  return 1.5 * std::sqrt(1.0 / static_cast<double>(n1) + 1.0 / static_cast<double>(n2));
}

double one_sample_band(long n) {
  if (n < 1) throw DomainError("one_sample_band: sample size must be >= 1");
  return 1.36 / std::sqrt(static_cast<double>(n));
}

double sup_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DomainError("sup_distance: length mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace gtsc
