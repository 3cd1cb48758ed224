#include <omp.h>

#include <algorithm>
#include <exception>
#include <vector>

#include "gtsc/errors.hpp"
#include "gtsc/simulator.hpp"
#include "simulator_detail.hpp"

namespace gtsc {
namespace {

int resolve_workers(int workers) {
  if (workers < 0) throw DomainError("workers must be >= 0");
  return workers == 0 ? omp_get_max_threads() : workers;
}

// Runs body(i) for i in [begin, end) across the team and rethrows the first failure.
template <class Body>
void parallel_range(long begin, long end, int workers, Body&& body) {
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 64) num_threads(workers)
  for (long i = begin; i < end; ++i) {
    try {
      body(i);
    } catch (...) {
#pragma omp critical(gtsc_sim_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

ConditionalLaws estimate_conditional_laws(const GtscParams& p, double u, long n_target_ruined,
                                          const SimScheme& scheme, std::span<const double> grid,
                                          const EstimateOptions& options) {
  detail::check_inputs(p, u, n_target_ruined, scheme, grid, options.max_paths);
  const int workers = resolve_workers(options.workers);
  const detail::Truncation k(p, scheme);
  detail::EventTally tally(options.keep_events);

  // Batches are simulated in parallel and consumed in path order, so the result
  // (including where the target is reached) matches the serial reference.
  const long batch = 1024L * workers;
  std::vector<RuinEvent> events(static_cast<std::size_t>(batch));
  long next = 0;
  while (next < options.max_paths && tally.ruined() < n_target_ruined) {
    const long end = std::min(options.max_paths, next + batch);
    parallel_range(next, end, workers, [&](long i) {
      Rng rng = path_rng(scheme.seed, static_cast<std::uint64_t>(i));
      events[static_cast<std::size_t>(i - next)] = detail::run_path(k, u, scheme, rng);
    });
    for (long i = next; i < end && tally.ruined() < n_target_ruined; ++i) {
      tally.add(events[static_cast<std::size_t>(i - next)]);
    }
    next = end;
  }
  return tally.finish(grid);
}

MeanEstimate estimate_mean_position(const GtscParams& p, double t, long n_paths,
                                    const SimScheme& scheme, int workers) {
  p.validate();
  scheme.validate();
  if (!(t > 0.0)) throw DomainError("estimate_mean_position: t must be > 0");
  const int team = resolve_workers(workers);
  const detail::Truncation k(p, scheme);
  std::vector<double> xs(static_cast<std::size_t>(std::max(0L, n_paths)));
  parallel_range(0, n_paths, team, [&](long i) {
    Rng rng = path_rng(scheme.seed, static_cast<std::uint64_t>(i));
    xs[static_cast<std::size_t>(i)] = detail::run_position(k, t, rng);
  });
  return detail::summarize_positions(xs);
}

}  // namespace gtsc
