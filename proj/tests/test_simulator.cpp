#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "gtsc/errors.hpp"
#include "gtsc/simulator.hpp"
#include "oracles.hpp"

using namespace gtsc;

namespace {

GtscParams reference(double alpha, double d_h = 0.5) { return {1.0, d_h, 1.0, alpha, 0.5}; }

double density(const GtscParams& p, double y) {
  return p.c * (p.alpha * std::pow(y, -p.rho - 1.0) + (p.rho + 1.0) * std::pow(y, -p.rho - 2.0)) *
         std::exp(-p.alpha * y);
}

// y^2 times the density, finite-form at y -> 0
double second_moment_density(const GtscParams& p, double y) {
  return p.c * (p.alpha * std::pow(y, 1.0 - p.rho) + (p.rho + 1.0) * std::pow(y, -p.rho)) *
         std::exp(-p.alpha * y);
}

SimScheme quick_scheme(std::uint64_t seed) {
  SimScheme s;
  s.epsilon = 0.05;
  s.dt = 0.05;
  s.barrier = 40.0;
  s.horizon = 2000.0;
  s.seed = seed;
  return s;
}

bool same_events(const std::vector<RuinEvent>& a, const std::vector<RuinEvent>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const RuinEvent& x = a[i];
    const RuinEvent& y = b[i];
    if (x.ruined != y.ruined || x.censored != y.censored || x.crept != y.crept || x.tau != y.tau ||
        x.overshoot != y.overshoot || x.undershoot != y.undershoot ||
        x.max_undershoot != y.max_undershoot) {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("big jump rate") {
  const GtscParams p = reference(0.05);
  CHECK(big_jump_rate(p, 0.1) == doctest::Approx(std::pow(0.1, -1.5) * std::exp(-0.005)).epsilon(1e-14));
  CHECK(big_jump_rate(p, 0.1) == doctest::Approx(31.465).epsilon(1e-4));
  CHECK(big_jump_rate(p, 0.05) > big_jump_rate(p, 0.1));
  CHECK(big_jump_rate(p, 1e3) < 1e-20);
  CHECK_THROWS_AS(big_jump_rate(p, 0.0), DomainError);
}

TEST_CASE("jump sampler") {
  const GtscParams p = reference(0.05);
  const double eps = 0.1;
  Rng rng = path_rng(7, 0);
  const int n = 1'000'000;
  long above = 0;
  double sum = 0.0;
  double smallest = 1e300;
  for (int i = 0; i < n; ++i) {
    const double j = sample_jump_above(p, eps, rng);
    smallest = std::min(smallest, j);
    above += j > 2 * eps;
    sum += j;
  }
  CHECK(smallest >= eps);
  const double prob = std::pow(2.0, -1.5) * std::exp(-p.alpha * eps);
  const double se = std::sqrt(prob * (1 - prob) / n);
  CHECK(std::abs(static_cast<double>(above) / n - prob) < 3 * se);
  const double mean_ref =
      oracle::tail_integral([&](double y) { return y * density(p, y); }, eps) / big_jump_rate(p, eps);
  CHECK(sum / n == doctest::Approx(mean_ref).epsilon(0.01));
}

TEST_CASE("truncation moments") {
  const GtscParams p = reference(0.05);
  for (double eps : {0.01, 0.1, 1.0}) {
    CAPTURE(eps);
    const double mean = oracle::tail_integral([&](double y) { return y * density(p, y); }, eps);
    CHECK(large_jump_mean(p, eps) == doctest::Approx(mean).epsilon(1e-10));
    CHECK(compensated_drift(p, eps) + large_jump_mean(p, eps) == doctest::Approx(-p.q).epsilon(1e-14));
    const double small =
        oracle::finite_integral([&](double y) { return second_moment_density(p, y); }, 0.0, eps);
    CHECK(small_jump_variance(p, eps) == doctest::Approx(small).epsilon(1e-8));
    const double large = oracle::tail_integral([&](double y) { return second_moment_density(p, y); }, eps);
    CHECK(large_jump_second_moment(p, eps) == doctest::Approx(large).epsilon(1e-9));
  }
  CHECK(small_jump_variance(p, 0.05) < small_jump_variance(p, 0.1));
  CHECK(small_jump_variance(p, 0.1) + large_jump_second_moment(p, 0.1) ==
        doctest::Approx(small_jump_variance(p, 0.7) + large_jump_second_moment(p, 0.7)).epsilon(1e-8));
  CHECK(compensated_drift(p, 1e3) == doctest::Approx(-p.q).epsilon(1e-12));
}

TEST_CASE("scheme defaults") {
  const GtscParams p = reference(0.10);
  const double eps = default_epsilon(p);
  const double v = small_jump_variance(p, eps);
  const double v2 = small_jump_variance(p, 2 * eps);
  CHECK(v < 0.01 * (2.0 * p.d_H + v));
  CHECK(v2 >= 0.01 * (2.0 * p.d_H + v2));
  CHECK(default_epsilon(reference(0.10, 0.0)) == 1e-3);
  const RegimeReport rep = classify(p);
  CHECK(default_barrier(p, rep, 1e-6) == doctest::Approx(std::log(1e6) / *rep.nu0));
  SimScheme bad;
  bad.dt = 0.0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = SimScheme{};
  bad.epsilon = -1.0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("mean position drifts at -q") {
  const GtscParams p = reference(0.10);
  const MeanEstimate m = estimate_mean_position(p, 1.0, 100'000, quick_scheme(3));
  CHECK(std::abs(m.mean + p.q) < 3.0 * m.se);
  CHECK(m.n == 100'000);
  const MeanEstimate serial = estimate_mean_position_serial(p, 1.0, 2000, quick_scheme(3));
  const MeanEstimate parallel = estimate_mean_position(p, 1.0, 2000, quick_scheme(3), 3);
  CHECK(serial.mean == parallel.mean);
  CHECK(serial.se == parallel.se);
}

TEST_CASE("first passage events") {
  const GtscParams p = reference(0.10);
  for (std::uint64_t i = 0; i < 400; ++i) {
    Rng rng = path_rng(11, i);
    const RuinEvent ev = simulate_first_passage(p, 3.0, quick_scheme(11), rng);
    if (!ev.ruined) continue;
    CHECK(ev.max_undershoot <= ev.undershoot);
    CHECK(ev.undershoot >= 0.0);
    CHECK(ev.max_undershoot >= 0.0);
    CHECK(ev.tau > 0.0);
    if (ev.crept) {
      CHECK(ev.overshoot == 0.0);
      CHECK(ev.undershoot == 0.0);
    } else {
      CHECK(ev.overshoot > 0.0);
    }
  }
}

TEST_CASE("without a Gaussian part paths never creep") {
  const GtscParams p = reference(0.10, 0.0);
  const auto grid = linear_grid(0.0, 10.0, 11);
  const ConditionalLaws laws = estimate_conditional_laws(p, 2.0, 500, quick_scheme(5), grid);
  CHECK(laws.n_crept == 0);
  CHECK(laws.creep_fraction == 0.0);
  CHECK(laws.overshoot.values.front() == 0.0);

  // drift down, no jumps large enough within a short horizon
  SimScheme s = quick_scheme(5);
  s.horizon = 1e-3;
  s.epsilon = 1.0;
  Rng rng = path_rng(5, 0);
  const RuinEvent ev = simulate_first_passage(p, 1e3, s, rng);
  CHECK_FALSE(ev.ruined);
  CHECK(ev.censored);
}

TEST_CASE("a Gaussian part makes ruin immediate from a tiny reserve") {
  const GtscParams p = reference(0.10);
  const auto grid = linear_grid(0.0, 1.0, 3);
  EstimateOptions o;
  o.max_paths = 10'000;
  const ConditionalLaws laws = estimate_conditional_laws(p, 1e-6, 10'000, quick_scheme(9), grid, o);
  CHECK(laws.n_paths == 10'000);
  CHECK(laws.ruin_fraction >= 0.999);
}

TEST_CASE("parallel estimation reproduces the serial reference") {
  const GtscParams p = reference(0.05);
  const auto grid = linear_grid(0.0, 20.0, 21);
  EstimateOptions o;
  o.keep_events = true;
  const ConditionalLaws serial = estimate_conditional_laws_serial(p, 4.0, 300, quick_scheme(21), grid, o);
  for (int workers : {1, 2, 3}) {
    o.workers = workers;
    const ConditionalLaws par = estimate_conditional_laws(p, 4.0, 300, quick_scheme(21), grid, o);
    CAPTURE(workers);
    CHECK(same_events(serial.events, par.events));
    CHECK(serial.overshoot.values == par.overshoot.values);
    CHECK(serial.max_undershoot.values == par.max_undershoot.values);
    CHECK(serial.n_paths == par.n_paths);
    CHECK(serial.n_ruined == 300);
    CHECK(par.n_ruined == 300);
  }
  const ConditionalLaws other = estimate_conditional_laws(p, 4.0, 300, quick_scheme(22), grid, o);
  CHECK_FALSE(same_events(serial.events, other.events));
}

TEST_CASE("empirical curves are monotone and consistent") {
  const GtscParams p = reference(0.10);
  const auto grid = linear_grid(0.0, 20.0, 41);
  const ConditionalLaws laws = estimate_conditional_laws(p, 5.0, 1000, quick_scheme(4), grid);
  for (Law law : {Law::Overshoot, Law::Undershoot, Law::MaxUndershoot}) {
    const auto& v = laws.law(law).values;
    for (std::size_t i = 1; i < v.size(); ++i) CHECK(v[i] >= v[i - 1]);
    CHECK(v.back() <= 1.0);
  }
  CHECK(laws.n_ruined <= laws.n_paths);
  CHECK(laws.overshoot.values.front() == doctest::Approx(laws.creep_fraction));
  CHECK(laws.ruin_fraction == doctest::Approx(static_cast<double>(laws.n_ruined) / laws.n_paths));
  CHECK(laws.ruin_half_width > 0.0);
}

TEST_CASE("estimation errors") {
  const GtscParams p = reference(0.10);
  const auto grid = linear_grid(0.0, 1.0, 2);
  EstimateOptions o;
  o.max_paths = 5;
  CHECK_THROWS_AS(estimate_conditional_laws(p, 500.0, 10, quick_scheme(1), grid, o), EstimationError);
  CHECK_THROWS_AS(estimate_conditional_laws(p, -1.0, 10, quick_scheme(1), grid, o), DomainError);
  CHECK_THROWS_AS(estimate_conditional_laws(p, 1.0, 0, quick_scheme(1), grid, o), DomainError);
}

TEST_CASE("bands and distances") {
  CHECK(two_sample_band(100, 100) == doctest::Approx(1.5 * std::sqrt(0.02)));
  CHECK(one_sample_band(10'000) == doctest::Approx(0.0136));
  const std::vector<double> a{0.1, 0.5, 0.9};
  const std::vector<double> b{0.2, 0.45, 0.9};
  CHECK(sup_distance(a, b) == doctest::Approx(0.1));
  const std::vector<double> shorter{0.1};
  CHECK_THROWS_AS(sup_distance(a, shorter), DomainError);
}

TEST_CASE("event dump") {
  std::vector<RuinEvent> events(2);
  events[1].ruined = true;
  events[1].overshoot = 1.5;
  std::ostringstream out;
  write_events_csv(out, events);
  const std::string text = out.str();
  CHECK(text.rfind("ruined,tau,overshoot,undershoot,max_undershoot,crept\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 3);
}
