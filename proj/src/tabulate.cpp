#include <cmath>
#include <exception>
#include <string>

#include "gtsc/errors.hpp"
#include "gtsc/limit_laws.hpp"

namespace gtsc {
namespace {

void check_grid(std::span<const double> grid) {
  if (grid.empty()) throw DomainError("tabulate: empty grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 0.0) || (i > 0 && !(grid[i] > grid[i - 1]))) {
      throw DomainError("tabulate: grid must be ascending and nonnegative");
    }
  }
}

template <class Eval>
CdfCurve fill(std::span<const double> grid, double mass_at_infinity, double atom, Eval&& eval,
              bool parallel) {
  check_grid(grid);
  CdfCurve curve;
  curve.grid.assign(grid.begin(), grid.end());
  curve.values.assign(grid.size(), 0.0);
  curve.mass_at_infinity = mass_at_infinity;
  curve.atom_at_zero = atom;

  // every law puts exactly the creep atom at 0
  const auto value = [&](double x) { return x == 0.0 ? atom : eval(x); };
  const long n = static_cast<long>(grid.size());
  if (!parallel) {
    for (long i = 0; i < n; ++i) curve.values[i] = value(grid[i]);
    return curve;
  }
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    try {
      curve.values[i] = value(grid[i]);
    } catch (...) {
#pragma omp critical(gtsc_tabulate_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return curve;
}

CdfCurve ladder_curve(const LadderModel& m, Law law, std::span<const double> grid,
                      bool parallel) {
  m.validate();
  return fill(grid, 1.0 - total_mass(m.regime, m.beta2, law), m.creep_probability(),
              [&](double x) { return cdf(m, law, x); }, parallel);
}

CdfCurve closed_curve(const GtscLimitLaws& laws, Law law, std::span<const double> grid,
                      bool parallel) {
  return fill(grid, laws.mass_at_infinity(law), laws.creep_probability(),
              [&](double x) { return laws.cdf(law, x); }, parallel);
}

}  // namespace

bool CdfCurve::is_valid(double tol) const {
  if (values.size() != grid.size() || values.empty()) return false;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] >= -tol && values[i] <= 1.0 + tol)) return false;
    if (i > 0 && values[i] < values[i - 1] - tol) return false;
  }
  if (values.back() + mass_at_infinity > 1.0 + tol) return false;
  return grid.front() != 0.0 || std::abs(values.front() - atom_at_zero) <= tol;
}

CdfCurve tabulate(const LadderModel& m, Law law, std::span<const double> grid) {
  return ladder_curve(m, law, grid, true);
}

CdfCurve tabulate(const GtscLimitLaws& laws, Law law, std::span<const double> grid) {
  return closed_curve(laws, law, grid, true);
}

CdfCurve tabulate_serial(const LadderModel& m, Law law, std::span<const double> grid) {
  return ladder_curve(m, law, grid, false);
}

CdfCurve tabulate_serial(const GtscLimitLaws& laws, Law law, std::span<const double> grid) {
  return closed_curve(laws, law, grid, false);
}

std::vector<double> linear_grid(double lo, double hi, int n) {
  if (n < 1 || !(lo >= 0.0) || (n > 1 && !(hi > lo))) {
    throw DomainError("linear_grid: requires n >= 1, 0 <= lo < hi");
  }
  std::vector<double> grid(static_cast<std::size_t>(n));
  if (n == 1) {
    grid[0] = lo;
    return grid;
  }
  const double step = (hi - lo) / (n - 1);
  for (int i = 0; i < n; ++i) grid[static_cast<std::size_t>(i)] = lo + step * i;
  grid.back() = hi;
  return grid;
}

}  // namespace gtsc
