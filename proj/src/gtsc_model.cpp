#include "gtsc/gtsc_model.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "gtsc/errors.hpp"
#include "gtsc/special_functions.hpp"

namespace gtsc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool in_open_unit(double rho) { return rho > 0.0 && rho < 1.0; }

void require_theta(const GtscParams& p, double theta, bool allow_alpha) {
  const bool ok = allow_alpha ? theta <= p.alpha : theta < p.alpha;
  if (!ok || std::isnan(theta)) {
    throw DomainError("Laplace exponent requires theta < alpha (theta = " +
                      std::to_string(theta) + ", alpha = " + std::to_string(p.alpha) + ")");
  }
}

// -c Gamma(-rho) (alpha^rho - (alpha - theta)^rho), or c log(alpha / (alpha - theta))
// when rho = 0. Written through log1p/expm1 so small theta keeps full precision.
double jump_term(const GtscParams& p, double theta) {
  const double l = std::log1p(-theta / p.alpha);
  if (p.rho == 0.0) return -p.c * l;
  return p.c * gamma(-p.rho) * std::pow(p.alpha, p.rho) * std::expm1(p.rho * l);
}

// psi_X(alpha - gap) / (alpha - gap), as a function of the gap to alpha.
double root_function(const GtscParams& p, double gap) {
  const double theta = p.alpha - gap;
  if (p.rho == 0.0) return p.d_H * theta - p.q + p.c * std::log(p.alpha / gap);
  return p.d_H * theta - p.q +
         p.c * gamma(-p.rho) * (std::pow(gap, p.rho) - std::pow(p.alpha, p.rho));
}

double root_function_slope(const GtscParams& p, double gap) {
  if (p.rho == 0.0) return -p.d_H - p.c / gap;
  return -p.d_H + p.c * gamma(-p.rho) * p.rho * std::pow(gap, p.rho - 1.0);
}

// root_function is strictly decreasing in the gap, positive near 0 and equal to -q at alpha.
CramerRoot solve_gap(const GtscParams& p) {
  double hi = p.alpha;
  double lo = 0.5 * p.alpha;
  while (root_function(p, lo) <= 0.0) {
    hi = lo;
    lo *= 0.5;
    if (lo < std::numeric_limits<double>::min()) {
      throw StateError("cramer_root: no sign change on (0, alpha); model is not Cramer");
    }
  }
  for (int i = 0; i < 200 && (hi - lo) > 1e-15 * lo; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (root_function(p, mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double gap = 0.5 * (lo + hi);
  const double polished = gap - root_function(p, gap) / root_function_slope(p, gap);
  if (polished >= lo && polished <= hi) gap = polished;
  return {p.alpha - gap, gap};
}

}  // namespace

void GtscParams::validate() const {
  auto fail = [](const std::string& what) { throw DomainError("GtscParams: " + what); };
  if (!(std::isfinite(q) && q > 0.0)) fail("q must be > 0");
  if (!(std::isfinite(d_H) && d_H >= 0.0)) fail("d_H must be >= 0");
  if (!(std::isfinite(c) && c > 0.0)) fail("c must be > 0");
  if (!(std::isfinite(alpha) && alpha > 0.0)) fail("alpha must be > 0");
  if (!(rho > -1.0 && rho < 1.0)) fail("rho must lie in (-1, 1)");
}

double GtscParams::sigma() const { return std::sqrt(2.0 * d_H); }

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::Cramer:
      return "Cramer";
    case Regime::ConvolutionEquivalent:
      return "ConvolutionEquivalent";
    case Regime::Boundary:
      return "Boundary";
  }
  return "Unknown";
}

double RegimeReport::exponent(const GtscParams& p) const {
  switch (regime) {
    case Regime::Cramer:
      return *nu0;
    case Regime::ConvolutionEquivalent:
      return p.alpha;
    case Regime::Boundary:
      break;
  }
  throw StateError("no limit-law exponent on the regime boundary");
}

double psi_H(const GtscParams& p, double theta) {
  require_theta(p, theta, in_open_unit(p.rho));
  return -p.q + p.d_H * theta + jump_term(p, theta);
}

double psi_X(const GtscParams& p, double theta) {
  require_theta(p, theta, false);
  return -p.q * theta + p.d_H * theta * theta + theta * jump_term(p, theta);
}

double pi_X_density(const GtscParams& p, double y) {
  if (!(y > 0.0)) throw DomainError("pi_X_density: requires y > 0");
  return p.c * (p.alpha * std::pow(y, -p.rho - 1.0) + (p.rho + 1.0) * std::pow(y, -p.rho - 2.0)) *
         std::exp(-p.alpha * y);
}

double pi_X_tail(const GtscParams& p, double x) {
  if (!(x > 0.0)) throw DomainError("pi_X_tail: requires x > 0");
  return p.c * std::exp(-(p.rho + 1.0) * std::log(x) - p.alpha * x);
}

double pi_H_tail(const GtscParams& p, double x) {
  if (!(x > 0.0)) throw DomainError("pi_H_tail: requires x > 0");
  return p.c * std::pow(p.alpha, p.rho) * upper_incomplete_gamma(-p.rho, p.alpha * x);
}

double discriminant_f(const GtscParams& p) {
  if (!in_open_unit(p.rho)) {
    throw DomainError("discriminant_f: defined for rho in (0, 1)");
  }
  return p.d_H * p.alpha - p.q - p.c * std::pow(p.alpha, p.rho) * gamma(-p.rho);
}

RegimeReport classify(const GtscParams& p, double boundary_tol) {
  p.validate();
  RegimeReport report;
  if (!in_open_unit(p.rho)) {
    report.regime = Regime::Cramer;
    report.f_alpha = kInf;
  } else {
    report.f_alpha = discriminant_f(p);
    if (report.f_alpha > boundary_tol) {
      report.regime = Regime::Cramer;
    } else if (report.f_alpha < -boundary_tol) {
      report.regime = Regime::ConvolutionEquivalent;
    } else {
      report.regime = Regime::Boundary;
      return report;
    }
  }
  if (report.regime == Regime::Cramer) {
    const CramerRoot root = solve_gap(p);
    report.nu0 = root.nu0;
    report.gap = root.gap;
    report.m_star = p.d_H + p.c * std::tgamma(1.0 - p.rho) * std::pow(root.gap, p.rho - 1.0);
  } else {
    report.beta1 = -p.alpha * report.f_alpha;
    report.beta2 = -report.f_alpha / p.q;
  }
  return report;
}

CramerRoot cramer_root_detail(const GtscParams& p, double boundary_tol) {
  const RegimeReport report = classify(p, boundary_tol);
  if (report.regime != Regime::Cramer) {
    throw StateError("cramer_root: model is " + std::string(to_string(report.regime)) +
                     ", not Cramer");
  }
  return {*report.nu0, *report.gap};
}

double cramer_root(const GtscParams& p, double boundary_tol) {
  return cramer_root_detail(p, boundary_tol).nu0;
}

BetaConstants beta_constants(const GtscParams& p, double boundary_tol) {
  const RegimeReport report = classify(p, boundary_tol);
  if (report.regime != Regime::ConvolutionEquivalent) {
    throw StateError("beta_constants: model is " + std::string(to_string(report.regime)) +
                     ", not convolution equivalent");
  }
  return {*report.beta1, *report.beta2};
}

double m_star(const GtscParams& p, double boundary_tol) {
  const RegimeReport report = classify(p, boundary_tol);
  if (report.regime != Regime::Cramer) {
    throw StateError("m_star: model is " + std::string(to_string(report.regime)) +
                     ", not Cramer");
  }
  return *report.m_star;
}

double solve_alpha_for_discriminant(const GtscParams& p, double target, double lo, double hi) {
  if (!in_open_unit(p.rho) || !(lo > 0.0) || !(hi > lo)) {
    throw DomainError("solve_alpha_for_discriminant: requires rho in (0,1) and 0 < lo < hi");
  }
  auto f_at = [&](double a) {
    GtscParams q = p;
    q.alpha = a;
    return discriminant_f(q) - target;
  };
  if (f_at(lo) > 0.0 || f_at(hi) < 0.0) {
    throw DomainError("solve_alpha_for_discriminant: target not bracketed by (lo, hi)");
  }
  for (int i = 0; i < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (f_at(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::optional<double> locate_discriminant_root(const GtscParams& p,
                                               std::span<const double> alphas) {
  GtscParams at = p;
  double prev_alpha = 0.0;
  double prev_f = 0.0;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    at.alpha = alphas[i];
    const double f = discriminant_f(at);
    if (f == 0.0) return alphas[i];
    if (i > 0 && prev_f < 0.0 && f > 0.0) {
      return solve_alpha_for_discriminant(p, 0.0, prev_alpha, alphas[i]);
    }
    prev_alpha = alphas[i];
    prev_f = f;
  }
  return std::nullopt;
}

}  // namespace gtsc
