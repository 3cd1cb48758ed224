#include "gtsc/limit_laws.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "gtsc/errors.hpp"
#include "gtsc/special_functions.hpp"

namespace gtsc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_x(double x, const char* who) {
  if (!(x >= 0.0) || std::isnan(x)) {
    throw DomainError(std::string(who) + ": requires x >= 0");
  }
}

void require_ce(const RegimeReport& r, const char* who) {
  if (r.regime != Regime::ConvolutionEquivalent) {
    throw StateError(std::string(who) + ": model is " + std::string(to_string(r.regime)) +
                     ", not convolution equivalent");
  }
}

void require_regime(const RegimeReport& r, const char* who) {
  if (r.regime == Regime::Boundary) {
    throw StateError(std::string(who) + ": undefined on the regime boundary");
  }
}

// Integrals of y^(-rho-1) against e^(-a y) (or e^(-a y) - 1) for rho in (0, 1), a >= 0.
struct PowerExp {
  double rho;

  // L(a, x) = int_0^x y^(-rho-1) (e^(-a y) - 1) dy
  double lower(double a, double x) const {
    if (a == 0.0 || x == 0.0) return 0.0;
    const double z = a * x;
    if (z <= 2.0) {
      double term = 1.0;  // (-z)^k / k!
      double sum = 0.0;
      for (int k = 1; k < 200; ++k) {
        term *= -z / k;
        const double add = term / (k - rho);
        sum += add;
        if (std::abs(add) <= 1e-17 * std::abs(sum)) break;
      }
      return std::pow(x, -rho) * sum;
    }
    return std::pow(a, rho) * gamma(-rho) - remainder(a, x);
  }

  // R(a, x) = int_x^inf y^(-rho-1) (e^(-a y) - 1) dy
  double remainder(double a, double x) const {
    if (a == 0.0) return 0.0;
    if (x == 0.0) return std::pow(a, rho) * gamma(-rho);
    if (a * x <= 2.0) return std::pow(a, rho) * gamma(-rho) - lower(a, x);
    return upper(a, x) - std::pow(x, -rho) / rho;
  }

  // T(a, x) = int_x^inf y^(-rho-1) e^(-a y) dy, x > 0
  double upper(double a, double x) const {
    if (a == 0.0) return std::pow(x, -rho) / rho;
    return std::pow(a, rho) * upper_incomplete_gamma(-rho, a * x);
  }

  // T(a, x) e^(a x) x^(rho+1)
  double upper_scaled(double a, double x) const {
    if (a == 0.0) return x / rho;
    return upper_incomplete_gamma_scaled(-rho, a * x) / a;
  }
};

}  // namespace

std::string_view to_string(Law law) {
  switch (law) {
    case Law::Overshoot:
      return "overshoot";
    case Law::Undershoot:
      return "undershoot";
    case Law::MaxUndershoot:
      return "max_undershoot";
  }
  return "unknown";
}

double total_mass(Regime regime, double beta2, Law law) {
  if (regime == Regime::ConvolutionEquivalent && law != Law::Overshoot) return 1.0 - beta2;
  return 1.0;
}

// ---- generic evaluators ----------------------------------------------------------

namespace {

// e^(theta y) v without overflow where v underflows first
double tilt(double theta, double y, double v) {
  return v > 0.0 ? std::exp(theta * y + std::log(v)) : 0.0;
}

double tilted_tail(const LadderModel& m, double y, double shift = 0.0) {
  if (m.log_pi_H_tail) return std::exp(m.exponent * y + m.log_pi_H_tail(y + shift));
  return tilt(m.exponent, y, m.pi_H_tail(y + shift));
}

}  // namespace

void LadderModel::validate() const {
  if (!(q > 0.0) || !(d_H >= 0.0) || !(exponent > 0.0)) {
    throw DomainError("LadderModel: requires q > 0, d_H >= 0, exponent > 0");
  }
  if (!pi_H_tail || !g_kernel) throw DomainError("LadderModel: missing pi_H_tail or g_kernel");
  if (regime == Regime::Boundary) throw StateError("LadderModel: regime must not be Boundary");
  if (regime == Regime::Cramer ? beta2 != 0.0 : !(beta2 > 0.0 && beta2 < 1.0)) {
    throw DomainError("LadderModel: beta2 must be 0 (Cramer) or in (0, 1)");
  }
  quadrature.validate();
}

double overshoot_cdf(const LadderModel& m, double x) {
  require_x(x, "overshoot_cdf");
  const double th = m.exponent;
  const auto integrand = [&](double y) { return tilted_tail(m, y, x); };
  const double integral = integrate_singular(integrand, 0.0, kInfinity, m.singularity_order,
                                             m.quadrature, m.tail_decay);
  return 1.0 - m.beta2 * std::exp(-th * x) - th / m.q * integral;
}

double undershoot_cdf(const LadderModel& m, double x) {
  require_x(x, "undershoot_cdf");
  const double th = m.exponent;
  const double atom = m.creep_probability();
  if (x == 0.0) return atom;
  const auto integrand = [&](double y) { return tilt(th, y, m.g_kernel(x, y)); };
  // g_x(y) ~ y^-rho at 0 like pi_H_tail
  return atom + th / m.q * integrate_singular(integrand, 0.0, x, m.singularity_order,
                                              m.quadrature);
}

double max_undershoot_cdf(const LadderModel& m, double x) {
  require_x(x, "max_undershoot_cdf");
  const double th = m.exponent;
  const double atom = m.creep_probability();
  if (x == 0.0) return atom;
  const auto integrand = [&](double y) { return tilted_tail(m, y); };
  return atom + th / m.q * integrate_singular(integrand, 0.0, x, m.singularity_order,
                                              m.quadrature);
}

double cdf(const LadderModel& m, Law law, double x) {
  switch (law) {
    case Law::Overshoot:
      return overshoot_cdf(m, x);
    case Law::Undershoot:
      return undershoot_cdf(m, x);
    case Law::MaxUndershoot:
      return max_undershoot_cdf(m, x);
  }
  throw DomainError("cdf: unknown law");
}

LadderModel gtsc_ladder(const GtscParams& p, const RegimeReport& report) {
  p.validate();
  require_regime(report, "gtsc_ladder");
  LadderModel m;
  m.q = p.q;
  m.d_H = p.d_H;
  m.regime = report.regime;
  m.exponent = report.exponent(p);
  m.beta2 = report.regime == Regime::ConvolutionEquivalent ? *report.beta2 : 0.0;
  m.pi_H_tail = [p](double x) { return pi_H_tail(p, x); };
  m.log_pi_H_tail = [p](double x) {
    const double z = p.alpha * x;
    return std::log(p.c) + p.rho * std::log(p.alpha) - z - (1.0 + p.rho) * std::log(z) +
           std::log(upper_incomplete_gamma_scaled(-p.rho, z));
  };
  m.g_kernel = [p](double x, double y) {
    if (y >= x) return 0.0;
    if (y == 0.0) {
      if (p.rho >= 0.0) return kInf;
      return integrate_singular([&](double z) { return pi_X_tail(p, z); }, 0.0, x, 0.0,
                                {1e-15, 1e-13, 200});
    }
    // z + y = e^s turns the integrand into c e^(-rho s - alpha e^s)
    const auto integrand = [&](double s) {
      return p.c * std::exp(-p.rho * s - p.alpha * std::exp(s));
    };
    return integrate_adaptive(integrand, std::log(y), std::log(x), {1e-15, 1e-13, 200}).value;
  };
  // log singularity at rho = 0 is handled by the same substitution
  m.singularity_order = p.rho > 0.0 ? p.rho : (p.rho == 0.0 ? 0.5 : 0.0);
  // e^(exponent y) pi_H_tail(y) ~ y^(-rho-1) e^(-gap y)
  m.tail_decay = report.regime == Regime::Cramer ? TailDecay::exponential(*report.gap)
                                                 : TailDecay::algebraic(p.rho + 1.0);
  return m;
}

// ---- closed forms --------------------------------------------------------------

GtscLimitLaws::GtscLimitLaws(const GtscParams& p, const RegimeReport& report)
    : params_(p), report_(report) {
  p.validate();
  if (!(p.rho > 0.0 && p.rho < 1.0)) {
    throw DomainError("GtscLimitLaws: closed forms require rho in (0, 1)");
  }
  require_regime(report, "GtscLimitLaws");
  exponent_ = report.exponent(p);
  gap_ = report.regime == Regime::Cramer ? *report.gap : 0.0;
  beta2_ = report.regime == Regime::ConvolutionEquivalent ? *report.beta2 : 0.0;
  kappa_ = p.c / p.q;
}

double GtscLimitLaws::creep_probability() const {
  return exponent_ * params_.d_H / params_.q;
}

double GtscLimitLaws::creep_probability_from_jumps() const {
  const double rho = params_.rho;
  const double ga = gamma(-rho);
  if (report_.regime == Regime::Cramer) {
    return 1.0 + kappa_ * ga * (std::pow(params_.alpha, rho) - std::pow(gap_, rho));
  }
  return 1.0 - beta2_ + kappa_ * std::pow(params_.alpha, rho) * ga;
}

double GtscLimitLaws::overshoot_cdf(double x) const {
  require_x(x, "overshoot_cdf");
  const PowerExp pe{params_.rho};
  const double th = exponent_;
  const double a = params_.alpha;
  double integral;
  if (x <= 1.0) {
    const double tail0 = x == 0.0 ? 0.0 : std::expm1(-th * x) * std::pow(x, -pe.rho) / pe.rho;
    integral = std::exp(-th * x) * pe.remainder(gap_, x) - pe.remainder(a, x) + tail0;
  } else {
    integral = std::exp(-th * x) * pe.upper(gap_, x) - pe.upper(a, x);
  }
  return 1.0 - beta2_ * std::exp(-a * x) - kappa_ * integral;
}

double GtscLimitLaws::undershoot_cdf(double x) const {
  require_x(x, "undershoot_cdf");
  const PowerExp pe{params_.rho};
  return creep_probability() + kappa_ * (pe.lower(gap_, x) - pe.lower(params_.alpha, x));
}

double GtscLimitLaws::max_undershoot_cdf(double x) const {
  require_x(x, "max_undershoot_cdf");
  const PowerExp pe{params_.rho};
  const double th = exponent_;
  const double a = params_.alpha;
  double integral;
  if (x <= 1.0) {
    const double tail0 = x == 0.0 ? 0.0 : std::expm1(th * x) * std::pow(x, -pe.rho) / pe.rho;
    integral = pe.remainder(gap_, x) - std::exp(th * x) * pe.remainder(a, x) - tail0;
  } else {
    // scaled tails keep e^(theta x) T(alpha, x) finite for large x
    integral = std::exp(-gap_ * x - (pe.rho + 1.0) * std::log(x)) *
               (pe.upper_scaled(gap_, x) - pe.upper_scaled(a, x));
  }
  return 1.0 - beta2_ - kappa_ * integral;
}

double GtscLimitLaws::cdf(Law law, double x) const {
  switch (law) {
    case Law::Overshoot:
      return overshoot_cdf(x);
    case Law::Undershoot:
      return undershoot_cdf(x);
    case Law::MaxUndershoot:
      return max_undershoot_cdf(x);
  }
  throw DomainError("cdf: unknown law");
}

double GtscLimitLaws::mass_at_infinity(Law law) const {
  return 1.0 - total_mass(report_.regime, beta2_, law);
}

double GtscLimitLaws::log_defect(Law law, double x) const {
  require_x(x, "log_defect");
  if (x <= 1.0) return std::log(total_mass(report_.regime, beta2_, law) - cdf(law, x));
  const PowerExp pe{params_.rho};
  const double a = params_.alpha;
  const double th = exponent_;
  const double lead = std::log(kappa_) - (pe.rho + 1.0) * std::log(x);
  const double sd = pe.upper_scaled(gap_, x);
  const double sa = pe.upper_scaled(a, x);
  switch (law) {
    case Law::Overshoot: {
      // beta2 e^(-alpha x) + kappa x^(-rho-1) e^(-alpha x) (Ts(gap) - Ts(alpha))
      const double jump = std::exp(lead) * (sd - sa);
      return -a * x + std::log(beta2_ + jump);
    }
    case Law::Undershoot:
      return lead - gap_ * x + std::log(sd - std::exp(-th * x) * sa);
    case Law::MaxUndershoot:
      return lead - gap_ * x + std::log(sd - sa);
  }
  throw DomainError("log_defect: unknown law");
}

// ---- tail asymptotics ----------------------------------------------------------

double log_tail_asymptotic(const GtscParams& p, const RegimeReport& report, Law law,
                           double x) {
  if (!(x > 0.0)) throw DomainError("tail asymptotic: requires x > 0");
  if (!(p.rho > 0.0 && p.rho < 1.0)) {
    throw DomainError("tail asymptotic: requires rho in (0, 1)");
  }
  require_regime(report, "tail asymptotic");
  const double log_kappa = std::log(p.c / p.q);
  const double lx = std::log(x);
  if (report.regime == Regime::Cramer) {
    const double gap = *report.gap;
    switch (law) {
      case Law::Overshoot:
        return log_kappa + std::log(1.0 / gap - 1.0 / p.alpha) - (p.rho + 1.0) * lx -
               p.alpha * x;
      case Law::Undershoot:
        return log_kappa - std::log(gap) - (p.rho + 1.0) * lx - gap * x;
      case Law::MaxUndershoot:
        return log_kappa + std::log(1.0 / gap - 1.0 / p.alpha) - (p.rho + 1.0) * lx - gap * x;
    }
  } else {
    if (law == Law::Overshoot) return std::log(*report.beta2) - p.alpha * x;
    return log_kappa - std::log(p.rho) - p.rho * lx;
  }
  throw DomainError("tail asymptotic: unknown law");
}

double overshoot_tail_asymptotic(const GtscParams& p, const RegimeReport& report, double x) {
  return std::exp(log_tail_asymptotic(p, report, Law::Overshoot, x));
}

double undershoot_tail_asymptotic(const GtscParams& p, const RegimeReport& report, double x) {
  return std::exp(log_tail_asymptotic(p, report, Law::Undershoot, x));
}

double max_undershoot_tail_asymptotic(const GtscParams& p, const RegimeReport& report,
                                      double x) {
  return std::exp(log_tail_asymptotic(p, report, Law::MaxUndershoot, x));
}

double analytic_horizon(const GtscParams& p, const RegimeReport& report, Law law,
                        double bound) {
  if (!(bound > 0.0 && bound < 1.0)) throw DomainError("analytic_horizon: bound in (0, 1)");
  const double target = std::log(bound);
  double x = 1.0;
  while (log_tail_asymptotic(p, report, law, x) >= target) {
    x *= 2.0;
    if (x > 1e300) throw AccuracyError("analytic_horizon: no horizon found", x, kInf);
  }
  return x;
}

// ---- ruin probability ----------------------------------------------------------

double ruin_probability_asymptotic(const GtscParams& p, const RegimeReport& report, double u) {
  if (!(u > 0.0)) throw DomainError("ruin_probability_asymptotic: requires u > 0");
  require_regime(report, "ruin_probability_asymptotic");
  if (report.regime == Regime::Cramer) {
    const double gap = *report.gap;
    const double nu0 = *report.nu0;
    const double lead = std::pow(gap, 1.0 - p.rho);
    // -c rho Gamma(-rho) tends to c as rho -> 0
    const double jump = p.rho == 0.0 ? p.c : -p.c * p.rho * gamma(-p.rho);
    return p.q * lead / (nu0 * (p.d_H * lead + jump)) * std::exp(-nu0 * u);
  }
  const double s = p.q - p.alpha * p.d_H + p.c * std::pow(p.alpha, p.rho) * gamma(-p.rho);
  return p.c * p.q / (p.alpha * s * s) *
         std::exp(-(p.rho + 1.0) * std::log(u) - p.alpha * u);
}

double ruin_probability_general_form(const GtscParams& p, const RegimeReport& report,
                                     double u) {
  if (!(u > 0.0)) throw DomainError("ruin_probability_general_form: requires u > 0");
  require_regime(report, "ruin_probability_general_form");
  if (report.regime == Regime::Cramer) {
    return p.q * std::exp(-*report.nu0 * u) / (*report.nu0 * *report.m_star);
  }
  return pi_X_tail(p, u) / (*report.beta1 * *report.beta2);
}

double ruin_probability_ladder_form(const GtscParams& p, const RegimeReport& report, double u) {
  require_ce(report, "ruin_probability_ladder_form");
  const double b2 = *report.beta2;
  return pi_H_tail(p, u) / (p.q * b2 * b2);
}

}  // namespace gtsc
