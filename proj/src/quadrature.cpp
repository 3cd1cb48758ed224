#include "gtsc/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "gtsc/errors.hpp"

namespace gtsc {
namespace {

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21 constants).
constexpr std::array<double, 5> kGaussWeights = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};
constexpr std::array<double, 11> kKronrodNodes = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
constexpr std::array<double, 11> kKronrodWeights = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

constexpr double kMachineEps = 2.220446049250313e-16;

struct Segment {
  double a;
  double b;
  double value;
  double error;
};

double checked(const Integrand& f, double y) {
  const double v = f(y);
  if (!std::isfinite(v)) {
    char where[32];
    std::snprintf(where, sizeof where, "%.17g", y);
    throw DomainError(std::string("integrand is not finite at node ") + where +
                      " of the (possibly mapped) integration variable");
  }
  return v;
}

Segment gauss_kronrod_21(const Integrand& f, double a, double b) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double abs_half = std::abs(half);

  std::array<double, 10> left{};
  std::array<double, 10> right{};
  const double fc = checked(f, centre);
  double gauss = 0.0;
  double kronrod = kKronrodWeights[10] * fc;
  double abs_sum = std::abs(kronrod);

  for (int j = 0; j < 5; ++j) {
    const int idx = 2 * j + 1;
    const double dx = half * kKronrodNodes[idx];
    const double f1 = checked(f, centre - dx);
    const double f2 = checked(f, centre + dx);
    left[idx] = f1;
    right[idx] = f2;
    gauss += kGaussWeights[j] * (f1 + f2);
    kronrod += kKronrodWeights[idx] * (f1 + f2);
    abs_sum += kKronrodWeights[idx] * (std::abs(f1) + std::abs(f2));
  }
  for (int j = 0; j < 5; ++j) {
    const int idx = 2 * j;
    const double dx = half * kKronrodNodes[idx];
    const double f1 = checked(f, centre - dx);
    const double f2 = checked(f, centre + dx);
    left[idx] = f1;
    right[idx] = f2;
    kronrod += kKronrodWeights[idx] * (f1 + f2);
    abs_sum += kKronrodWeights[idx] * (std::abs(f1) + std::abs(f2));
  }

  const double mean = 0.5 * kronrod;
  double asc = kKronrodWeights[10] * std::abs(fc - mean);
  for (int j = 0; j < 10; ++j) {
    asc += kKronrodWeights[j] * (std::abs(left[j] - mean) + std::abs(right[j] - mean));
  }

  const double result = kronrod * half;
  abs_sum *= abs_half;
  asc *= abs_half;
  double error = std::abs((kronrod - gauss) * half);
  if (asc != 0.0 && error != 0.0) {
    error = asc * std::min(1.0, std::pow(200.0 * error / asc, 1.5));
  }
  error = std::max(50.0 * kMachineEps * abs_sum, error);
  return {a, b, result, error};
}

bool worse(const Segment& x, const Segment& y) { return x.error < y.error; }

QuadratureResult adaptive(const Integrand& f, double a, double b, double abs_tol,
                          double rel_tol, int max_refinements) {
  std::vector<Segment> heap;
  heap.reserve(static_cast<std::size_t>(max_refinements) + 2);
  heap.push_back(gauss_kronrod_21(f, a, b));
  int evaluations = 21;

  for (int refinement = 0;; ++refinement) {
    double total = 0.0;
    double error = 0.0;
    for (const auto& s : heap) {
      total += s.value;
      error += s.error;
    }
    if (error <= std::max(abs_tol, rel_tol * std::abs(total))) {
      return {total, error, evaluations};
    }
    std::pop_heap(heap.begin(), heap.end(), worse);
    const Segment worst = heap.back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (refinement >= max_refinements || !(mid > worst.a && mid < worst.b)) {
      throw AccuracyError("integrate: tolerance not reached after " +
                              std::to_string(refinement) + " refinements",
                          total, error);
    }
    heap.pop_back();
    heap.push_back(gauss_kronrod_21(f, worst.a, mid));
    std::push_heap(heap.begin(), heap.end(), worse);
    heap.push_back(gauss_kronrod_21(f, mid, worst.b));
    std::push_heap(heap.begin(), heap.end(), worse);
    evaluations += 42;
  }
}

QuadratureResult finite_singular(const Integrand& f, double a, double b, double order,
                                 double abs_tol, double rel_tol, int max_refinements) {
  if (order == 0.0) return adaptive(f, a, b, abs_tol, rel_tol, max_refinements);
  const double width = b - a;
  const double power = 1.0 / (1.0 - order);
  // y = a + width t^power; (y-a)^-order dy becomes a constant multiple of dt.
  const Integrand mapped = [&](double t) {
    const double tp = std::pow(t, power - 1.0);
    return f(a + width * tp * t) * width * power * tp;
  };
  return adaptive(mapped, 0.0, 1.0, abs_tol, rel_tol, max_refinements);
}

QuadratureResult tail(const Integrand& f, double y0, TailDecay decay, double abs_tol,
                      double rel_tol, int max_refinements) {
  if (decay.kind == TailDecay::Kind::Exponential) {
    const double rate = decay.parameter;
    const Integrand mapped = [&](double t) {
      const double y = y0 - std::log(t) / rate;
      const double v = f(y);
      return v == 0.0 ? 0.0 : v / (rate * t);
    };
    return adaptive(mapped, 0.0, 1.0, abs_tol, rel_tol, max_refinements);
  }
  const double k = 1.0 / (decay.parameter - 1.0);
  const Integrand mapped = [&](double t) {
    const double y = y0 * std::pow(t, -k);
    if (!std::isfinite(y)) return 0.0;
    const double v = f(y);
    if (v == 0.0 || !std::isfinite(v)) return v;
    const double out = v * k * y / t;
    if (std::isfinite(out)) return out;
    // the Jacobian k y0 t^(-k-1) overflowed before v could shrink it
    const double log_jacobian = std::log(k * y0) - (k + 1.0) * std::log(t);
    return std::copysign(std::exp(std::log(std::abs(v)) + log_jacobian), v);
  };
  return adaptive(mapped, 0.0, 1.0, abs_tol, rel_tol, max_refinements);
}

}  // namespace

void QuadratureSpec::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || max_refinements < 1) {
    throw DomainError("QuadratureSpec: requires abs_tol > 0, rel_tol > 0, max_refinements >= 1");
  }
}

QuadratureResult integrate_adaptive(const Integrand& f, double a, double b,
                                    const QuadratureSpec& spec) {
  spec.validate();
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw DomainError("integrate_adaptive: finite limits required");
  }
  if (a == b) return {};
  return adaptive(f, a, b, spec.abs_tol, spec.rel_tol, spec.max_refinements);
}

QuadratureResult integrate_singular_detailed(const Integrand& f, double a, double b,
                                             double singularity_order,
                                             const QuadratureSpec& spec, TailDecay decay) {
  spec.validate();
  if (!(singularity_order >= 0.0 && singularity_order < 1.0)) {
    throw DomainError("integrate_singular: singularity order must lie in [0, 1)");
  }
  if (!std::isfinite(a) || !(b > a)) {
    if (a == b) return {};
    throw DomainError("integrate_singular: requires finite a < b");
  }
  if (std::isfinite(b)) {
    return finite_singular(f, a, b, singularity_order, spec.abs_tol, spec.rel_tol,
                           spec.max_refinements);
  }
  if (decay.kind == TailDecay::Kind::Exponential ? !(decay.parameter > 0.0)
                                                  : !(decay.parameter > 1.0)) {
    throw DomainError("integrate_singular: tail rate must be > 0 (exponential) or > 1 (algebraic)");
  }
  const double split = std::max(a + 1.0, 1.0);
  const auto head = finite_singular(f, a, split, singularity_order, 0.5 * spec.abs_tol,
                                    spec.rel_tol, spec.max_refinements);
  const auto rest =
      tail(f, split, decay, 0.5 * spec.abs_tol, spec.rel_tol, spec.max_refinements);
  return {head.value + rest.value, head.error + rest.error,
          head.evaluations + rest.evaluations};
}

}  // namespace gtsc
