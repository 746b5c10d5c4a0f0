#include "ordtest/asymptotic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "ordtest/errors.hpp"
#include "ordtest/quadrature.hpp"

namespace ordtest {

namespace {

void check_unit_open(double v, const char* name) {
  if (!(v > 0.0 && v < 1.0)) {
    throw std::invalid_argument(std::string(name) + " must lie in (0,1)");
  }
}

void check_s_lambda(double s, double lambda) {
  check_unit_open(s, "s");
  check_unit_open(lambda, "lambda");
  if (s > lambda) throw std::invalid_argument("requires s <= lambda");
}

// chord slope (1 - F1(lambda)) / (1 - lambda); < 1 for concave F1
double upper_chord(double lambda, const AlternativeCdf& f1) {
  return (1.0 - f1.cdf(lambda)) / (1.0 - lambda);
}

double bisect_crossing(double chi, const PiCurve& pi_cum) {
  // Pi strictly decreasing; crossing bracketed in (0, 1)
  double lo = 0.0, hi = 1.0;
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    (pi_cum(mid) >= chi ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

AsymptoticResult limit_result(double chi, double q, const VctParams& params,
                              AsymptoticMethod method, double f1_factor) {
  AsymptoticResult result;
  result.chi = chi;
  result.q = q;
  result.params = params;
  result.method = method;
  result.t_star = t_star(chi, params.gamma, params.b);
  result.power =
      result.t_star == 0.0
          ? 0.0
          : f1_factor * result.t_star *
                pi_cumulative(result.t_star, params.gamma, params.b) / params.gamma;
  return result;
}

}  // namespace

double chi_as(double s, double lambda, double q, const AlternativeCdf& f1) {
  check_s_lambda(s, lambda);
  check_unit_open(q, "q");
  const double denom =
      1.0 - upper_chord(lambda, f1) + q * (f1.cdf(s) / s - 1.0);
  if (!(denom > 0.0)) {
    // impossible when F1 is concave and dominates the uniform
    throw NumericError("chi_as: nonpositive denominator; F1 must dominate U[0,1]");
  }
  return (1.0 - q) / denom;
}

double chi_at(double nu, double q) {
  check_unit_open(q, "q");
  if (!(nu >= 0.0 && nu < 1.0)) {
    throw std::invalid_argument("chi_at: nu must lie in [0,1)");
  }
  return (1.0 - q) / (1.0 - nu);
}

double nu_of_h(const AccumulationFn& h, const AlternativeCdf& f1) {
  // Integrand h(p) f1(p) is finite on (0,1) but may blow up at either
  // endpoint; truncating at 1e-16 leaves O(1e-9 * sup h) of mass behind,
  // inside the 1e-8 budget for any reasonable h. Geometric splits toward
  // both endpoints keep the adaptive recursion shallow where the integrand
  // stretches across many decades.
  constexpr double kEdge = 1e-16;
  std::vector<double> splits;
  for (double e : {1e-16, 1e-12, 1e-8, 1e-4, 1e-2}) {
    splits.push_back(e);
    splits.push_back(1.0 - e);
  }
  for (double bp : h.breakpoints()) {
    if (bp > kEdge && bp < 1.0 - kEdge) splits.push_back(bp);
  }
  std::sort(splits.begin(), splits.end());

  const auto integrand = [&](double p) { return h(p) * f1.pdf(p); };
  const double segment_tol = 1e-8 / static_cast<double>(splits.size());
  double nu = 0.0;
  for (std::size_t i = 0; i + 1 < splits.size(); ++i) {
    nu += adaptive_simpson(integrand, splits[i], splits[i + 1], segment_tol);
  }
  // E_{F1} h is bounded below by inf f1 = f1(1)
  if (nu < f1.pdf(1.0) - 1e-8) {
    throw NumericError("nu_of_h: quadrature result below the density floor");
  }
  return nu;
}

double t_star(double chi, double gamma, double b) {
  if (!(chi > 0.0)) {
    throw std::invalid_argument("t_star: chi must be positive");
  }
  if (pi_cumulative(1.0, gamma, b) >= chi) return 1.0;
  if (pi_cumulative(0.0, gamma, b) < chi) return 0.0;
  return bisect_crossing(
      chi, [&](double t) { return pi_cumulative(t, gamma, b); });
}

double t_star_on(double chi, const PiCurve& pi_cum) {
  if (!(chi > 0.0)) {
    throw std::invalid_argument("t_star_on: chi must be positive");
  }
  if (pi_cum(1.0) >= chi) return 1.0;
  if (pi_cum(0.0) < chi) return 0.0;
  return bisect_crossing(chi, pi_cum);
}

AsymptoticResult power_as(double s, double lambda, double q,
                          const VctParams& params) {
  params.validate_ranges();
  const AlternativeCdf f1(params.mu);
  const double chi = chi_as(s, lambda, q, f1);
  return limit_result(chi, q, params,
                      {AsymptoticMethod::Kind::AdaptiveSeqStep, s, lambda, 0.0},
                      f1.cdf(s));
}

AsymptoticResult power_ss(double s, double q, const VctParams& params) {
  AsymptoticResult result = power_as(s, s, q, params);
  result.method = {AsymptoticMethod::Kind::SelectiveSeqStep, s, s, 0.0};
  return result;
}

AsymptoticResult power_at(double nu, double q, const VctParams& params) {
  params.validate_ranges();
  const double chi = chi_at(nu, q);
  return limit_result(chi, q, params,
                      {AsymptoticMethod::Kind::AccumulationTest, 0.0, 0.0, nu},
                      1.0);
}

AsymptoticResult power_as_on(double s, double lambda, double q,
                             const AlternativeCdf& f1, const PiCurve& pi_cum) {
  const double chi = chi_as(s, lambda, q, f1);
  AsymptoticResult result;
  result.chi = chi;
  result.q = q;
  result.method = {AsymptoticMethod::Kind::AdaptiveSeqStep, s, lambda, 0.0};
  result.t_star = t_star_on(chi, pi_cum);
  result.power = result.t_star == 0.0
                     ? 0.0
                     : f1.cdf(s) * result.t_star * pi_cum(result.t_star) / pi_cum(1.0);
  return result;
}

double fdp_star_as(double t, double s, double lambda, const VctParams& params) {
  check_s_lambda(s, lambda);
  if (!(t > 0.0 && t <= 1.0)) {
    throw std::invalid_argument("fdp_star_as: t must lie in (0,1]");
  }
  params.validate_ranges();
  const AlternativeCdf f1(params.mu);
  const double pi_t = pi_cumulative(t, params.gamma, params.b);
  const double num = 1.0 + pi_t * (upper_chord(lambda, f1) - 1.0);
  const double den = 1.0 + pi_t * (f1.cdf(s) / s - 1.0);
  return num / den;
}

bool rule_of_thumb(double q, const AlternativeCdf& f1, double pi_at_zero) {
  check_unit_open(q, "q");
  if (!(pi_at_zero > 0.0 && pi_at_zero <= 1.0)) {
    throw std::invalid_argument("rule_of_thumb: pi_at_zero must lie in (0,1]");
  }
  return f1.cdf(q) / (1.0 - q) > (1.0 - pi_at_zero) / pi_at_zero;
}

double oracle_s(double lambda, double q, const VctParams& params) {
  check_unit_open(lambda, "lambda");
  check_unit_open(q, "q");
  params.validate_ranges();

  constexpr int kGridPoints = 200;
  constexpr double kSpan = 1e-4;  // grid covers [lambda * 1e-4, lambda]
  const auto grid_point = [&](int i) {
    return lambda * std::pow(kSpan, 1.0 - static_cast<double>(i) /
                                              (kGridPoints - 1));
  };
  const auto power_of = [&](double s) {
    return power_as(s, lambda, q, params).power;
  };

  double best_s = grid_point(0);
  double best_power = power_of(best_s);
  for (int i = 1; i < kGridPoints; ++i) {
    const double s = grid_point(i);
    const double p = power_of(s);
    if (p > best_power) {
      best_power = p;
      best_s = s;
    }
  }
  if (best_power <= 0.0) return grid_point(0);

  // golden-section pass inside every bracket; the power curve is continuous
  // but need not be unimodal across the whole range
  constexpr double kGolden = 0.6180339887498949;
  for (int i = 0; i + 1 < kGridPoints; ++i) {
    double a = grid_point(i);
    double b = grid_point(i + 1);
    double x1 = b - kGolden * (b - a);
    double x2 = a + kGolden * (b - a);
    double f1v = power_of(x1);
    double f2v = power_of(x2);
    while (b - a > 1e-12 * lambda) {
      if (f1v < f2v) {
        a = x1;
        x1 = x2;
        f1v = f2v;
        x2 = a + kGolden * (b - a);
        f2v = power_of(x2);
      } else {
        b = x2;
        x2 = x1;
        f2v = f1v;
        x1 = b - kGolden * (b - a);
        f1v = power_of(x1);
      }
    }
    const double s = 0.5 * (a + b);
    const double p = power_of(s);
    if (p > best_power) {
      best_power = p;
      best_s = s;
    }
  }
  return best_s;
}

}  // namespace ordtest
