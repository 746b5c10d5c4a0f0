#pragma once

#include <functional>

#include "ordtest/accumulation.hpp"
#include "ordtest/vct_model.hpp"

namespace ordtest {

struct AsymptoticMethod {
  enum class Kind { AdaptiveSeqStep, SelectiveSeqStep, AccumulationTest };
  Kind kind = Kind::AdaptiveSeqStep;
  double s = 0.0;
  double lambda = 0.0;
  double nu = 0.0;

  friend bool operator==(const AsymptoticMethod&, const AsymptoticMethod&) = default;
};

/// chi: critical prefix non-null fraction at which the limiting FDP estimate
/// equals q. t_star: limiting stopped fraction k_hat/n. power: limiting
/// fraction of all non-nulls rejected.
struct AsymptoticResult {
  double chi = 0.0;
  double t_star = 0.0;
  double power = 0.0;
  AsymptoticMethod method;
  VctParams params;
  double q = 0.0;
};

/// (1 - q) / (1 - (1-F1(lambda))/(1-lambda) + q (F1(s)/s - 1)).
/// Strictly increasing in s and strictly decreasing in lambda.
double chi_as(double s, double lambda, double q, const AlternativeCdf& f1);

/// (1 - q) / (1 - nu) for an accumulation test with E_{F1} h = nu.
/// Throws std::invalid_argument when nu >= 1 (degenerate test).
double chi_at(double nu, double q);

/// E_{p ~ F1} h(p) = int h(p) f1(p) dp, adaptive quadrature to 1e-8.
double nu_of_h(const AccumulationFn& h, const AlternativeCdf& f1);

/// Largest t with Pi(t) >= chi: 1 when Pi(1) >= chi, 0 when Pi(0+) < chi,
/// otherwise the unique crossing (bisection to 1e-10; Pi is strictly
/// decreasing).
double t_star(double chi, double gamma, double b);

/// Cumulative non-null curve supplied by the caller; must be strictly
/// decreasing on [0,1]. Extension hook for non-exponential orderings.
using PiCurve = std::function<double(double)>;

double t_star_on(double chi, const PiCurve& pi_cum);

/// Limiting power F1(s) * t* Pi(t*) / Pi(1); exactly 0 when t* = 0.
AsymptoticResult power_as(double s, double lambda, double q,
                          const VctParams& params);

/// The lambda = s special case.
AsymptoticResult power_ss(double s, double q, const VctParams& params);

/// Limiting power t* Pi(t*) / Pi(1) at chi = (1-q)/(1-nu); no F1(s) factor
/// because the whole prefix is rejected.
AsymptoticResult power_at(double nu, double q, const VctParams& params);

/// power_as against a caller-supplied Pi curve instead of the built-in
/// exponential family. params-independent; Pi(1) supplies the density.
AsymptoticResult power_as_on(double s, double lambda, double q,
                             const AlternativeCdf& f1, const PiCurve& pi_cum);

/// Population FDP limit at stopped fraction t:
///   (1 + Pi(t) ((1-F1(lambda))/(1-lambda) - 1)) / (1 + Pi(t) (F1(s)/s - 1)).
double fdp_star_as(double t, double s, double lambda, const VctParams& params);

/// F1(q)/(1-q) > (1 - pi_at_zero)/pi_at_zero: whether the default s = q
/// keeps nonzero power when lambda is taken close to 1.
bool rule_of_thumb(double q, const AlternativeCdf& f1, double pi_at_zero);

/// Power-maximizing threshold over s in (0, lambda]: 200-point log-spaced
/// grid with golden-section refinement inside every bracket. Returns the
/// smallest grid point when power is zero everywhere.
double oracle_s(double lambda, double q, const VctParams& params);

}  // namespace ordtest
