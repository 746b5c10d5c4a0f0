#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ordtest/pvalues.hpp"

namespace ordtest {

/// Mixture-model parameters: gamma = overall non-null fraction, b = ordering
/// quality (larger front-loads the non-nulls harder), mu = signal strength
/// of the normal-shift alternative, n = sequence length.
struct VctParams {
  double gamma = 0.0;
  double b = 0.0;
  double mu = 0.0;
  std::size_t n = 0;

  /// Field ranges only: gamma in (0,1), b > 0, mu > 0, n >= 1, all finite.
  void validate_ranges() const;

  /// Ranges plus feasibility: pi(0) = gamma * b/(1-e^{-b}) <= 1. Required
  /// before sampling. The limit formulas only need ranges, so they accept
  /// parameter points slightly past the feasible boundary.
  void validate() const;
};

/// Local non-null probability gamma * e^{-b t} * b/(1 - e^{-b}).
/// Throws ModelError when pi(0) > 1. expm1 keeps small b stable.
double pi_local(double t, double gamma, double b);

/// Prefix average (1/t) int_0^t pi = gamma (1-e^{-bt}) / (t (1-e^{-b})),
/// continuously extended at t = 0 by pi(0). No feasibility check: this is
/// the curve the limit formulas consume, defined for any b > 0.
double pi_cumulative(double t, double gamma, double b);

/// Largest b keeping pi(0) <= 1, i.e. the root of gamma*b/(1-e^{-b}) = 1.
/// Bisection to 1e-10. Throws std::invalid_argument unless 0 < gamma < 1.
double b_max(double gamma);

/// One-sided normal-shift alternative: cdf F1(x) = Phi(Phi^{-1}(x) + mu),
/// strictly concave for mu > 0. mu = 0 degenerates to the uniform and is
/// accepted for limit computations.
class AlternativeCdf {
 public:
  explicit AlternativeCdf(double mu);

  double mu() const noexcept { return mu_; }

  /// Exact 0/1 at the endpoints.
  double cdf(double x) const;

  /// Density exp(-mu z - mu^2/2) with z = Phi^{-1}(x). Endpoint limits:
  /// +inf at 0, 0 at 1 (mu > 0).
  double pdf(double x) const;

  /// Inverse of cdf: Phi(Phi^{-1}(u) - mu).
  double quantile(double u) const;

 private:
  double mu_;
};

double f1_cdf(double x, double mu);
double f1_pdf(double x, double mu);
double f1_quantile(double u, double mu);

/// A drawn sequence with its ground-truth mask: is_null[i] != 0 iff
/// hypothesis i+1 is null.
struct LabeledSample {
  PValueSequence pvals;
  std::vector<std::uint8_t> is_null;
  std::uint64_t seed = 0;

  std::size_t num_nonnull() const;
};

/// Draw n p-values: index i is non-null with probability pi(i/n); nulls are
/// uniform, non-nulls are F1 quantiles of a uniform. Each index consumes
/// exactly two uniforms (membership, then value), so coupled runs line up
/// draw for draw. Deterministic given the seed.
LabeledSample sample_vct(const VctParams& params, std::uint64_t seed);

}  // namespace ordtest
