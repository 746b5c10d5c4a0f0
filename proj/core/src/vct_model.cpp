#include "ordtest/vct_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "ordtest/errors.hpp"
#include "ordtest/normal.hpp"
#include "ordtest/rng.hpp"

namespace ordtest {

namespace {

// feasibility slack for pi(0) <= 1, absorbs rounding at b == b_max(gamma)
constexpr double kFeasTol = 1e-12;

// b / (1 - e^{-b}); expm1 keeps the b -> 0 limit (value -> 1) exact.
double normalizer(double b) { return b / (-std::expm1(-b)); }

}  // namespace

void VctParams::validate_ranges() const {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw std::invalid_argument("VctParams: gamma must lie in (0,1)");
  }
  if (!(b > 0.0) || !std::isfinite(b)) {
    throw std::invalid_argument("VctParams: b must be finite and > 0");
  }
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    throw std::invalid_argument("VctParams: mu must be finite and > 0");
  }
  if (n == 0) {
    throw std::invalid_argument("VctParams: n must be >= 1");
  }
}

void VctParams::validate() const {
  validate_ranges();
  const double pi0 = gamma * normalizer(b);
  if (pi0 > 1.0 + kFeasTol) {
    throw ModelError("VctParams: pi(0) = " + std::to_string(pi0) +
                     " exceeds 1; reduce b below b_max(gamma)");
  }
}

double pi_local(double t, double gamma, double b) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw std::invalid_argument("pi_local: t must lie in [0,1]");
  }
  const double pi0 = gamma * normalizer(b);
  if (pi0 > 1.0 + kFeasTol) {
    throw ModelError("pi_local: pi(0) = " + std::to_string(pi0) +
                     " exceeds 1; reduce b below b_max(gamma)");
  }
  return std::min(1.0, pi0 * std::exp(-b * t));
}

double pi_cumulative(double t, double gamma, double b) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw std::invalid_argument("pi_cumulative: t must lie in [0,1]");
  }
  if (t == 0.0) return gamma * normalizer(b);
  return gamma * (-std::expm1(-b * t)) / (t * (-std::expm1(-b)));
}

double b_max(double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw std::invalid_argument("b_max: gamma must lie in (0,1)");
  }
  // gamma * normalizer(b) is increasing in b, from gamma at 0+ to infinity
  double lo = 1e-12;
  double hi = 1.0;
  while (gamma * normalizer(hi) < 1.0) hi *= 2.0;
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    (gamma * normalizer(mid) < 1.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

AlternativeCdf::AlternativeCdf(double mu) : mu_(mu) {
  if (!(mu >= 0.0) || !std::isfinite(mu)) {
    throw std::invalid_argument("AlternativeCdf: mu must be finite and >= 0");
  }
}

double AlternativeCdf::cdf(double x) const {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return norm_cdf(norm_quantile(x) + mu_);
}

double AlternativeCdf::pdf(double x) const {
  if (x <= 0.0) {
    return mu_ == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  }
  if (x >= 1.0) {
    return mu_ == 0.0 ? 1.0 : 0.0;
  }
  return std::exp(-mu_ * norm_quantile(x) - 0.5 * mu_ * mu_);
}

double AlternativeCdf::quantile(double u) const {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  return norm_cdf(norm_quantile(u) - mu_);
}

double f1_cdf(double x, double mu) { return AlternativeCdf(mu).cdf(x); }
double f1_pdf(double x, double mu) { return AlternativeCdf(mu).pdf(x); }
double f1_quantile(double u, double mu) { return AlternativeCdf(mu).quantile(u); }

std::size_t LabeledSample::num_nonnull() const {
  return static_cast<std::size_t>(
      std::count(is_null.begin(), is_null.end(), std::uint8_t{0}));
}

LabeledSample sample_vct(const VctParams& params, std::uint64_t seed) {
  params.validate();
  Rng rng(seed);
  const AlternativeCdf f1(params.mu);
  const double pi0 = std::min(1.0, params.gamma * normalizer(params.b));

  LabeledSample sample;
  sample.seed = seed;
  sample.pvals.values.resize(params.n);
  sample.is_null.resize(params.n);
  const double inv_n = 1.0 / static_cast<double>(params.n);
  for (std::size_t i = 0; i < params.n; ++i) {
    const double t = static_cast<double>(i + 1) * inv_n;
    const double p_nonnull = pi0 * std::exp(-params.b * t);
    const bool nonnull = rng.uniform() < p_nonnull;
    const double u = rng.uniform();
    sample.is_null[i] = nonnull ? 0 : 1;
    sample.pvals.values[i] = nonnull ? f1.quantile(u) : u;
  }
  return sample;
}

}  // namespace ordtest
