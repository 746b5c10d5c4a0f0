#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "test_oracles.hpp"

#include "ordtest/asymptotic.hpp"
#include "ordtest/errors.hpp"

using namespace ordtest;
using testoracle::TestRand;

namespace {

bool close(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

// 40-digit reference values (mpmath), frozen
constexpr double kChiExample = 0.49045302957005344183;  // s=0.2 lam=0.5 q=0.2 mu=2
constexpr double kTStarExample = 0.25145525247767880641;  // chi above, gamma=0.2 b=3.65
constexpr double kChiRef = 0.55615313859800428602;        // s=0.1 lam=0.5 q=0.1 mu=2
constexpr double kTStarRef = 0.17249192998246544332;      // gamma=0.2 b=3.65
constexpr double kPowerRef = 0.36634464808512388637;
constexpr double kChiRef95 = 0.54181481615589170299;      // lambda=0.95 variant
constexpr double kPowerRef95 = 0.39013631982231316649;
constexpr double kNuSeqStepHalf = 0.045500263896358414401;  // lam=0.5, mu=2
constexpr double kChiAtSeqStep = 0.94290230364429991858;    // q=0.1
constexpr double kPowerAtPin = 0.11276624666455934289;      // nu above, b=b_max(0.2)
constexpr double kFdpStarPin = 0.18172198443648879434;      // t=0.3 s=q=g=0.2 lam=0.5 mu=2 b=5
// scipy adaptive-quadrature references
constexpr double kNuForwardStopMu2 = 0.09740816493640564;
constexpr double kNuHingeExp2Mu2 = 0.017559091199337747;
// grid + golden-section optimum references
constexpr double kOracleS05 = 0.037751319048831155;
constexpr double kOraclePower05 = 0.48253445587659840;

const VctParams kFig3Model{0.2, 3.65, 2.0, 10000};

}  // namespace

TEST_SUITE_BEGIN("asymptotic");

TEST_CASE("chi_as worked example and collapse to the selective case") {
  const AlternativeCdf f1(2.0);
  CHECK(close(chi_as(0.2, 0.5, 0.2, f1), kChiExample, 1e-9));
  // lambda = s is the selective special case
  CHECK(chi_as(0.3, 0.3, 0.1, f1) ==
        (1.0 - 0.1) / (1.0 - (1.0 - f1.cdf(0.3)) / 0.7 +
                       0.1 * (f1.cdf(0.3) / 0.3 - 1.0)));
  CHECK_THROWS_AS(chi_as(0.6, 0.5, 0.1, f1), std::invalid_argument);
  CHECK_THROWS_AS(chi_as(0.1, 0.5, 0.0, f1), std::invalid_argument);
}

TEST_CASE("chi_as vanishes as s -> 0") {
  const AlternativeCdf f1(2.0);
  double prev = 1.0;
  for (double s : {1e-2, 1e-4, 1e-6, 1e-8}) {
    const double chi = chi_as(s, 0.5, 0.2, f1);
    CHECK(chi < prev);
    prev = chi;
  }
  CHECK(prev < 1e-3);
}

TEST_CASE("chi_as monotone: increasing in s, decreasing in lambda") {
  TestRand rng(101);
  for (int rep = 0; rep < 200; ++rep) {
    const AlternativeCdf f1(rng.uniform(0.3, 3.0));
    const double q = rng.uniform(0.02, 0.4);
    const double s = rng.uniform(0.01, 0.6);
    const double lambda = rng.uniform(s, 0.95);
    const double chi = chi_as(s, lambda, q, f1);
    const double s_up = rng.uniform(s, lambda);
    if (s_up > s) CHECK(chi_as(s_up, lambda, q, f1) > chi);
    const double lambda_up = rng.uniform(lambda, 0.99);
    if (lambda_up > lambda) CHECK(chi_as(s, lambda_up, q, f1) < chi);
  }
}

TEST_CASE("chi_at basics") {
  CHECK(chi_at(0.0, 0.1) == 0.9);
  CHECK(chi_at(0.0, 0.25) == 0.75);
  CHECK(close(chi_at(kNuSeqStepHalf, 0.1), kChiAtSeqStep, 1e-9));
  CHECK_THROWS_AS(chi_at(1.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(chi_at(1.5, 0.1), std::invalid_argument);
}

TEST_CASE("nu_of_h: closed forms and quadrature references") {
  const AlternativeCdf f1(2.0);

  // seqstep: nu = (1 - F1(1 - 1/c)) / (1 - (1 - 1/c)) in closed form
  const double nu_ss = nu_of_h(AccumulationFn::seq_step(2.0), f1);
  CHECK(close(nu_ss, (1.0 - f1.cdf(0.5)) / 0.5, 1e-6));
  CHECK(close(nu_ss, kNuSeqStepHalf, 1e-6));

  const double nu_fs = nu_of_h(AccumulationFn::forward_stop(), f1);
  CHECK(close(nu_fs, kNuForwardStopMu2, 1e-5));

  const double nu_he = nu_of_h(AccumulationFn::hinge_exp(2.0), f1);
  CHECK(close(nu_he, kNuHingeExp2Mu2, 1e-5));

  // h == 1 integrates any density to 1
  const double nu_flat =
      nu_of_h(AccumulationFn::custom({0.0, 1.0}, {1.0, 1.0}), f1);
  CHECK(close(nu_flat, 1.0, 1e-6));

  // uniform alternative: nu = int h = 1
  const AlternativeCdf uniform(0.0);
  CHECK(close(nu_of_h(AccumulationFn::forward_stop(), uniform), 1.0, 1e-6));

  // floor: nu >= inf f1 = f1(1)
  CHECK(nu_fs >= f1.pdf(1.0));
}

TEST_CASE("t_star cases") {
  // chi <= Pi(1) = gamma: everything is scanned
  CHECK(t_star(0.15, 0.2, 3.65) == 1.0);
  CHECK(t_star(0.2, 0.2, 3.65) == 1.0);
  // chi above Pi(0+): nothing is
  CHECK(t_star(0.76, 0.2, 3.65) == 0.0);
  CHECK(t_star(2.0, 0.2, 3.65) == 0.0);
  // interior crossing
  const double t = t_star(kChiExample, 0.2, 3.65);
  CHECK(close(t, kTStarExample, 1e-8));
  CHECK(close(pi_cumulative(t, 0.2, 3.65), kChiExample, 1e-9));
  CHECK_THROWS_AS(t_star(0.0, 0.2, 3.65), std::invalid_argument);
}

TEST_CASE("power_as reference chain") {
  const AsymptoticResult r = power_as(0.1, 0.5, 0.1, kFig3Model);
  CHECK(close(r.chi, kChiRef, 1e-9));
  CHECK(close(r.t_star, kTStarRef, 1e-8));
  CHECK(close(r.power, kPowerRef, 1e-8));
  CHECK(r.method.kind == AsymptoticMethod::Kind::AdaptiveSeqStep);
  CHECK(r.q == 0.1);

  const AsymptoticResult r95 = power_as(0.1, 0.95, 0.1, kFig3Model);
  CHECK(close(r95.chi, kChiRef95, 1e-9));
  CHECK(close(r95.power, kPowerRef95, 1e-8));
}

TEST_CASE("power_as edge regimes") {
  // chi above pi(0): powerless
  const AsymptoticResult dead = power_as(0.1, 0.5, 0.1, VctParams{0.01, 1.0, 1.0, 1});
  CHECK(dead.t_star == 0.0);
  CHECK(dead.power == 0.0);

  // chi <= gamma: the whole sequence is scanned, power = F1(s)
  const VctParams easy{0.6, 1.0, 2.0, 1};
  const AsymptoticResult full = power_as(0.02, 0.5, 0.3, easy);
  CHECK(full.t_star == 1.0);
  CHECK(close(full.power, AlternativeCdf(2.0).cdf(0.02), 1e-15));

  // power never exceeds F1(s)
  TestRand rng(113);
  for (int rep = 0; rep < 100; ++rep) {
    const double gamma = rng.uniform(0.05, 0.8);
    const VctParams params{gamma, rng.uniform(0.1, 0.95) * b_max(gamma),
                           rng.uniform(0.3, 3.0), 1};
    const double s = rng.uniform(0.01, 0.5);
    const double lambda = rng.uniform(s, 0.95);
    const double q = rng.uniform(0.02, 0.4);
    const AsymptoticResult r = power_as(s, lambda, q, params);
    CHECK(r.power <= AlternativeCdf(params.mu).cdf(s) + 1e-12);
    CHECK(r.power >= 0.0);
  }
}

TEST_CASE("power_ss equals power_as at lambda = s") {
  const AsymptoticResult ss = power_ss(0.1, 0.1, kFig3Model);
  const AsymptoticResult as = power_as(0.1, 0.1, 0.1, kFig3Model);
  CHECK(ss.chi == as.chi);
  CHECK(ss.t_star == as.t_star);
  CHECK(ss.power == as.power);
  CHECK(ss.method.kind == AsymptoticMethod::Kind::SelectiveSeqStep);
}

TEST_CASE("power_at cases and regression pin") {
  // chi_at(0, 0.1) = 0.9 > pi(0) = 0.254 at b=0.5: powerless
  const AsymptoticResult dead = power_at(0.0, 0.1, VctParams{0.2, 0.5, 2.0, 1});
  CHECK(dead.power == 0.0);

  // Pi(t) >= 1-q everywhere: full power
  const AsymptoticResult full = power_at(0.0, 0.1, VctParams{0.95, 0.05, 2.0, 1});
  CHECK(full.t_star == 1.0);
  CHECK(close(full.power, 1.0, 1e-14));

  const AsymptoticResult pinned =
      power_at(kNuSeqStepHalf, 0.1, VctParams{0.2, b_max(0.2), 2.0, 1});
  CHECK(close(pinned.power, kPowerAtPin, 1e-6));
  CHECK(pinned.method.kind == AsymptoticMethod::Kind::AccumulationTest);
}

TEST_CASE("fdp_star_as: defining identity and limits") {
  // at Pi(t) = chi the limit curve sits exactly at q
  TestRand rng(127);
  for (int rep = 0; rep < 200; ++rep) {
    const double gamma = rng.uniform(0.05, 0.8);
    const double b = rng.uniform(0.1, 0.95) * b_max(gamma);
    const double mu = rng.uniform(0.3, 3.0);
    const double q = rng.uniform(0.02, 0.4);
    const double s = rng.uniform(0.01, 0.6);
    const double lambda = rng.uniform(s, 0.95);
    const VctParams params{gamma, b, mu, 1};
    const double chi = chi_as(s, lambda, q, AlternativeCdf(mu));
    const double t = t_star(chi, gamma, b);
    if (t > 0.0 && t < 1.0) {
      CHECK(close(fdp_star_as(t, s, lambda, params), q, 1e-9));
    }
  }

  // all-null limit: Pi ~ 0 pushes the curve to 1
  const VctParams sparse{1e-12, 1.0, 2.0, 1};
  CHECK(close(fdp_star_as(1.0, 0.2, 0.5, sparse), 1.0, 1e-9));

  // pinned point on the fig1-style limit curve (b past the sampling
  // boundary is fine here; only Pi enters)
  CHECK(close(fdp_star_as(0.3, 0.2, 0.5, VctParams{0.2, 5.0, 2.0, 1}),
              kFdpStarPin, 1e-9));

  CHECK_THROWS_AS(fdp_star_as(0.0, 0.2, 0.5, kFig3Model), std::invalid_argument);
}

TEST_CASE("rule_of_thumb boundary cases") {
  // mu chosen so F1(0.1) = 0.5 exactly
  const AlternativeCdf f1(1.2815515655446004);
  REQUIRE(close(f1.cdf(0.1), 0.5, 1e-10));
  CHECK(rule_of_thumb(0.1, f1, 0.65));
  CHECK_FALSE(rule_of_thumb(0.1, f1, 0.60));
  CHECK(rule_of_thumb(0.1, f1, 1.0));
  CHECK_THROWS_AS(rule_of_thumb(0.1, f1, 0.0), std::invalid_argument);
}

TEST_CASE("oracle_s finds the power-maximizing threshold") {
  const double s_star = oracle_s(0.5, 0.1, kFig3Model);
  CHECK(close(s_star, kOracleS05, 1e-4));
  const double best = power_as(s_star, 0.5, 0.1, kFig3Model).power;
  CHECK(close(best, kOraclePower05, 1e-6));

  // beats the default s = q
  CHECK(best >= power_as(0.1, 0.5, 0.1, kFig3Model).power);

  // no power anywhere: the smallest grid point comes back
  const VctParams dead{0.01, 0.01, 1.0, 1};
  const double s_dead = oracle_s(0.5, 0.1, dead);
  CHECK(close(s_dead, 0.5 * 1e-4, 1e-12));
  CHECK(power_as(s_dead, 0.5, 0.1, dead).power == 0.0);
}

TEST_CASE("oracle_s dominates the s = q heuristic across models") {
  TestRand rng(131);
  for (int rep = 0; rep < 10; ++rep) {
    const double gamma = rng.uniform(0.05, 0.6);
    const VctParams params{gamma, rng.uniform(0.3, 0.95) * b_max(gamma),
                           rng.uniform(0.5, 2.5), 1};
    const double q = rng.uniform(0.05, 0.3);
    const double lambda = rng.uniform(q, 0.9);
    const double s_star = oracle_s(lambda, q, params);
    CHECK(power_as(s_star, lambda, q, params).power + 1e-12 >=
          power_as(std::min(q, lambda), lambda, q, params).power);
  }
}

TEST_CASE("increasing lambda never hurts the limit power") {
  TestRand rng(137);
  for (int rep = 0; rep < 150; ++rep) {
    const double gamma = rng.uniform(0.05, 0.8);
    const VctParams params{gamma, rng.uniform(0.1, 0.95) * b_max(gamma),
                           rng.uniform(0.3, 3.0), 1};
    const double q = rng.uniform(0.02, 0.4);
    const double s = rng.uniform(0.01, 0.5);
    const double lam_lo = rng.uniform(s, 0.9);
    const double lam_hi = rng.uniform(lam_lo, 0.99);
    CHECK(power_as(s, lam_hi, q, params).power + 1e-12 >=
          power_as(s, lam_lo, q, params).power);
  }
}

TEST_CASE("chi_as stays below chi_at of the matching seqstep test") {
  TestRand rng(139);
  for (int rep = 0; rep < 200; ++rep) {
    const AlternativeCdf f1(rng.uniform(0.3, 3.0));
    const double q = rng.uniform(0.02, 0.4);
    const double s = rng.uniform(0.01, 0.6);
    const double lambda = rng.uniform(std::max(s, 0.2), 0.95);
    const double nu_ss = (1.0 - f1.cdf(lambda)) / (1.0 - lambda);
    const double as = chi_as(s, lambda, q, f1);
    const double at = chi_at(nu_ss, q);
    CHECK(as < at);
    // consequently the scan runs at least as deep
    const double gamma = rng.uniform(0.05, 0.8);
    const double b = rng.uniform(0.1, 0.95) * b_max(gamma);
    CHECK(t_star(as, gamma, b) >= t_star(at, gamma, b));
  }
}

TEST_CASE("chi_at floor from the density at 1") {
  const AlternativeCdf f1(2.0);
  const double floor = (1.0 - 0.1) / (1.0 - f1.pdf(1.0));
  for (const AccumulationFn& h :
       {AccumulationFn::forward_stop(), AccumulationFn::seq_step(2.0),
        AccumulationFn::hinge_exp(2.0)}) {
    CHECK(chi_at(nu_of_h(h, f1), 0.1) >= floor - 1e-9);
  }
}

TEST_CASE("tabulated Pi curve hook matches the closed form") {
  const double gamma = 0.2, b = 3.65;
  // 2001-knot piecewise-linear table of the closed-form curve
  std::vector<double> ts(2001), pis(2001);
  for (int i = 0; i <= 2000; ++i) {
    ts[i] = static_cast<double>(i) / 2000.0;
    pis[i] = pi_cumulative(ts[i], gamma, b);
  }
  const PiCurve tabulated = [ts, pis](double t) {
    const std::size_t j = std::min<std::size_t>(
        static_cast<std::size_t>(t * 2000.0), 1999);
    const double w = t * 2000.0 - static_cast<double>(j);
    return pis[j] + w * (pis[j + 1] - pis[j]);
  };

  CHECK(close(t_star_on(kChiRef, tabulated), kTStarRef, 1e-6));
  const AsymptoticResult hook =
      power_as_on(0.1, 0.5, 0.1, AlternativeCdf(2.0), tabulated);
  CHECK(close(hook.power, kPowerRef, 1e-6));
}

TEST_SUITE_END();
