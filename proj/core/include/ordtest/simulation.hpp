#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "ordtest/procedures.hpp"
#include "ordtest/vct_model.hpp"

namespace ordtest {

/// One synthetic run scored against the ground-truth mask. power is the
/// fraction of all non-nulls rejected, 0 by convention when the draw
/// contains none (the trial is kept either way).
struct TrialResult {
  double fdp = 0.0;
  double power = 0.0;
  double k_hat_frac = 0.0;
  std::uint64_t seed = 0;
};

TrialResult run_trial(const VctParams& params, const ProcedureSpec& spec,
                      std::uint64_t seed);

struct SummaryRow {
  VctParams params;
  ProcedureSpec spec;
  std::size_t n_reps = 0;
  std::uint64_t base_seed = 0;
  double mean_fdr = 0.0;
  double se_fdr = 0.0;  // sample sd / sqrt(n_reps); NaN when n_reps < 2
  double mean_power = 0.0;
  double power_p05 = 0.0;
  double power_p50 = 0.0;
  double power_p95 = 0.0;
  double mean_k_hat_frac = 0.0;
  /// Limit-formula reference when one applies (AS/SS, and AT with a concrete
  /// accumulation function); quiet NaN for BH / Storey-BH.
  double asym_power = std::numeric_limits<double>::quiet_NaN();
};

/// n_reps independent trials; trial i uses stream_seed(base_seed, i). Work
/// is spread over `threads` workers (0 = hardware concurrency) and reduced
/// in index order, so the result does not depend on scheduling.
SummaryRow monte_carlo(const VctParams& params, const ProcedureSpec& spec,
                       std::size_t n_reps, std::uint64_t base_seed,
                       unsigned threads = 0);

/// Full cross of the model sweeps with every procedure.
struct ExperimentConfig {
  std::vector<double> gammas;
  std::vector<double> bs;
  std::vector<double> mus;
  std::vector<std::size_t> ns;
  std::vector<ProcedureSpec> procedures;
  std::size_t n_reps = 0;
  std::uint64_t base_seed = 0;
  std::string output;

  void validate() const;
};

std::vector<SummaryRow> run_experiment(const ExperimentConfig& config,
                                       unsigned threads = 0);

// --- figure 1: one realized estimator path against its population limit ---

struct PathPoint {
  std::size_t k = 0;
  double t = 0.0;
  double fdp_hat = 0.0;
  double fdp_star = 0.0;
};

struct PathVsLimitTable {
  std::vector<PathPoint> points;
  double chi = 0.0;
  double t_star = 0.0;
  VctParams params;
  double q = 0.0, s = 0.0, lambda = 0.0;
  std::uint64_t seed = 0;
  bool b_clamped = false;
};

struct Fig1Config {
  std::size_t n = 3000;
  double q = 0.2;
  double s = 0.2;
  double lambda = 0.5;
  double gamma = 0.2;
  // The default b sits just past the feasible boundary b_max(gamma) ~ 4.965
  // and is clamped there, keeping pi(0) <= 1 for sampling while moving the
  // limit curves imperceptibly.
  double b = 5.0;
  double mu = 2.0;
  std::uint64_t seed = 20260801;
};

PathVsLimitTable fig1_experiment(const Fig1Config& cfg = {});

// --- figure 2: asymptotic power across ordering quality, four regimes ---

struct PowerCurveRow {
  std::string regime;
  double gamma = 0.0, mu = 0.0, b = 0.0;
  std::string method;
  double chi = 0.0, t_star = 0.0, power = 0.0;
};

struct Fig2Config {
  std::size_t b_points = 100;  // log-spaced on (0.01, b_max(gamma)]
  double q = 0.1;
  double lambda = 0.5;
};

/// Methods: AS(s=q), AS(s=0.1q), SS(s=q), AT(nu=0); regimes are the four
/// (gamma, mu) combinations of {0.01, 0.2} x {1, 2}. Pure limit formulas,
/// no sampling.
std::vector<PowerCurveRow> fig2_experiment(const Fig2Config& cfg = {});

// --- figure 3: finite-sample power distributions on the (lambda, s) grid ---

struct PowerDistRow {
  double lambda = 0.0;
  std::string s_mode;  // "q" or "oracle"
  double s = 0.0;
  std::size_t n = 0;
  SummaryRow summary;
};

struct Fig3Config {
  std::size_t reps = 500;
  std::vector<std::size_t> ns{100, 500, 1000, 10000};
  double q = 0.1;
  double gamma = 0.2;
  double b = 3.65;
  double mu = 2.0;
  std::uint64_t base_seed = 20260802;
};

/// lambda in {0.5, 0.95} x s in {q, oracle_s(lambda)} x cfg.ns.
std::vector<PowerDistRow> fig3_experiment(const Fig3Config& cfg = {},
                                          unsigned threads = 0);

/// Exact mean of X/(r+1-X) for X ~ Binomial(r, p).
double binomial_ratio_mean(int r, double p);

/// Exhaustively verify E[X/(r+1-X)] <= p/(1-p) for every r = 1..r_max and
/// p on the step grid in (0,1). r_max is capped at 20 (exact enumeration).
bool binomial_inequality_check(int r_max, double p_step = 0.05);

}  // namespace ordtest
