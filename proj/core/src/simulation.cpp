#include "ordtest/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <thread>
#include <utility>

#include "ordtest/asymptotic.hpp"
#include "ordtest/rng.hpp"

namespace ordtest {

namespace {

// Independent work items fanned out over a small thread pool. Results must
// be written to per-index slots; the caller reduces them in index order.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(
      std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
  if (threads <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&]() {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
        body(i);
      }
    });
  }
  for (auto& th : pool) th.join();
}

// linear interpolation between order statistics (the common "type 7" rule)
double quantile_sorted(const std::vector<double>& sorted, double prob) {
  if (sorted.empty()) return 0.0;
  const double pos = prob * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

double asymptotic_reference(const VctParams& params, const ProcedureSpec& spec) {
  switch (spec.kind) {
    case ProcedureKind::AdaptiveSeqStep:
      return power_as(spec.s, spec.lambda, spec.q, params).power;
    case ProcedureKind::SelectiveSeqStep:
      return power_ss(spec.s, spec.q, params).power;
    case ProcedureKind::AccumulationTest: {
      const double nu = nu_of_h(*spec.accumulation, AlternativeCdf(params.mu));
      if (nu >= 1.0) return std::numeric_limits<double>::quiet_NaN();
      return power_at(nu, spec.q, params).power;
    }
    case ProcedureKind::BH:
    case ProcedureKind::StoreyBH:
      return std::numeric_limits<double>::quiet_NaN();
  }
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

TrialResult run_trial(const VctParams& params, const ProcedureSpec& spec,
                      std::uint64_t seed) {
  spec.validate();
  const LabeledSample sample = sample_vct(params, seed);
  const RejectionOutcome outcome = run_procedure(sample.pvals, spec);

  std::size_t false_rejections = 0;
  std::size_t true_rejections = 0;
  for (std::size_t idx : outcome.rejected) {
    if (sample.is_null[idx - 1]) {
      ++false_rejections;
    } else {
      ++true_rejections;
    }
  }
  const std::size_t nonnull_total = sample.num_nonnull();

  TrialResult trial;
  trial.seed = seed;
  trial.fdp = static_cast<double>(false_rejections) /
              static_cast<double>(std::max<std::size_t>(outcome.rejected.size(), 1));
  trial.power = nonnull_total == 0
                    ? 0.0
                    : static_cast<double>(true_rejections) /
                          static_cast<double>(nonnull_total);
  trial.k_hat_frac = params.n == 0 ? 0.0
                                   : static_cast<double>(outcome.k_hat) /
                                         static_cast<double>(params.n);
  return trial;
}

SummaryRow monte_carlo(const VctParams& params, const ProcedureSpec& spec,
                       std::size_t n_reps, std::uint64_t base_seed,
                       unsigned threads) {
  if (n_reps == 0) {
    throw std::invalid_argument("monte_carlo: n_reps must be >= 1");
  }
  spec.validate();
  params.validate();

  std::vector<TrialResult> trials(n_reps);
  parallel_for(n_reps, threads, [&](std::size_t i) {
    trials[i] = run_trial(params, spec, stream_seed(base_seed, i));
  });

  SummaryRow row;
  row.params = params;
  row.spec = spec;
  row.n_reps = n_reps;
  row.base_seed = base_seed;

  double fdp_sum = 0.0, power_sum = 0.0, k_frac_sum = 0.0;
  for (const TrialResult& t : trials) {
    fdp_sum += t.fdp;
    power_sum += t.power;
    k_frac_sum += t.k_hat_frac;
  }
  const double n = static_cast<double>(n_reps);
  row.mean_fdr = fdp_sum / n;
  row.mean_power = power_sum / n;
  row.mean_k_hat_frac = k_frac_sum / n;

  if (n_reps >= 2) {
    double ss = 0.0;
    for (const TrialResult& t : trials) {
      const double d = t.fdp - row.mean_fdr;
      ss += d * d;
    }
    row.se_fdr = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  } else {
    row.se_fdr = std::numeric_limits<double>::quiet_NaN();
  }

  std::vector<double> powers(n_reps);
  for (std::size_t i = 0; i < n_reps; ++i) powers[i] = trials[i].power;
  std::sort(powers.begin(), powers.end());
  row.power_p05 = quantile_sorted(powers, 0.05);
  row.power_p50 = quantile_sorted(powers, 0.50);
  row.power_p95 = quantile_sorted(powers, 0.95);

  row.asym_power = asymptotic_reference(params, spec);
  return row;
}

void ExperimentConfig::validate() const {
  if (gammas.empty() || bs.empty() || mus.empty() || ns.empty()) {
    throw std::invalid_argument("ExperimentConfig: every model sweep needs >= 1 value");
  }
  if (procedures.empty()) {
    throw std::invalid_argument("ExperimentConfig: need >= 1 procedure");
  }
  if (n_reps == 0) {
    throw std::invalid_argument("ExperimentConfig: n_reps must be >= 1");
  }
  for (const ProcedureSpec& spec : procedures) spec.validate();
}

std::vector<SummaryRow> run_experiment(const ExperimentConfig& config,
                                       unsigned threads) {
  config.validate();
  std::vector<SummaryRow> rows;
  for (double gamma : config.gammas) {
    for (double b : config.bs) {
      for (double mu : config.mus) {
        for (std::size_t n : config.ns) {
          const VctParams params{gamma, b, mu, n};
          for (const ProcedureSpec& spec : config.procedures) {
            rows.push_back(monte_carlo(params, spec, config.n_reps,
                                       config.base_seed, threads));
          }
        }
      }
    }
  }
  return rows;
}

PathVsLimitTable fig1_experiment(const Fig1Config& cfg) {
  PathVsLimitTable table;
  table.q = cfg.q;
  table.s = cfg.s;
  table.lambda = cfg.lambda;
  table.seed = cfg.seed;

  double b = cfg.b;
  const double feasible_b = b_max(cfg.gamma);
  if (b > feasible_b) {
    b = feasible_b;
    table.b_clamped = true;
  }
  table.params = VctParams{cfg.gamma, b, cfg.mu, cfg.n};
  table.params.validate();

  const AlternativeCdf f1(cfg.mu);
  table.chi = chi_as(cfg.s, cfg.lambda, cfg.q, f1);
  table.t_star = t_star(table.chi, cfg.gamma, b);

  const LabeledSample sample = sample_vct(table.params, cfg.seed);
  const RejectionOutcome outcome =
      adaptive_seqstep(sample.pvals, cfg.q, cfg.s, cfg.lambda);

  table.points.resize(cfg.n);
  for (std::size_t k = 1; k <= cfg.n; ++k) {
    PathPoint& pt = table.points[k - 1];
    pt.k = k;
    pt.t = static_cast<double>(k) / static_cast<double>(cfg.n);
    pt.fdp_hat = outcome.fdp_path[k - 1];
    pt.fdp_star = fdp_star_as(pt.t, cfg.s, cfg.lambda, table.params);
  }
  return table;
}

std::vector<PowerCurveRow> fig2_experiment(const Fig2Config& cfg) {
  if (cfg.b_points == 0) {
    throw std::invalid_argument("fig2_experiment: b_points must be >= 1");
  }
  struct Regime {
    const char* name;
    double gamma, mu;
  };
  const Regime regimes[] = {{"sparse/weak", 0.01, 1.0},
                            {"sparse/strong", 0.01, 2.0},
                            {"dense/weak", 0.2, 1.0},
                            {"dense/strong", 0.2, 2.0}};

  std::vector<PowerCurveRow> rows;
  rows.reserve(4 * cfg.b_points * 4);
  for (const Regime& regime : regimes) {
    const double top = b_max(regime.gamma);
    const double lo = 0.01;
    for (std::size_t i = 1; i <= cfg.b_points; ++i) {
      // log-spaced on (lo, b_max]: excludes lo, includes b_max
      const double b = lo * std::pow(top / lo, static_cast<double>(i) /
                                                   static_cast<double>(cfg.b_points));
      const VctParams params{regime.gamma, b, regime.mu, 1};

      const auto emit = [&](const std::string& method, const AsymptoticResult& r) {
        rows.push_back(PowerCurveRow{regime.name, regime.gamma, regime.mu, b,
                                     method, r.chi, r.t_star, r.power});
      };
      emit("as_s=q", power_as(cfg.q, cfg.lambda, cfg.q, params));
      emit("as_s=0.1q", power_as(0.1 * cfg.q, cfg.lambda, cfg.q, params));
      emit("ss_s=q", power_ss(cfg.q, cfg.q, params));
      emit("at_nu=0", power_at(0.0, cfg.q, params));
    }
  }
  return rows;
}

std::vector<PowerDistRow> fig3_experiment(const Fig3Config& cfg,
                                          unsigned threads) {
  if (cfg.reps == 0 || cfg.ns.empty()) {
    throw std::invalid_argument("fig3_experiment: need reps >= 1 and >= 1 n");
  }
  std::vector<PowerDistRow> rows;
  std::uint64_t cell = 0;
  for (double lambda : {0.5, 0.95}) {
    const VctParams search_params{cfg.gamma, cfg.b, cfg.mu, 1};
    const double s_star = oracle_s(lambda, cfg.q, search_params);
    for (const auto& [mode, s] : {std::pair<const char*, double>{"q", cfg.q},
                                  {"oracle", s_star}}) {
      const ProcedureSpec spec = ProcedureSpec::adaptive_seqstep(cfg.q, s, lambda);
      for (std::size_t n : cfg.ns) {
        const VctParams params{cfg.gamma, cfg.b, cfg.mu, n};
        PowerDistRow row;
        row.lambda = lambda;
        row.s_mode = mode;
        row.s = s;
        row.n = n;
        // distinct seed stream per cell so rows are independent
        row.summary = monte_carlo(params, spec, cfg.reps,
                                  stream_seed(cfg.base_seed, cell++), threads);
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

double binomial_ratio_mean(int r, double p) {
  if (r < 1) throw std::invalid_argument("binomial_ratio_mean: r must be >= 1");
  if (!(p >= 0.0 && p < 1.0)) {
    throw std::invalid_argument("binomial_ratio_mean: p must lie in [0,1)");
  }
  // E[X/(r+1-X)] = sum_i (i/(r+1-i)) C(r,i) p^i (1-p)^{r-i}, exact for small r
  double expectation = 0.0;
  double coeff = 1.0;  // C(r,i)
  for (int i = 0; i <= r; ++i) {
    if (i > 0) coeff *= static_cast<double>(r - i + 1) / static_cast<double>(i);
    const double mass =
        coeff * std::pow(p, i) * std::pow(1.0 - p, r - i);
    expectation += mass * static_cast<double>(i) / static_cast<double>(r + 1 - i);
  }
  return expectation;
}

bool binomial_inequality_check(int r_max, double p_step) {
  if (r_max < 1 || r_max > 20) {
    throw std::invalid_argument(
        "binomial_inequality_check: r_max must lie in 1..20");
  }
  if (!(p_step > 0.0 && p_step < 1.0)) {
    throw std::invalid_argument("binomial_inequality_check: bad p_step");
  }
  for (int r = 1; r <= r_max; ++r) {
    for (double p = p_step; p < 1.0 - 0.5 * p_step; p += p_step) {
      if (binomial_ratio_mean(r, p) > p / (1.0 - p)) return false;
    }
  }
  return true;
}

}  // namespace ordtest
