#include "ordtest/procedures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ordtest {

namespace {

void check_unit_open(double v, const char* name) {
  if (!(v > 0.0 && v < 1.0)) {
    throw std::invalid_argument(std::string(name) + " must lie in (0,1)");
  }
}

// Largest k in 1..n with estimate(k) <= q, or 0. estimate also fills path.
template <typename Estimate>
std::size_t scan_stop(std::size_t n, double q, std::vector<double>& path,
                      Estimate&& estimate) {
  path.resize(n);
  std::size_t k_hat = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    path[k - 1] = estimate(k);
    if (path[k - 1] <= q) k_hat = k;
  }
  return k_hat;
}

std::vector<std::size_t> threshold_rejections(const std::vector<double>& p,
                                              std::size_t k_hat, double s) {
  std::vector<std::size_t> rejected;
  for (std::size_t i = 0; i < k_hat; ++i) {
    if (p[i] <= s) rejected.push_back(i + 1);
  }
  return rejected;
}

}  // namespace

void PValueSequence::validate() const {
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values[i];
    if (!(v >= 0.0 && v <= 1.0)) {
      throw std::invalid_argument("p-value out of range [0,1] at position " +
                                  std::to_string(i + 1));
    }
  }
  if (!ids.empty() && ids.size() != values.size()) {
    throw std::invalid_argument("ids length does not match values length");
  }
}

ProcedureSpec ProcedureSpec::bh(double q) {
  ProcedureSpec spec;
  spec.kind = ProcedureKind::BH;
  spec.q = q;
  spec.validate();
  return spec;
}

ProcedureSpec ProcedureSpec::storey_bh(double q, double lambda) {
  ProcedureSpec spec;
  spec.kind = ProcedureKind::StoreyBH;
  spec.q = q;
  spec.lambda = lambda;
  spec.validate();
  return spec;
}

ProcedureSpec ProcedureSpec::selective_seqstep(double q, double s) {
  ProcedureSpec spec;
  spec.kind = ProcedureKind::SelectiveSeqStep;
  spec.q = q;
  spec.s = s;
  spec.validate();
  return spec;
}

ProcedureSpec ProcedureSpec::adaptive_seqstep(double q, double s, double lambda) {
  ProcedureSpec spec;
  spec.kind = ProcedureKind::AdaptiveSeqStep;
  spec.q = q;
  spec.s = s;
  spec.lambda = lambda;
  spec.validate();
  return spec;
}

ProcedureSpec ProcedureSpec::accumulation_test(double q, AccumulationFn h) {
  ProcedureSpec spec;
  spec.kind = ProcedureKind::AccumulationTest;
  spec.q = q;
  spec.accumulation = std::move(h);
  spec.validate();
  return spec;
}

void ProcedureSpec::validate() const {
  check_unit_open(q, "q");
  switch (kind) {
    case ProcedureKind::BH:
      break;
    case ProcedureKind::StoreyBH:
      check_unit_open(lambda, "lambda");
      break;
    case ProcedureKind::SelectiveSeqStep:
      check_unit_open(s, "s");
      break;
    case ProcedureKind::AdaptiveSeqStep:
      check_unit_open(s, "s");
      check_unit_open(lambda, "lambda");
      if (s > lambda) {
        throw std::invalid_argument("adaptive seqstep requires s <= lambda");
      }
      break;
    case ProcedureKind::AccumulationTest:
      if (!accumulation.has_value()) {
        throw std::invalid_argument(
            "accumulation test requires an accumulation function");
      }
      break;
  }
}

std::string ProcedureSpec::method_name() const {
  switch (kind) {
    case ProcedureKind::BH:
      return "bh";
    case ProcedureKind::StoreyBH:
      return "storey_bh";
    case ProcedureKind::SelectiveSeqStep:
      return "selective_seqstep";
    case ProcedureKind::AdaptiveSeqStep:
      return "adaptive_seqstep";
    case ProcedureKind::AccumulationTest:
      return "accumulation_test(" +
             (accumulation ? accumulation->name() : std::string("?")) + ")";
  }
  return "?";
}

PrefixCounts count_stats(const PValueSequence& pvals, double threshold,
                         std::size_t k) {
  if (k > pvals.size()) {
    throw std::invalid_argument("count_stats: k exceeds sequence length");
  }
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw std::invalid_argument("count_stats: threshold must lie in [0,1]");
  }
  PrefixCounts counts;
  for (std::size_t i = 0; i < k; ++i) {
    if (pvals.values[i] <= threshold) {
      ++counts.n_below;
    } else {
      ++counts.n_above;
    }
  }
  return counts;
}

double fdp_hat_bh(const PValueSequence& pvals, double s) {
  if (!(s >= 0.0 && s <= 1.0)) {
    throw std::invalid_argument("fdp_hat_bh: s must lie in [0,1]");
  }
  pvals.validate();
  const std::size_t n = pvals.size();
  const std::size_t r = count_stats(pvals, s, n).n_below;
  return static_cast<double>(n) * s / static_cast<double>(std::max<std::size_t>(r, 1));
}

double storey_pi0(const PValueSequence& pvals, double lambda, std::size_t k) {
  check_unit_open(lambda, "lambda");
  if (k == 0 || k > pvals.size()) {
    throw std::invalid_argument("storey_pi0: k must lie in 1..n");
  }
  const std::size_t a = count_stats(pvals, lambda, k).n_above;
  return (1.0 + static_cast<double>(a)) /
         (static_cast<double>(k) * (1.0 - lambda));
}

double fdp_hat_as(const PValueSequence& pvals, std::size_t k, double s,
                  double lambda) {
  check_unit_open(s, "s");
  check_unit_open(lambda, "lambda");
  if (s > lambda) {
    throw std::invalid_argument("fdp_hat_as: requires s <= lambda");
  }
  if (k == 0 || k > pvals.size()) {
    throw std::invalid_argument("fdp_hat_as: k must lie in 1..n");
  }
  std::size_t r = 0, a = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const double p = pvals.values[i];
    if (p <= s) ++r;
    if (p > lambda) ++a;
  }
  // grouped as prefactor * count ratio so rational ties (e.g. A+1 == R at
  // s/(1-lambda) == q) land exactly on q
  return (s / (1.0 - lambda)) * ((1.0 + static_cast<double>(a)) /
                                 static_cast<double>(std::max<std::size_t>(r, 1)));
}

RejectionOutcome bh_procedure(const PValueSequence& pvals, double q) {
  check_unit_open(q, "q");
  pvals.validate();
  const std::size_t n = pvals.size();

  std::vector<double> sorted(pvals.values);
  std::sort(sorted.begin(), sorted.end());

  // s_hat = largest order statistic v with n*v <= q * #{p <= v}; ties are
  // handled by counting at the value, not the rank.
  double s_hat = 0.0;
  bool found = false;
  std::vector<double> path(n);
  for (std::size_t j = n; j >= 1; --j) {
    const double v = sorted[j - 1];
    const std::size_t r = static_cast<std::size_t>(
        std::upper_bound(sorted.begin(), sorted.end(), v) - sorted.begin());
    path[j - 1] = static_cast<double>(n) * v /
                  static_cast<double>(std::max<std::size_t>(r, 1));
    if (!found && static_cast<double>(n) * v <= q * static_cast<double>(r)) {
      s_hat = v;
      found = true;
      // keep filling the diagnostic path for smaller j
    }
  }

  RejectionOutcome outcome;
  outcome.k_hat = n;
  outcome.fdp_path = std::move(path);
  outcome.rejected =
      found ? threshold_rejections(pvals.values, n, s_hat) : std::vector<std::size_t>{};
  outcome.spec_used = ProcedureSpec::bh(q);
  return outcome;
}

RejectionOutcome storey_bh(const PValueSequence& pvals, double q, double lambda) {
  check_unit_open(q, "q");
  check_unit_open(lambda, "lambda");
  pvals.validate();
  const std::size_t n = pvals.size();

  std::vector<double> sorted(pvals.values);
  std::sort(sorted.begin(), sorted.end());
  const std::size_t a = n - static_cast<std::size_t>(std::upper_bound(sorted.begin(), sorted.end(), lambda) -
                                                     sorted.begin());

  double s_hat = 0.0;
  bool found = false;
  std::vector<double> path(n);
  for (std::size_t j = n; j >= 1; --j) {
    const double v = sorted[j - 1];
    const std::size_t r = static_cast<std::size_t>(
        std::upper_bound(sorted.begin(), sorted.end(), v) - sorted.begin());
    path[j - 1] = (v / (1.0 - lambda)) *
                  ((1.0 + static_cast<double>(a)) /
                   static_cast<double>(std::max<std::size_t>(r, 1)));
    if (!found && v <= lambda && path[j - 1] <= q) {
      s_hat = v;
      found = true;
    }
  }

  RejectionOutcome outcome;
  outcome.k_hat = n;
  outcome.fdp_path = std::move(path);
  outcome.rejected =
      found ? threshold_rejections(pvals.values, n, s_hat) : std::vector<std::size_t>{};
  outcome.spec_used = ProcedureSpec::storey_bh(q, lambda);
  return outcome;
}

RejectionOutcome adaptive_seqstep(const PValueSequence& pvals, double q,
                                  double s, double lambda) {
  const ProcedureSpec spec = ProcedureSpec::adaptive_seqstep(q, s, lambda);
  pvals.validate();
  const std::size_t n = pvals.size();
  const std::vector<double>& p = pvals.values;

  RejectionOutcome outcome;
  std::size_t r = 0, a = 0;
  outcome.k_hat = scan_stop(n, q, outcome.fdp_path, [&](std::size_t k) {
    if (p[k - 1] <= s) ++r;
    if (p[k - 1] > lambda) ++a;
    // same grouping as fdp_hat_as: rational ties land exactly on q
    return (s / (1.0 - lambda)) * ((1.0 + static_cast<double>(a)) /
                                   static_cast<double>(std::max<std::size_t>(r, 1)));
  });
  outcome.rejected = threshold_rejections(p, outcome.k_hat, s);
  outcome.spec_used = spec;
  return outcome;
}

RejectionOutcome selective_seqstep(const PValueSequence& pvals, double q,
                                   double s) {
  check_unit_open(s, "s");
  return adaptive_seqstep(pvals, q, s, s);
}

RejectionOutcome accumulation_test(const PValueSequence& pvals, double q,
                                   const AccumulationFn& h) {
  check_unit_open(q, "q");
  pvals.validate();
  const std::size_t n = pvals.size();
  const std::vector<double>& p = pvals.values;

  RejectionOutcome outcome;
  double sum = 0.0;
  outcome.k_hat = scan_stop(n, q, outcome.fdp_path, [&](std::size_t k) {
    sum += h(p[k - 1]);
    return sum / static_cast<double>(k);
  });
  outcome.rejected.resize(outcome.k_hat);
  std::iota(outcome.rejected.begin(), outcome.rejected.end(), std::size_t{1});
  outcome.spec_used = ProcedureSpec::accumulation_test(q, h);
  return outcome;
}

RejectionOutcome run_procedure(const PValueSequence& pvals,
                               const ProcedureSpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case ProcedureKind::BH:
      return bh_procedure(pvals, spec.q);
    case ProcedureKind::StoreyBH:
      return storey_bh(pvals, spec.q, spec.lambda);
    case ProcedureKind::SelectiveSeqStep:
      return selective_seqstep(pvals, spec.q, spec.s);
    case ProcedureKind::AdaptiveSeqStep:
      return adaptive_seqstep(pvals, spec.q, spec.s, spec.lambda);
    case ProcedureKind::AccumulationTest:
      return accumulation_test(pvals, spec.q, *spec.accumulation);
  }
  throw std::invalid_argument("run_procedure: unknown procedure kind");
}

}  // namespace ordtest
