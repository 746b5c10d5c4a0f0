#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ordtest/accumulation.hpp"
#include "ordtest/pvalues.hpp"

namespace ordtest {

enum class ProcedureKind {
  BH,
  StoreyBH,
  SelectiveSeqStep,
  AdaptiveSeqStep,
  AccumulationTest,
};

/// Which procedure to run and with what knobs. Knobs a kind does not use
/// stay at zero and are ignored by validation.
struct ProcedureSpec {
  ProcedureKind kind = ProcedureKind::BH;
  double q = 0.0;
  double s = 0.0;
  double lambda = 0.0;
  std::optional<AccumulationFn> accumulation;

  static ProcedureSpec bh(double q);
  static ProcedureSpec storey_bh(double q, double lambda);
  static ProcedureSpec selective_seqstep(double q, double s);
  static ProcedureSpec adaptive_seqstep(double q, double s, double lambda);
  static ProcedureSpec accumulation_test(double q, AccumulationFn h);

  /// 0 < q < 1 always. AdaptiveSeqStep: 0 < s <= lambda < 1; Selective:
  /// 0 < s < 1; StoreyBH: 0 < lambda < 1; AccumulationTest: h present.
  /// Exact 0/1 endpoints are rejected so s/(1-lambda) stays finite.
  void validate() const;

  std::string method_name() const;

  friend bool operator==(const ProcedureSpec&, const ProcedureSpec&) = default;
};

/// Tallies over the first k p-values at a threshold; ties count as below.
struct PrefixCounts {
  std::size_t n_below = 0;  // #{i <= k : p_i <= threshold}
  std::size_t n_above = 0;  // #{i <= k : p_i >  threshold}
};

PrefixCounts count_stats(const PValueSequence& pvals, double threshold,
                         std::size_t k);

/// n*s / (R(s,n) v 1).
double fdp_hat_bh(const PValueSequence& pvals, double s);

/// (1 + A(lambda,k)) / (k (1 - lambda)) on the first k p-values.
/// Deliberately not truncated at 1.
double storey_pi0(const PValueSequence& pvals, double lambda, std::size_t k);

/// (s / (1 - lambda)) * (1 + A(lambda,k)) / (R(s,k) v 1).
double fdp_hat_as(const PValueSequence& pvals, std::size_t k, double s,
                  double lambda);

/// Output of any procedure. `rejected` holds 1-based indices in increasing
/// order. `fdp_path` has one entry per prefix length k = 1..n: the running
/// FDP estimate for the stopping-rule procedures, or (for BH / Storey-BH,
/// where k_hat is fixed at n) the estimate at the k-th smallest p-value,
/// kept for diagnostics.
struct RejectionOutcome {
  std::size_t k_hat = 0;
  std::vector<std::size_t> rejected;
  std::vector<double> fdp_path;
  ProcedureSpec spec_used;

  std::size_t num_rejected() const noexcept { return rejected.size(); }

  friend bool operator==(const RejectionOutcome&, const RejectionOutcome&) = default;
};

/// Step-up rule: reject all p_i <= s_hat, where s_hat is the largest
/// observed p-value v with n*v <= q * #{p_i <= v} (no rejections if none).
RejectionOutcome bh_procedure(const PValueSequence& pvals, double q);

/// Step-up with the threshold-count null-fraction correction; candidate
/// thresholds are the observed p-values <= lambda.
RejectionOutcome storey_bh(const PValueSequence& pvals, double q, double lambda);

/// Scan k = 1..n, keep the largest k whose running estimate stays <= q
/// (0 when the feasible set is empty), reject every p_i <= s with i <= k_hat.
RejectionOutcome adaptive_seqstep(const PValueSequence& pvals, double q,
                                  double s, double lambda);

/// The lambda = s case of adaptive_seqstep; returns that outcome unchanged,
/// so spec_used records the equivalent adaptive spec.
RejectionOutcome selective_seqstep(const PValueSequence& pvals, double q,
                                   double s);

/// Running mean of h(p_i); rejects the whole prefix 1..k_hat.
RejectionOutcome accumulation_test(const PValueSequence& pvals, double q,
                                   const AccumulationFn& h);

/// Dispatch on spec.kind.
RejectionOutcome run_procedure(const PValueSequence& pvals,
                               const ProcedureSpec& spec);

}  // namespace ordtest
