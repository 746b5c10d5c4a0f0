#include <benchmark/benchmark.h>

#include "ordtest/asymptotic.hpp"
#include "ordtest/normal.hpp"
#include "ordtest/procedures.hpp"
#include "ordtest/simulation.hpp"
#include "ordtest/vct_model.hpp"

namespace {

using namespace ordtest;

const VctParams kModel{0.2, 3.65, 2.0, 10000};

static void BM_NormQuantile(benchmark::State& state) {
  double u = 1e-7;
  for (auto _ : state) {
    benchmark::DoNotOptimize(norm_quantile(u));
    u += 1e-7;
    if (u >= 1.0) u = 1e-7;
  }
}
BENCHMARK(BM_NormQuantile);

static void BM_SampleVct(benchmark::State& state) {
  VctParams params = kModel;
  params.n = static_cast<std::size_t>(state.range(0));
  std::uint64_t seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_vct(params, seed++));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleVct)->Arg(1000)->Arg(10000);

static void BM_AdaptiveSeqStep(benchmark::State& state) {
  VctParams params = kModel;
  params.n = static_cast<std::size_t>(state.range(0));
  const LabeledSample sample = sample_vct(params, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(adaptive_seqstep(sample.pvals, 0.1, 0.1, 0.5));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_AdaptiveSeqStep)->Arg(1000)->Arg(10000);

static void BM_BhProcedure(benchmark::State& state) {
  VctParams params = kModel;
  params.n = static_cast<std::size_t>(state.range(0));
  const LabeledSample sample = sample_vct(params, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bh_procedure(sample.pvals, 0.1));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BhProcedure)->Arg(1000)->Arg(10000);

static void BM_PowerAs(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(power_as(0.1, 0.5, 0.1, kModel));
  }
}
BENCHMARK(BM_PowerAs);

static void BM_RunTrial(benchmark::State& state) {
  VctParams params = kModel;
  params.n = 1000;
  const ProcedureSpec spec = ProcedureSpec::adaptive_seqstep(0.1, 0.1, 0.5);
  std::uint64_t seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_trial(params, spec, seed++));
  }
}
BENCHMARK(BM_RunTrial);

}  // namespace

BENCHMARK_MAIN();
