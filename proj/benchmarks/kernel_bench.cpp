#include <benchmark/benchmark.h>

#include "pedacc/harness.hpp"
#include "pedacc/motivation.hpp"
#include "pedacc/prelude.hpp"

using namespace pedacc;

static void BM_NormalizeFactorial(benchmark::State& state) {
  Term t = prelude::fact(prelude::numeral(static_cast<std::uint64_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(normalize(t));
}
BENCHMARK(BM_NormalizeFactorial)->DenseRange(2, 5);

static void BM_NormalizeStepwise(benchmark::State& state) {
  Term t = prelude::times(prelude::numeral(3), prelude::numeral(3));
  for (auto _ : state) benchmark::DoNotOptimize(normalize_stepwise(t, Strategy::LeftmostOutermost));
}
BENCHMARK(BM_NormalizeStepwise);

static void BM_CheckPreludeRestricted(benchmark::State& state) {
  for (auto _ : state) {
    for (const auto& [name, t] : prelude::builtins()) benchmark::DoNotOptimize(infer_type(Environment(), t, Mode::CCr));
  }
}
BENCHMARK(BM_CheckPreludeRestricted)->Unit(benchmark::kMillisecond);

static void BM_GenerateAndMotivate(benchmark::State& state) {
  std::uint64_t seed = 1;
  for (auto _ : state) {
    auto g = harness::gen_ccr_env(seed++, static_cast<unsigned>(state.range(0)));
    MotivationOptions o;
    o.check.hints = g.hints;
    benchmark::DoNotOptimize(motivate_env(g.wf, o));
  }
}
BENCHMARK(BM_GenerateAndMotivate)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

static void BM_SearchSimpleType(benchmark::State& state) {
  Term goal = prelude::to_term(prelude::SimpleType::arrow(
      prelude::SimpleType::arrow(prelude::SimpleType::nat(), prelude::SimpleType::nat()), prelude::SimpleType::nat()));
  for (auto _ : state) benchmark::DoNotOptimize(inhabit_search(Environment(), goal, 8));
}
BENCHMARK(BM_SearchSimpleType);

BENCHMARK_MAIN();
