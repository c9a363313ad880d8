#include <benchmark/benchmark.h>

#include <vector>

#include "cumadv/equivalence.hpp"
#include "cumadv/generator_spec.hpp"
#include "cumadv/musiclab.hpp"
#include "cumadv/point_process.hpp"
#include "cumadv/rng.hpp"

using namespace cumadv;

namespace {

void sample_generator(benchmark::State& state, const char* name, const char* params) {
  const auto spec = make_generator(name, params);
  const auto reps = static_cast<std::size_t>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    auto batch = sample_paths(spec, 8, reps, make_rng(++seed));
    benchmark::DoNotOptimize(batch.values.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_Polya(benchmark::State& state) { sample_generator(state, "polya-binary", ""); }
void BM_QModel(benchmark::State& state) { sample_generator(state, "q-model", "mu=0,sigmaT=1,sigmaX=1"); }
void BM_GaussianTwin(benchmark::State& state) { sample_generator(state, "gaussian-twin", "a=0,b=1,c=1"); }

void BM_Contagious(benchmark::State& state) {
  const PointProcessParams params(1.0, 1.0, 1.0);
  auto rng = make_rng(7);
  for (auto _ : state) {
    auto timeline = contagious_poisson(params, rng);
    benchmark::DoNotOptimize(timeline);
  }
}

void BM_Exchangeability(benchmark::State& state) {
  const auto spec = make_generator("polya-binary", "");
  const auto reps = static_cast<std::size_t>(state.range(0));
  auto perms = all_transpositions(3);
  perms.push_back(reversal(3));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    auto report = exchangeability_test(spec, 3, reps, perms, GridSpec::exact(), make_rng(++seed));
    benchmark::DoNotOptimize(report.statistic);
  }
}

void BM_UrnReplication(benchmark::State& state) {
  auto rng = make_rng(11);
  const std::vector<std::int32_t> downloads(500, 2);
  const auto log = musiclab::urn_fixture(48, downloads, 0.3, rng);
  for (auto _ : state) {
    auto result = musiclab::simulate_urn_replication(log, 0.3, rng);
    benchmark::DoNotOptimize(result);
  }
}

}  // namespace

BENCHMARK(BM_Polya)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_QModel)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GaussianTwin)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Contagious);
BENCHMARK(BM_Exchangeability)->Arg(10'000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_UrnReplication)->Unit(benchmark::kMicrosecond);
BENCHMARK_MAIN();
