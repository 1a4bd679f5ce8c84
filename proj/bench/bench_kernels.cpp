// Serial reference vs chunked parallel kernels.
#include <vector>

#include <benchmark/benchmark.h>

#include "lehmer/kernels.hpp"
#include "lehmer/ntcore.hpp"

namespace {

using namespace lehmer;

// Prime moduli keep phi(q) = q - 1 so every size does the same work per n.
const u64 kModuli[] = {10007, 100003, 1000003};

const std::vector<i64> kExp{1, -1};
const std::vector<u64> kM{2, 2};
const std::vector<u64> kA{0, 0};

void BM_CountSerial(benchmark::State& state) {
  const Modulus q(kModuli[state.range(0)]);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::serial::count_matching(q, kExp, kM, kA));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(q.phi()));
}

void BM_CountParallel(benchmark::State& state) {
  const Modulus q(kModuli[state.range(0)]);
  const int jobs = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::count_matching(q, kExp, kM, kA, jobs));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(q.phi()));
}

void BM_ExpSumSerial(benchmark::State& state) {
  const Modulus q(kModuli[state.range(0)]);
  const std::vector<u64> lambda{1, 1};
  for (auto _ : state) benchmark::DoNotOptimize(kernels::serial::exp_sum(q, kExp, lambda));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(q.phi()));
}

void BM_ExpSumParallel(benchmark::State& state) {
  const Modulus q(kModuli[state.range(0)]);
  const std::vector<u64> lambda{1, 1};
  const int jobs = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::exp_sum(q, kExp, lambda, jobs));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(q.phi()));
}

void parallel_args(benchmark::internal::Benchmark* b) {
  for (int size = 0; size < 3; ++size)
    for (int jobs : {1, 2, 4}) b->Args({size, jobs});
}

}  // namespace

BENCHMARK(BM_CountSerial)->DenseRange(0, 2)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_CountParallel)->Apply(parallel_args)->UseRealTime()->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ExpSumSerial)->DenseRange(0, 2)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ExpSumParallel)->Apply(parallel_args)->UseRealTime()->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
