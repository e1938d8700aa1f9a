#include <benchmark/benchmark.h>

#include "dsnn/neuron.hpp"
#include "dsnn/rewire.hpp"
#include "dsnn/sparsity.hpp"
#include "dsnn/tensor.hpp"

using namespace dsnn;

namespace {

Tensor random_tensor(std::vector<std::size_t> shape, Rng& rng) {
  Tensor t(std::move(shape));
  for (auto& v : t.data()) v = rng.uniform(-1, 1);
  return t;
}

SparseLayer random_layer(std::size_t rows, std::size_t cols, Rng& rng) {
  return make_layer(er_init(ErSpec::from_density(rows, cols, 0.5), rng), rng);
}

void BM_Gemm(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(1);
  const Tensor a = random_tensor({n, n}, rng);
  const Tensor b = random_tensor({n, n}, rng);
  Tensor c({n, n});
  for (auto _ : state) {
    gemm(as_matrix(a), as_matrix(b), as_matrix(c), false);
    benchmark::DoNotOptimize(c.data().data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n * n));
}
BENCHMARK(BM_Gemm)->Arg(64)->Arg(256);

void BM_PqIndex(benchmark::State& state) {
  Rng rng(2);
  std::vector<double> v(static_cast<std::size_t>(state.range(0)));
  for (auto& x : v) x = rng.normal();
  for (auto _ : state) benchmark::DoNotOptimize(pq_index(v, PqParams{}));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PqIndex)->Arg(1000)->Arg(235200);

void BM_LifForward(benchmark::State& state) {
  Rng rng(3);
  const SparseLayer layer = random_layer(300, 784, rng);
  Tensor input({4, 64, 784});
  for (auto& v : input.data()) v = rng.uniform();
  const LifParams params;
  for (auto _ : state) benchmark::DoNotOptimize(lif_forward(input, layer, params));
}
BENCHMARK(BM_LifForward)->Unit(benchmark::kMillisecond);

void BM_RewireStep(benchmark::State& state) {
  Rng rng(4);
  const SparseLayer base = random_layer(300, 784, rng);
  const auto reports = measure_layer(base, Scope::kLayer, PqParams{});
  for (auto _ : state) {
    state.PauseTiming();
    SparseLayer layer = base;
    state.ResumeTiming();
    benchmark::DoNotOptimize(rewire_step(layer, reports, 0.5));
  }
}
BENCHMARK(BM_RewireStep)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
