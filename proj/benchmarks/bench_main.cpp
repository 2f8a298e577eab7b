#include "anb/engine.hpp"
#include "anb/graph.hpp"
#include "anb/rational.hpp"

#include <benchmark/benchmark.h>

namespace {

anb::GraphFamily family_at(std::int64_t index) {
  switch (index) {
    case 0: return anb::BarabasiAlbert{};
    case 1: return anb::ErdosRenyi{};
    case 2: return anb::WattsStrogatz{};
    default: return anb::RandomGeometric{};
  }
}

void BM_Generate(benchmark::State& state) {
  const auto family = family_at(state.range(0));
  const auto n = static_cast<std::size_t>(state.range(1));
  std::uint64_t seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(anb::generate(family, n, seed++));
  state.SetLabel(anb::family_name(family));
}
BENCHMARK(BM_Generate)->ArgsProduct({{0, 1, 2, 3}, {1000, 10000}})->Unit(benchmark::kMillisecond);

void BM_Diameter(benchmark::State& state) {
  const auto family = family_at(state.range(0));
  const anb::Graph g = anb::generate(family, static_cast<std::size_t>(state.range(1)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(anb::diameter(g));
  state.SetLabel(anb::family_name(family));
}
BENCHMARK(BM_Diameter)->ArgsProduct({{0, 3}, {1000, 5000}})->Unit(benchmark::kMillisecond);

void BM_Run(benchmark::State& state) {
  const auto family = family_at(state.range(0));
  const auto algorithm = static_cast<anb::Algorithm>(state.range(2));
  anb::SimConfig config(anb::generate(family, static_cast<std::size_t>(state.range(1)), 1));
  config.algorithm = algorithm;
  config.trace_level = anb::TraceLevel::None;
  for (auto _ : state) benchmark::DoNotOptimize(anb::run(config));
  state.SetLabel(anb::family_name(family) + "/" + std::string(anb::to_string(algorithm)));
}
BENCHMARK(BM_Run)
    ->ArgsProduct({{0, 1, 2, 3}, {1000}, {0, 1}})
    ->Args({1, 1000, 2})
    ->Args({1, 10000, 0})
    ->Unit(benchmark::kMillisecond);

void BM_ExactSum(benchmark::State& state) {
  const auto terms = state.range(0);
  for (auto _ : state) {
    anb::ExactSum sum;
    for (std::int64_t k = 1; k <= terms; ++k) sum += anb::ExactCount(1, static_cast<unsigned long>(k % 64 + 1));
    benchmark::DoNotOptimize(sum.value());
  }
}
BENCHMARK(BM_ExactSum)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
