// Serial vs OpenMP Alpha158 on synthetic random walks.
//   ./factor_bench --benchmark_filter=Panel
// Set OMP_NUM_THREADS to compare thread counts.

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "tradekit/core/time.hpp"
#include "tradekit/core/types.hpp"
#include "tradekit/factors/alpha158.hpp"

using namespace tradekit;

namespace {

AssetSeries random_walk(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z(0.0, 0.015);
  std::uniform_real_distribution<double> u(0.0, 0.01);
  std::vector<Bar> bars;
  bars.reserve(n);
  double close = 50.0;
  Timestamp t = parse_timestamp("2000-01-03");
  for (std::size_t i = 0; i < n; ++i) {
    const double open = close;
    close = open * std::exp(z(rng));
    Bar b;
    b.timestamp = t;
    b.open = open;
    b.close = close;
    b.high = std::max(open, close) * (1.0 + u(rng));
    b.low = std::min(open, close) * (1.0 - u(rng));
    b.volume = 1e6 * (1.0 + u(rng) * 50.0);
    bars.push_back(b);
    t += std::chrono::days(1);
  }
  return AssetSeries("B" + std::to_string(seed), std::move(bars));
}

void single_asset(benchmark::State& state, factors::ExecPolicy policy) {
  const auto series = random_walk(static_cast<std::size_t>(state.range(0)), 7);
  for (auto _ : state) {
    auto m = factors::compute_alpha158(series, factors::WindowSet::standard(), policy);
    benchmark::DoNotOptimize(m.values.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void panel(benchmark::State& state, factors::ExecPolicy policy) {
  std::vector<AssetSeries> assets;
  for (std::int64_t i = 0; i < state.range(0); ++i) assets.push_back(random_walk(1000, static_cast<std::uint64_t>(i + 1)));
  for (auto _ : state) {
    auto ms = factors::compute_alpha158_panel(assets, factors::WindowSet::standard(), policy);
    benchmark::DoNotOptimize(ms.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * 1000);
}

}  // namespace

BENCHMARK_CAPTURE(single_asset, serial, factors::ExecPolicy::kSerial)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(single_asset, parallel, factors::ExecPolicy::kParallel)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(panel, serial, factors::ExecPolicy::kSerial)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(panel, parallel, factors::ExecPolicy::kParallel)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
