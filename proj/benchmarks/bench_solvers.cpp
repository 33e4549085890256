#include <benchmark/benchmark.h>

#include "stvmd/stvmd_all.hpp"

using namespace stvmd;

namespace {

void BM_SpectralRoundTrip(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto x = gen_sim1(128.0, 8.0, {0.2, 1});
  const auto win = make_window(WindowKind::Hamming, n);
  for (auto _ : state) {
    auto y = overlap_add_recover(inverse_spectra(forward_spectra(frame_signal(x, win))), win);
    benchmark::DoNotOptimize(y);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(x.length()));
}
BENCHMARK(BM_SpectralRoundTrip)->Arg(16)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_Vmd(benchmark::State& state) {
  const auto x = gen_sim1(128.0, 8.0, {0.2, 1});
  for (auto _ : state) benchmark::DoNotOptimize(vmd_decompose(x, {}));
}
BENCHMARK(BM_Vmd)->Unit(benchmark::kMillisecond);

void BM_Stvmd(benchmark::State& state) {
  const auto variant = state.range(0) ? StvmdVariant::Dynamic : StvmdVariant::NonDynamic;
  const auto x = gen_sim1(128.0, 8.0, {0.2, 1});
  for (auto _ : state) benchmark::DoNotOptimize(stvmd_decompose(x, {}, variant));
  state.SetLabel(state.range(0) ? "dynamic" : "non-dynamic");
}
BENCHMARK(BM_Stvmd)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_OnlinePush(benchmark::State& state) {
  DecompositionConfig config;
  config.window_len = static_cast<std::size_t>(state.range(0));
  const auto x = gen_two_tone(128.0, 4.0);
  auto online = online_init(config);
  std::size_t i = 0;
  double sample[1];
  for (auto _ : state) {
    sample[0] = x(0, i);
    benchmark::DoNotOptimize(online_push(online, sample));
    i = (i + 1) % x.length();
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_OnlinePush)->Arg(32)->Arg(64)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
