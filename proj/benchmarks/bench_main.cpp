#include <benchmark/benchmark.h>

#include <numbers>

#include "tiretrack/verify.hpp"

namespace tt = tiretrack;

namespace {

tt::WaveFront fourier_front(tt::Model m, int n) {
  return tt::build(tt::CurveSpec::polar_fourier(m, 0.8, {0.04, 0.02, 0.01}, {0.01, -0.02, 0.005}, n));
}

void BM_Build(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(fourier_front(tt::Model::Sphere, static_cast<int>(state.range(0))));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Build)->Arg(1024)->Arg(4096);

void BM_Steering(benchmark::State& state) {
  const auto w = fourier_front(tt::Model::Sphere, static_cast<int>(state.range(0)));
  const tt::BicycleParams p{0.5, tt::Model::Sphere, 4};
  for (auto _ : state) benchmark::DoNotOptimize(tt::integrate_steering(w, p, std::numbers::pi));
  state.SetItemsProcessed(state.iterations() * state.range(0) * p.steps_per_sample);
}
BENCHMARK(BM_Steering)->Arg(1024)->Arg(4096);

void BM_Monodromy(benchmark::State& state) {
  const auto m = state.range(1) ? tt::Model::Hyperbolic : tt::Model::Sphere;
  const auto w = fourier_front(m, static_cast<int>(state.range(0)));
  const tt::BicycleParams p{0.5, m, 4};
  for (auto _ : state) benchmark::DoNotOptimize(tt::compute_monodromy(w, p));
  state.SetItemsProcessed(state.iterations() * state.range(0) * p.steps_per_sample);
}
BENCHMARK(BM_Monodromy)->Args({1024, 0})->Args({4096, 0})->Args({1024, 1});

void BM_MonodromyFromProfile(benchmark::State& state) {
  const tt::FrontProfile profile(fourier_front(tt::Model::Sphere, 1024), 4);
  const tt::BicycleParams p{0.5, tt::Model::Sphere, 4};
  for (auto _ : state) benchmark::DoNotOptimize(tt::compute_monodromy(profile, p));
}
BENCHMARK(BM_MonodromyFromProfile);

void BM_ParabolicSearch(benchmark::State& state) {
  const auto w = fourier_front(tt::Model::Sphere, 1024);
  for (auto _ : state) benchmark::DoNotOptimize(tt::find_parabolic_length(w, 1.2));
}
BENCHMARK(BM_ParabolicSearch)->Unit(benchmark::kMillisecond);

void BM_SmallLengthProbe(benchmark::State& state) {
  const auto w = fourier_front(tt::Model::Hyperbolic, 1024);
  for (auto _ : state) benchmark::DoNotOptimize(tt::small_l_probe(w));
}
BENCHMARK(BM_SmallLengthProbe)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
