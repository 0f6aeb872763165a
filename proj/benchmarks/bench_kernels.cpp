#include <benchmark/benchmark.h>

#include "kvevp/dynamics.hpp"
#include "kvevp/forcing.hpp"
#include "kvevp/spectral.hpp"

using namespace kvevp;

namespace {

Config sized(int n, bool advection) {
  Config c = default_config();
  c.run.modes = n;
  c.run.points = 4 * n;
  c.variant.advection = advection;
  return c;
}

}  // namespace

static void BM_ForwardInverse(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const TorusGrid g(n, 4 * n);
  const auto f = forcing::synthesize(FieldSpec::random(1.0, n), g, Rank::sym_tensor, 3);
  for (auto _ : st) benchmark::DoNotOptimize(spectral::forward(spectral::inverse(f)));
}
BENCHMARK(BM_ForwardInverse)->Arg(16)->Arg(32)->Arg(64);

static void BM_Rates(benchmark::State& st) {
  const Model model(sized(static_cast<int>(st.range(0)), st.range(1) != 0));
  const auto s = model.initial_state();
  for (auto _ : st) benchmark::DoNotOptimize(model.rates(s));
}
BENCHMARK(BM_Rates)->Args({32, 0})->Args({32, 1})->Args({64, 0});

static void BM_Rk4Step(benchmark::State& st) {
  const Model model(sized(static_cast<int>(st.range(0)), false));
  const auto s = model.initial_state();
  const double dt = model.stable_dt(s);
  for (auto _ : st) benchmark::DoNotOptimize(model.step(s, dt));
}
BENCHMARK(BM_Rk4Step)->Arg(16)->Arg(32);
BENCHMARK_MAIN();
