#include <benchmark/benchmark.h>

#include <random>

#include "dsq/assembly.hpp"
#include "dsq/density.hpp"
#include "instances.hpp"
#include "support.hpp"

using namespace dsq;

namespace {

std::vector<Matrix<Complex>> generators(std::size_t n, std::size_t count) {
  testing::Rng rng(17);
  std::vector<Matrix<Complex>> g;
  for (std::size_t i = 0; i < count; ++i) g.push_back(testing::random_matc(rng, n, n));
  return g;
}

void BM_DensityParallel(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  auto g = generators(n, 3);
  for (auto _ : st) benchmark::DoNotOptimize(algebra_dimension(g, n));
}

void BM_DensitySerial(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  auto g = generators(n, 3);
  for (auto _ : st) benchmark::DoNotOptimize(algebra_dimension_serial(g, n));
}

// An empty instance: every restart runs to the iteration cap, so the full
// attempt budget is spent.
RealizerOptions failing_options() {
  RealizerOptions opt;
  opt.attempts = 16;
  opt.max_iterations = 200;
  return opt;
}

void BM_RealizeParallel(benchmark::State& st) {
  auto g = build_global_quiver(testing::star2(1, 2, -5, 2, 3, -2));
  auto opt = failing_options();
  for (auto _ : st) benchmark::DoNotOptimize(realize_numeric(g, opt).success);
}

void BM_RealizeSerial(benchmark::State& st) {
  auto g = build_global_quiver(testing::star2(1, 2, -5, 2, 3, -2));
  std::vector<Complex> z;
  for (const auto& s : g.zeta) z.push_back(ScalarTraits<Rational>::to_complex(s));
  auto opt = failing_options();
  for (auto _ : st) benchmark::DoNotOptimize(realize_numeric_serial(g.quiver, g.v, z, opt).success);
}

}  // namespace

BENCHMARK(BM_DensityParallel)->Arg(4)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DensitySerial)->Arg(4)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RealizeParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RealizeSerial)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
