#include <benchmark/benchmark.h>

#include <random>

#include "cvo/adaptive.hpp"
#include "cvo/registration.hpp"
#include "cvo/sensitivity.hpp"
#include "synthetic.hpp"

namespace {

using namespace cvo;

struct Fixture {
  ColoredCloud X, Z;
  Pose truth;
  explicit Fixture(std::size_t n) {
    std::mt19937_64 rng(42);
    X = testing::structured_cloud(n, rng);
    truth = testing::random_pose(0.1, 0.05, rng);
    Z = X.transformed(truth);
  }
};

void BM_BuildPairs(benchmark::State& state) {
  const Fixture f(static_cast<std::size_t>(state.range(0)));
  const KernelParams p = KernelParams{}.with_ell(static_cast<double>(state.range(1)) / 1000.0);
  std::size_t pairs = 0;
  for (auto _ : state) {
    const PairSet s = build_pairs(f.X, f.Z, p);
    pairs = s.size();
    benchmark::DoNotOptimize(s.entries.data());
  }
  state.counters["pairs"] = static_cast<double>(pairs);
}
BENCHMARK(BM_BuildPairs)->ArgsProduct({{500, 3000}, {39, 100, 150}})->Unit(benchmark::kMillisecond);

void BM_PoseGradient(benchmark::State& state) {
  const Fixture f(static_cast<std::size_t>(state.range(0)));
  const KernelParams p;
  const PairSet pairs = build_pairs(f.X, f.Z, p);
  for (auto _ : state) benchmark::DoNotOptimize(pose_gradient(f.X, f.Z, Pose(), pairs, p));
}
BENCHMARK(BM_PoseGradient)->Arg(500)->Arg(3000)->Unit(benchmark::kMicrosecond);

void BM_EllGradient(benchmark::State& state) {
  const Fixture f(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ell_gradient(f.X, f.Z, Pose(), 0.1, KernelParams{}));
}
BENCHMARK(BM_EllGradient)->Arg(500)->Arg(3000)->Unit(benchmark::kMillisecond);

void BM_Register(benchmark::State& state) {
  const Fixture f(static_cast<std::size_t>(state.range(0)));
  SolverConfig cfg;
  cfg.adaptive = state.range(1) != 0;
  int iterations = 0;
  for (auto _ : state) {
    const RegistrationResult r = register_clouds(f.X, f.Z, cfg);
    iterations = r.iterations;
    benchmark::DoNotOptimize(r.pose.T.data());
  }
  state.counters["solver_iterations"] = iterations;
}
BENCHMARK(BM_Register)->ArgsProduct({{500, 3000}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_Cutoff(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(cutoff(6, 1e-3));
}
BENCHMARK(BM_Cutoff)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
