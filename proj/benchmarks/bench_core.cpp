#include <benchmark/benchmark.h>

#include "hkframe/approx.hpp"
#include "hkframe/frames.hpp"
#include "hkframe/nets.hpp"
#include "hkframe/spaces.hpp"
#include "hkframe/spectral_ops.hpp"

using namespace hkframe;

static void EigenAllTorus(benchmark::State& state) {
  auto m = SpectralModel::torus(static_cast<int>(state.range(0)));
  double x = 0.1234;
  for (auto _ : state) {
    auto v = m.eigen_all(x);
    benchmark::DoNotOptimize(v);
    x += 1e-6;
  }
}
BENCHMARK(EigenAllTorus)->Arg(128)->Arg(512);

static void EigenAllJacobi(benchmark::State& state) {
  auto m = SpectralModel::jacobi(0.0, 0.0, static_cast<int>(state.range(0)));
  double x = 0.1234;
  for (auto _ : state) {
    auto v = m.eigen_all(x);
    benchmark::DoNotOptimize(v);
    x += 1e-7;
  }
}
BENCHMARK(EigenAllJacobi)->Arg(128)->Arg(512);

static void KernelRow(benchmark::State& state) {
  auto m = SpectralModel::torus(static_cast<int>(state.range(0)));
  auto phi = make_cutoff(CutoffKind::TypeA, 2.0, 0.5);
  auto op = kernel_operator(m, [&phi](double u) { return phi(u); }, 0.01);
  for (auto _ : state) {
    auto row = op.kernel_row(0.37);
    benchmark::DoNotOptimize(row);
  }
}
BENCHMARK(KernelRow)->Arg(256)->Arg(512);

static void MaximalNet(benchmark::State& state) {
  auto m = SpectralModel::torus(256);
  const double delta = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) {
    auto net = maximal_net(m, delta, 0.0);
    benchmark::DoNotOptimize(net);
  }
}
BENCHMARK(MaximalNet)->Arg(32)->Arg(128);

static void TightBuild(benchmark::State& state) {
  auto m = SpectralModel::torus(static_cast<int>(state.range(0)));
  auto phi = make_cutoff(CutoffKind::TypeA, 2.0, 0.5);
  const int levels = 5;
  const double gamma = tight_auto_gamma(m, 2.0, levels);
  for (auto _ : state) {
    auto frame = build_tight(m, phi, 2.0, levels, gamma);
    benchmark::DoNotOptimize(frame);
  }
}
BENCHMARK(TightBuild)->Unit(benchmark::kMillisecond)->Arg(128)->Arg(256);

static void FrameAnalyze(benchmark::State& state) {
  auto m = SpectralModel::torus(256);
  auto phi = make_cutoff(CutoffKind::TypeA, 2.0, 0.5);
  FrameSystem frame = build_frame1(m, phi, 2.0, 6, frame_auto_gamma(m, 2.0, 6));
  build_dual(frame);
  const Eigen::VectorXd f = random_band_limited(m, frame.covered_band(), 1);
  for (auto _ : state) {
    auto a = frame.analyze(f, state.range(0) != 0);
    benchmark::DoNotOptimize(a);
  }
}
BENCHMARK(FrameAnalyze)->Arg(0)->Arg(1);

static void HeatNorm(benchmark::State& state) {
  auto m = SpectralModel::torus(static_cast<int>(state.range(0)));
  SpaceCalculator calc(m);
  const Eigen::VectorXd f = random_band_limited(m, 32.0, 2);
  SpaceParams sp{1.0, 2.0, 2.0, false, 1.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(calc.besov_norm(f, sp, NormMethod::Heat));
  }
}
BENCHMARK(HeatNorm)->Unit(benchmark::kMillisecond)->Arg(128)->Arg(256);

static void GreedyCurve(benchmark::State& state) {
  auto m = SpectralModel::torus(256);
  auto phi = make_cutoff(CutoffKind::TypeA, 2.0, 0.5);
  FrameSystem frame = build_frame1(m, phi, 2.0, 6, frame_auto_gamma(m, 2.0, 6));
  build_dual(frame);
  const Eigen::VectorXd f = random_band_limited(m, frame.covered_band(), 3);
  for (auto _ : state) {
    auto curve = greedy_sigma_curve(frame, f, 2.0, 200);
    benchmark::DoNotOptimize(curve);
  }
}
BENCHMARK(GreedyCurve)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
