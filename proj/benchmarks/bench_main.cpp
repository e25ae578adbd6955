#include "ctd/korn.hpp"
#include "ctd/surface.hpp"
#include "ctd/thin_domain.hpp"

#include <benchmark/benchmark.h>

#include <memory>
#include <random>

using namespace ctd;

static void BM_FrameAt(benchmark::State& state)
{
  const Surface torus = make_torus(2.0, 0.5, {16, 32, 4});
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 6.283185307179586);
  for (auto _ : state) {
    const Vec2 s(u(rng), u(rng));
    benchmark::DoNotOptimize(torus.frame_at(0, s));
  }
}
BENCHMARK(BM_FrameAt);

static void BM_ThinDomainBuild(benchmark::State& state)
{
  const int n = static_cast<int>(state.range(0));
  auto sphere = std::make_shared<const Surface>(make_sphere({n, 2 * n, 8}));
  for (auto _ : state) {
    ThinDomain dom(sphere, as_example_profile(), 0.1);
    benchmark::DoNotOptimize(dom.volume_nodes().data());
  }
}
BENCHMARK(BM_ThinDomainBuild)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_IntegrateVolume(benchmark::State& state)
{
  const int n = static_cast<int>(state.range(0));
  auto sphere = std::make_shared<const Surface>(make_sphere({n, 2 * n, 8}));
  const ThinDomain dom(sphere, shell_profile(), 0.1);
  for (auto _ : state)
    benchmark::DoNotOptimize(integrate_volume(dom, [](const Vec3& x) { return x.squaredNorm(); }));
}
BENCHMARK(BM_IntegrateVolume)->Arg(16)->Arg(64)->Unit(benchmark::kMicrosecond);

static void BM_ClosestPoint(benchmark::State& state)
{
  auto torus = std::make_shared<const Surface>(make_torus(2.0, 0.5, {32, 64, 4}));
  const ClosestPointMap cp(torus);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> ang(0.0, 6.283185307179586), rad(-0.2, 0.2);
  for (auto _ : state) {
    const double t = ang(rng), p = ang(rng), r = 0.5 + rad(rng);
    const Vec3 x((2.0 + r * std::cos(p)) * std::cos(t), (2.0 + r * std::cos(p)) * std::sin(t),
                 r * std::sin(p));
    benchmark::DoNotOptimize(cp.project(x));
  }
}
BENCHMARK(BM_ClosestPoint);

static void BM_KornEigen(benchmark::State& state)
{
  auto sphere = std::make_shared<const Surface>(make_sphere({16, 32, 4}));
  const ThinDomain dom(sphere, shell_profile(), 0.1);
  KornConfig kc;
  kc.degree = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(korn_eigen_estimate(dom, kc));
}
BENCHMARK(BM_KornEigen)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
