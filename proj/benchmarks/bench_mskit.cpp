#include <benchmark/benchmark.h>

#include <random>

#include "mskit/dualspace.hpp"
#include "mskit/intertwine.hpp"

namespace {

using mskit::BlaschkeProduct;
using mskit::cd;
using mskit::CircleFunction;
using mskit::ModelBasis;

CircleFunction random_symbol(int band, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXcd c(2 * band + 1);
  for (int i = 0; i < c.size(); ++i) c[i] = cd(u(rng), u(rng));
  return CircleFunction::from_coefficients(-band, c, n);
}

void BM_BlaschkeToCircle(benchmark::State& state) {
  BlaschkeProduct b = BlaschkeProduct::random(8, 42, 0.7);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(b.to_circle(n));
}
BENCHMARK(BM_BlaschkeToCircle)->RangeMultiplier(4)->Range(1024, 16384);

void BM_ModelBasisBuild(benchmark::State& state) {
  BlaschkeProduct b = BlaschkeProduct::random(static_cast<int>(state.range(0)), 7, 0.7);
  for (auto _ : state) benchmark::DoNotOptimize(ModelBasis(b, 4096).gram_residual());
}
BENCHMARK(BM_ModelBasisBuild)->DenseRange(2, 10, 4);

void BM_AttoMatrix(benchmark::State& state) {
  const int deg = static_cast<int>(state.range(0));
  ModelBasis mt(BlaschkeProduct::random(deg, 11, 0.6), 4096);
  ModelBasis ma(BlaschkeProduct::random(deg, 12, 0.6), 4096);
  CircleFunction phi = random_symbol(6, 4096, 3);
  for (auto _ : state) benchmark::DoNotOptimize(mskit::atto_matrix(phi, mt, ma));
}
BENCHMARK(BM_AttoMatrix)->DenseRange(2, 10, 4);

void BM_SolveIntertwiners(benchmark::State& state) {
  const int deg = static_cast<int>(state.range(0));
  BlaschkeProduct common = BlaschkeProduct::random(2, 21, 0.5);
  ModelBasis mt(common * BlaschkeProduct::random(deg, 22, 0.5), 4096);
  ModelBasis ma(common * BlaschkeProduct::random(deg, 23, 0.5), 4096);
  for (auto _ : state) benchmark::DoNotOptimize(mskit::solve_intertwiners(mt, ma).dim());
}
BENCHMARK(BM_SolveIntertwiners)->DenseRange(2, 6, 2);

void BM_HankelDistance(benchmark::State& state) {
  BlaschkeProduct alpha = BlaschkeProduct::random(3, 31, 0.5);
  CircleFunction phi = random_symbol(8, 4096, 5);
  for (auto _ : state) benchmark::DoNotOptimize(mskit::dist_to_alpha_hinf(phi, alpha));
}
BENCHMARK(BM_HankelDistance);

void BM_DualCommutatorResidual(benchmark::State& state) {
  BlaschkeProduct theta = BlaschkeProduct::random(2, 51, 0.3);
  BlaschkeProduct alpha = BlaschkeProduct::random(2, 52, 0.3);
  mskit::LaurentWindow w;
  w.hi = static_cast<int>(state.range(0));
  w.lo = -w.hi / 2;
  w.grid = 4 * w.hi;  // power of two because hi is
  CircleFunction phi = random_symbol(5, w.grid, 9);
  for (auto _ : state)
    benchmark::DoNotOptimize(mskit::interior_commutator_residual(phi, theta, alpha, w));
}
BENCHMARK(BM_DualCommutatorResidual)->RangeMultiplier(2)->Range(256, 1024);

}  // namespace

BENCHMARK_MAIN();
