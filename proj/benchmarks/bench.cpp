#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "fracfem/fem_assembly.hpp"
#include "fracfem/linear_solvers.hpp"

using namespace fracfem;

namespace {

const FracOrder kAlpha(1.5);

void BM_AssembleStiffness(benchmark::State& state) {
  const UniformMesh mesh(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(assemble_stiffness(mesh, kAlpha));
}
BENCHMARK(BM_AssembleStiffness)->RangeMultiplier(4)->Range(64, 16384);

void BM_ToeplitzFft(benchmark::State& state) {
  const UniformMesh mesh(static_cast<int>(state.range(0)));
  const auto k = assemble_stiffness(mesh, kAlpha);
  const CirculantEmbedding c(k);
  const Eigen::VectorXd x = Eigen::VectorXd::Ones(mesh.dim());
  for (auto _ : state) benchmark::DoNotOptimize(c.apply(x));
}
BENCHMARK(BM_ToeplitzFft)->RangeMultiplier(4)->Range(64, 16384);

void BM_ToeplitzDense(benchmark::State& state) {
  const UniformMesh mesh(static_cast<int>(state.range(0)));
  const auto k = assemble_stiffness(mesh, kAlpha);
  const Eigen::VectorXd x = Eigen::VectorXd::Ones(mesh.dim());
  for (auto _ : state) benchmark::DoNotOptimize(k.apply_dense(x));
}
BENCHMARK(BM_ToeplitzDense)->RangeMultiplier(4)->Range(64, 4096);

SystemOperator be_system(int m, double tau) {
  const UniformMesh mesh(m);
  return SystemOperator(1.0, tau, assemble_mass(mesh), assemble_stiffness(mesh, kAlpha));
}

void BM_DenseFactor(benchmark::State& state) {
  const auto op = be_system(static_cast<int>(state.range(0)), 1e-3);
  for (auto _ : state) benchmark::DoNotOptimize(factor_dense(op));
}
BENCHMARK(BM_DenseFactor)->RangeMultiplier(2)->Range(128, 2048)->Unit(benchmark::kMillisecond);

void BM_DenseSolve(benchmark::State& state) {
  const auto op = be_system(static_cast<int>(state.range(0)), 1e-3);
  const auto f = factor_dense(op);
  const Eigen::VectorXd b = Eigen::VectorXd::Ones(op.dim());
  for (auto _ : state) benchmark::DoNotOptimize(f.solve(b));
}
BENCHMARK(BM_DenseSolve)->RangeMultiplier(2)->Range(128, 2048);

void BM_Gmres(benchmark::State& state) {
  const auto op = be_system(static_cast<int>(state.range(0)), 1e-3);
  const Eigen::VectorXd b = Eigen::VectorXd::Ones(op.dim());
  for (auto _ : state) benchmark::DoNotOptimize(gmres(op, b, SolverOptions{}));
}
BENCHMARK(BM_Gmres)->RangeMultiplier(4)->Range(128, 8192)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
