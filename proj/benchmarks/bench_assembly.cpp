#include <benchmark/benchmark.h>

#include "htq/assembly.hpp"
#include "htq/mesh.hpp"
#include "htq/solver.hpp"
#include "htq/spectral.hpp"

namespace {

void BM_AssembleAllDyadic(benchmark::State& state) {
  const auto K = static_cast<int>(state.range(0));
  const htq::TemporalMesh mesh = htq::TemporalMesh::dyadic(6, 10.0);
  const htq::DegreeVector deg = htq::DegreeVector::uniform(6, 2);
  const htq::DofMap dofs(mesh, deg);
  const htq::QuadConfig q = htq::QuadConfig::with_K(K, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(htq::assemble_all(mesh, deg, dofs, q, 1));
  }
}
BENCHMARK(BM_AssembleAllDyadic)->Arg(4)->Arg(12)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_AssembleHp(benchmark::State& state) {
  const auto N = static_cast<int>(state.range(0));
  const htq::TemporalMesh mesh = htq::TemporalMesh::geometric(N, 1.0, 0.17);
  const htq::DegreeVector deg = htq::DegreeVector::linear_ramp(N);
  const htq::DofMap dofs(mesh, deg);
  const htq::QuadConfig q = htq::QuadConfig::with_K(20, N);
  for (auto _ : state) {
    benchmark::DoNotOptimize(htq::assemble_all(mesh, deg, dofs, q, 1));
  }
  state.counters["M"] = dofs.num_dofs();
}
BENCHMARK(BM_AssembleHp)->DenseRange(2, 10, 4)->Unit(benchmark::kMillisecond);

void BM_LocalB(benchmark::State& state) {
  const htq::TemporalMesh mesh = htq::TemporalMesh::uniform(8, 1.0);
  const htq::DegreeVector deg = htq::DegreeVector::uniform(8, static_cast<int>(state.range(0)));
  const htq::QuadConfig q = htq::QuadConfig::defaults(deg.max());
  for (auto _ : state) {
    benchmark::DoNotOptimize(htq::local_B(3, 3, mesh, deg, q));
  }
}
BENCHMARK(BM_LocalB)->Arg(1)->Arg(4)->Arg(10)->Unit(benchmark::kMicrosecond);

void BM_Oracle(benchmark::State& state) {
  const htq::TemporalMesh mesh = htq::TemporalMesh::dyadic(6, 10.0);
  const htq::DegreeVector deg = htq::DegreeVector::uniform(6, 2);
  const htq::DofMap dofs(mesh, deg);
  htq::SpectralConfig cfg;
  cfg.K_F = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(htq::oracle_matrix(htq::MatrixKind::B, mesh, dofs, cfg));
  }
}
BENCHMARK(BM_Oracle)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

void BM_LuSolve(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  Eigen::MatrixXd a = Eigen::MatrixXd::Random(n, n);
  a.diagonal().array() += static_cast<double>(n);
  const Eigen::VectorXd b = Eigen::VectorXd::Ones(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(htq::lu_solve(a, b));
  }
}
BENCHMARK(BM_LuSolve)->Arg(56)->Arg(200)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
