#include <benchmark/benchmark.h>

#include "qtmc/gge.hpp"
#include "qtmc/microcanonical.hpp"
#include "qtmc/protocols.hpp"
#include "qtmc/random.hpp"

using namespace qtmc;

static void BM_BuildGGE(benchmark::State& state) {
  const Index dim = state.range(0);
  SeededRng rng(1);
  std::vector<HermitianOperator> charges{random_hermitian(dim, rng),
                                         random_hermitian(dim, rng)};
  ChargeSystem cs(charges, {0.7, -0.4});
  for (auto _ : state) benchmark::DoNotOptimize(build_gge(cs));
}
BENCHMARK(BM_BuildGGE)->Arg(4)->Arg(16)->Arg(64)->Arg(256);

static void BM_SolveBeta(benchmark::State& state) {
  const Index dim = state.range(0);
  SeededRng rng(2);
  std::vector<HermitianOperator> charges{random_hermitian(dim, rng),
                                         random_hermitian(dim, rng)};
  GGEState g = build_gge(ChargeSystem(charges, {0.5, -0.8}));
  std::vector<double> targets{expectation(charges[0], g.state),
                              expectation(charges[1], g.state)};
  for (auto _ : state) benchmark::DoNotOptimize(solve_beta(charges, targets));
}
BENCHMARK(BM_SolveBeta)->Arg(2)->Arg(4)->Arg(6);

static void BM_PartialTrace(benchmark::State& state) {
  const Index copies = state.range(0);
  SeededRng rng(3);
  Index dim = 1;
  for (Index l = 0; l < copies; ++l) dim *= 2;
  DensityMatrix rho = random_density_matrix(dim, rng);
  std::vector<Index> dims(copies, 2);
  for (auto _ : state) benchmark::DoNotOptimize(partial_trace(rho, dims, {0}));
}
BENCHMARK(BM_PartialTrace)->Arg(4)->Arg(6)->Arg(8);

static void BM_JointDiagonalize(benchmark::State& state) {
  const Index copies = state.range(0);
  auto set = composite_average({pauli_x(), pauli_z()}, copies);
  for (auto _ : state) benchmark::DoNotOptimize(joint_diagonalize(set));
}
BENCHMARK(BM_JointDiagonalize)->Arg(2)->Arg(4)->Arg(5);

static void BM_ExtractionProtocol(benchmark::State& state) {
  Matrix b(2, 2);
  b << 1, 0, 0, 0;
  ChargeSystem cs({pauli_z(), HermitianOperator(b)}, {0.7, 0.4});
  BathModel bath(cs, 1);
  DensityMatrix sys = DensityMatrix::maximally_mixed(2);
  double dp = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(extraction_protocol(sys, bath, dp, 100000));
}
BENCHMARK(BM_ExtractionProtocol)->Arg(50)->Arg(200)->Arg(1000);

BENCHMARK_MAIN();
