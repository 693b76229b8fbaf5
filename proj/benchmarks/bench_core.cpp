#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "hlab/bounds.hpp"
#include "hlab/coupling.hpp"
#include "hlab/integrator.hpp"
#include "hlab/scenario.hpp"

namespace {

hlab::Scenario reflected_ou() {
  hlab::Scenario s;
  s.dim = 1;
  s.op = hlab::MonotoneOperator::normal_cone(
      hlab::ConvexSet::halfspace(Eigen::VectorXd::Ones(1), 0.0));
  s.drift = hlab::DriftSpec::linear(-Eigen::MatrixXd::Identity(1, 1))
                .with_constants(1.0, 0.0, 2.0, 2.0);
  s.diffusion = hlab::DiffusionSpec(Eigen::MatrixXd::Identity(1, 1));
  s.c_sigma = 1.5;
  return s;
}

void BM_ResolventHalfspace(benchmark::State& state) {
  const auto scn = reflected_ou();
  Eigen::VectorXd x(1), out(1);
  x << -0.3;
  for (auto _ : state) {
    scn.op.resolvent_into(1e-3, x, out);
    benchmark::DoNotOptimize(out);
  }
}
BENCHMARK(BM_ResolventHalfspace);

void BM_SimulatePathReflectedOU(benchmark::State& state) {
  const auto scn = reflected_ou();
  const auto steps = static_cast<double>(state.range(0));
  Eigen::VectorXd x0(1);
  x0 << 1.0;
  std::uint64_t stream = 0;
  for (auto _ : state) {
    auto terminal = hlab::simulate_terminal(scn, x0, 1.0, 1.0 / steps,
                                            hlab::NoiseStream(1, stream++));
    benchmark::DoNotOptimize(terminal);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulatePathReflectedOU)->Arg(1000)->Arg(10000);

void BM_SimulateCoupled(benchmark::State& state) {
  const auto scn = reflected_ou();
  const auto steps = static_cast<double>(state.range(0));
  Eigen::VectorXd x(1), y(1);
  x << 1.0;
  y << 0.0;
  std::uint64_t stream = 0;
  for (auto _ : state) {
    auto summary = hlab::simulate_coupled_summary(scn, x, y, 1.0, 1.0 / steps,
                                                  hlab::NoiseStream(1, stream++),
                                                  hlab::CouplingMode::SingularEta);
    benchmark::DoNotOptimize(summary);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateCoupled)->Arg(1000)->Arg(10000);

void BM_ThetaQuadrature(benchmark::State& state) {
  auto scn = reflected_ou();
  scn.drift.with_constants(1.0, 0.5, 2.0, 2.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(hlab::theta_quadrature(scn, 1.0, 1024));
  }
}
BENCHMARK(BM_ThetaQuadrature);

}  // namespace

BENCHMARK_MAIN();
