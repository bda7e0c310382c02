#include <benchmark/benchmark.h>

#include <numbers>
#include <vector>

#include "ringqed/correlation.hpp"
#include "ringqed/experiment.hpp"
#include "ringqed/lindblad.hpp"
#include "ringqed/model.hpp"

using namespace ringqed;

namespace {

SystemParams fringe_point() {
  SystemParams p;
  p.J = 2.0;
  p.phi = std::numbers::pi / 2.0;
  return p;
}

LindbladGenerator full_generator(const SystemParams& p, std::size_t n_max) {
  const auto s = build_space(ModelKind::full_lab, n_max);
  return LindbladGenerator(full_hamiltonian(p, s), collapse_operators(p, s));
}

void BM_GeneratorApply(benchmark::State& state) {
  const auto n_max = static_cast<std::size_t>(state.range(0));
  const LindbladGenerator gen = full_generator(fringe_point(), n_max);
  const auto s = build_space(ModelKind::full_lab, n_max);
  const ComplexMatrix rho = initial_left(s).matrix();
  ComplexMatrix out(rho.rows(), rho.cols());
  for (auto _ : state) {
    gen.apply(rho, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_GeneratorApply)->Arg(1)->Arg(2)->Arg(3);

void BM_Evolve(benchmark::State& state) {
  const SystemParams p = fringe_point();
  const LindbladGenerator gen = full_generator(p, 2);
  const auto s = build_space(ModelKind::full_lab, 2);
  for (auto _ : state) {
    DensityMatrix last = initial_left(s);
    evolve(initial_left(s), gen, EvolutionSpec{{0.0, 5.0}}, [&](double, const DensityMatrix& r) { last = r; });
    benchmark::DoNotOptimize(last.matrix().data());
  }
}
BENCHMARK(BM_Evolve)->Unit(benchmark::kMillisecond);

void BM_SteadyNullspace(benchmark::State& state) {
  const LindbladGenerator gen = full_generator(fringe_point(), static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(steady_state(gen));
}
BENCHMARK(BM_SteadyNullspace)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_SteadyMirrorSector(benchmark::State& state) {
  const auto n_max = static_cast<std::size_t>(state.range(0));
  const LindbladGenerator gen = full_generator(fringe_point(), n_max);
  const std::vector<std::size_t> perm = mirror_permutation(build_space(ModelKind::full_lab, n_max));
  for (auto _ : state) benchmark::DoNotOptimize(symmetric_steady_state(gen, perm));
}
BENCHMARK(BM_SteadyMirrorSector)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_G2Series(benchmark::State& state) {
  SystemParams p = fringe_point();
  p.phi = std::numbers::pi;
  const SteadyOutcome ss = full_steady_state(p, 3, false);
  const LindbladGenerator gen = full_generator(p, 3);
  const std::vector<double> tau = default_tau_grid();
  for (auto _ : state) benchmark::DoNotOptimize(g2_numeric(gen, ss.rho, Mode::CW, tau));
}
BENCHMARK(BM_G2Series)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
