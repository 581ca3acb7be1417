#include <benchmark/benchmark.h>

#include <string>

#include "pjd/expm.hpp"
#include "pjd/generator.hpp"
#include "pjd/moments.hpp"
#include "pjd/simulate.hpp"
#include "pjd/spec_io.hpp"

namespace {

pjd::LevyTriplet example(const char* name) { return pjd::load_spec(std::string(PJD_SPEC_DIR) + "/" + name).triplet(); }

void BM_BuildMatrixInterval(benchmark::State& state) {
  const pjd::LevyTriplet t = example("three_atom.json");
  for (auto _ : state) benchmark::DoNotOptimize(pjd::build_matrix(t, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_BuildMatrixInterval)->Arg(4)->Arg(8)->Arg(16);

void BM_BuildMatrixSimplex(benchmark::State& state) {
  const pjd::LevyTriplet t = example("spt.json");
  for (auto _ : state) benchmark::DoNotOptimize(pjd::build_matrix(t, static_cast<int>(state.range(0))));
  state.counters["basis"] = static_cast<double>(pjd::enumerate_basis(t.space, static_cast<int>(state.range(0))).size());
}
BENCHMARK(BM_BuildMatrixSimplex)->Arg(2)->Arg(4)->Arg(6);

void BM_Expm(benchmark::State& state) {
  const pjd::GeneratorMatrix gm = pjd::build_matrix(example("spt.json"), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(pjd::expm(gm.G));
  state.counters["n"] = static_cast<double>(gm.G.rows());
}
BENCHMARK(BM_Expm)->Arg(2)->Arg(4)->Arg(6)->Arg(8);

void BM_Moment(benchmark::State& state) {
  const pjd::LevyTriplet t = example("type3.json");
  const pjd::MomentEngine eng(t, 6);
  const pjd::Polynomial p = pjd::Polynomial::variable(t.space, 0).pow(6);
  const std::vector<double> x0{0.3};
  for (auto _ : state) benchmark::DoNotOptimize(eng.moment(p, x0, 1.0));
}
BENCHMARK(BM_Moment);

void BM_Simulate(benchmark::State& state) {
  const pjd::LevyTriplet t = example(state.range(0) == 0 ? "reflection.json" : "spt.json");
  pjd::SimConfig c;
  c.x0 = state.range(0) == 0 ? std::vector<double>{0.2} : std::vector<double>{1.0 / 3, 1.0 / 3, 1.0 / 3};
  c.T = 1.0;
  c.dt = 1e-3;
  c.n_paths = 1000;
  c.save_every = 1000;
  c.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(pjd::simulate(t, c));
  state.SetItemsProcessed(state.iterations() * c.n_paths * 1000);
}
BENCHMARK(BM_Simulate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
