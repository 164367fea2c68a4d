#include <benchmark/benchmark.h>

#include "pff/assembly.hpp"
#include "pff/mesh.hpp"

#ifdef PFF_HAVE_OPENMP
#include <omp.h>
#endif

namespace {

struct Fixture {
  explicit Fixture(int n) : mesh(pff::build_notched_square(n, n, 1.0, true)), assembler(mesh) {
    const auto nn = static_cast<Eigen::Index>(mesh.num_nodes());
    u = Eigen::VectorXd::Zero(2 * nn);
    d = Eigen::VectorXd::Zero(nn);
    for (Eigen::Index i = 0; i < nn; ++i) {
      const auto& x = mesh.nodes[i].x;
      u[2 * i] = 1e-3 * x[0] * x[1];
      u[2 * i + 1] = 2e-3 * x[1] - 1e-3 * x[0] * x[0];
      d[i] = 0.5 * x[0] * (1.0 - x[1]);
    }
    gp.resize(assembler.num_gauss_points());
    assembler.update_gauss_points(u, params, gp, pff::Exec::serial);
  }
  pff::Mesh mesh;
  pff::Assembler assembler;
  pff::MaterialParams params;
  Eigen::VectorXd u;
  Eigen::VectorXd d;
  std::vector<pff::GaussPointState> gp;
};

void momentum(benchmark::State& state, pff::Exec exec) {
  Fixture f(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto sys = f.assembler.assemble_momentum(f.u, f.d, f.params, nullptr, exec);
    benchmark::DoNotOptimize(sys.residual.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(f.mesh.num_elements()));
}

void evolution(benchmark::State& state, pff::Exec exec) {
  Fixture f(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto sys = f.assembler.assemble_evolution(f.d, f.d, f.gp, f.params, {}, exec);
    benchmark::DoNotOptimize(sys.residual.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(f.mesh.num_elements()));
}

void BM_MomentumSerial(benchmark::State& s) { momentum(s, pff::Exec::serial); }
void BM_MomentumParallel(benchmark::State& s) { momentum(s, pff::Exec::parallel); }
void BM_EvolutionSerial(benchmark::State& s) { evolution(s, pff::Exec::serial); }
void BM_EvolutionParallel(benchmark::State& s) { evolution(s, pff::Exec::parallel); }

}  // namespace

BENCHMARK(BM_MomentumSerial)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MomentumParallel)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EvolutionSerial)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EvolutionParallel)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

int main(int argc, char** argv) {
#ifdef PFF_HAVE_OPENMP
  benchmark::AddCustomContext("omp_max_threads", std::to_string(omp_get_max_threads()));
#endif
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
