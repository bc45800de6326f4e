// Parallel kernels against their serial references.

#include <benchmark/benchmark.h>

#include "sygr/bootstrap.hpp"
#include "sygr/kde.hpp"
#include "sygr/synth.hpp"
#include "support.hpp"

namespace {

using namespace sygr;

std::vector<StudentRecord> panel(std::size_t per_cohort) {
  auto spec = testing::panel_spec(testing::reference_matrix(), per_cohort, 1);
  spec.horizon_year = 2020;
  return generate_panel(spec).records;
}

const EstimatorSpec kFull{EstimatorKind::MarkovFull, {}, 2020, false};

void BM_Bootstrap(benchmark::State& state) {
  const auto rs = panel(static_cast<std::size_t>(state.range(0)));
  const BootstrapConfig cfg{1000, 7, 0.95};
  for (auto _ : state) benchmark::DoNotOptimize(bootstrap_replicates(rs, kFull, cfg));
  state.SetItemsProcessed(state.iterations() * 1000);
}

void BM_BootstrapReference(benchmark::State& state) {
  const auto rs = panel(static_cast<std::size_t>(state.range(0)));
  const BootstrapConfig cfg{1000, 7, 0.95};
  for (auto _ : state) benchmark::DoNotOptimize(bootstrap_replicates_reference(rs, kFull, cfg));
  state.SetItemsProcessed(state.iterations() * 1000);
}

std::vector<double> ensemble(std::size_t n) {
  const auto rs = panel(300);
  return bootstrap(rs, kFull, {n, 9, 0.95}).ensemble;
}

void BM_Kde(benchmark::State& state) {
  const auto values = ensemble(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kde(values));
}

void BM_KdeSerial(benchmark::State& state) {
  const auto values = ensemble(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kde_serial(values));
}

}  // namespace

BENCHMARK(BM_Bootstrap)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BootstrapReference)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Kde)->Arg(1000)->Arg(8000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KdeSerial)->Arg(1000)->Arg(8000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
