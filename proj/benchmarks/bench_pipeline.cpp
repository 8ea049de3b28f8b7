#include <benchmark/benchmark.h>

#include "cvqt/analysis.hpp"
#include "cvqt/fock_oracle.hpp"
#include "cvqt/nongaussian.hpp"
#include "cvqt/sweep.hpp"
#include "cvqt/teleportation.hpp"

namespace {

cvqt::OperationSpec spec_for(int which, double t) {
  switch (which) {
    case 0: return cvqt::OperationSpec::subtraction(t);
    case 1: return cvqt::OperationSpec::addition(t);
    default: return cvqt::OperationSpec::catalysis(t);
  }
}

void BM_BuildNGState(benchmark::State& state) {
  const auto spec = spec_for(static_cast<int>(state.range(0)), 0.9);
  const cvqt::SeedDescriptor seed{cvqt::SeedFamily::TMSV, 0.5, 0.5};
  for (auto _ : state) benchmark::DoNotOptimize(cvqt::build_ng_state(seed, spec));
}
BENCHMARK(BM_BuildNGState)->Arg(0)->Arg(1)->Arg(2);

void BM_Fidelity(benchmark::State& state) {
  const auto ng = cvqt::build_ng_state({cvqt::SeedFamily::TMSV, 0.5, 0.5}, spec_for(static_cast<int>(state.range(0)), 0.9));
  for (auto _ : state) benchmark::DoNotOptimize(cvqt::fidelity(ng));
}
BENCHMARK(BM_Fidelity)->Arg(0)->Arg(1)->Arg(2);

void BM_Covariance(benchmark::State& state) {
  const auto ng = cvqt::build_ng_state({cvqt::SeedFamily::TMSV, 0.5, 0.5}, spec_for(static_cast<int>(state.range(0)), 0.9));
  for (auto _ : state) benchmark::DoNotOptimize(cvqt::covariance_of(ng));
}
BENCHMARK(BM_Covariance)->Arg(0)->Arg(1)->Arg(2);

void BM_SweepPoint(benchmark::State& state) {
  const auto spec = spec_for(static_cast<int>(state.range(0)), 0.9);
  for (auto _ : state) benchmark::DoNotOptimize(cvqt::evaluate_point({cvqt::SeedFamily::TMST, 0.5, 1.0}, spec));
}
BENCHMARK(BM_SweepPoint)->Arg(0)->Arg(1)->Arg(2);

void BM_OracleSeed(benchmark::State& state) {
  const cvqt::SeedDescriptor seed{cvqt::SeedFamily::TMST, 0.5, 1.0};
  const int cutoff = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(cvqt::oracle::oracle_seed(seed, cutoff));
}
BENCHMARK(BM_OracleSeed)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond);

void BM_OracleFidelity(benchmark::State& state) {
  const auto seed = cvqt::oracle::oracle_seed({cvqt::SeedFamily::TMSV, 0.5, 0.5}, 30);
  const auto ng = cvqt::oracle::oracle_ng(seed.rho, cvqt::OperationSpec::addition(0.9));
  for (auto _ : state) benchmark::DoNotOptimize(cvqt::oracle::oracle_fidelity(ng.rho, {}));
}
BENCHMARK(BM_OracleFidelity)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
