#include <benchmark/benchmark.h>

#include "varcomplex/cohomlab.hpp"

using namespace varcomplex;

namespace {

Execution mode_of(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::Serial : Execution::Parallel;
}

void BM_OperatorMatrix(benchmark::State& state) {
  auto b = make_bundle({"t", "x"}, {"u"});
  const TruncationSpec spec{2, 3, 1};
  for (auto _ : state) {
    auto m = operator_matrix(Operator::DH, b, spec, 1, 1, mode_of(state));
    benchmark::DoNotOptimize(m.matrix.cols.data());
  }
  state.SetLabel(state.range(0) == 0 ? "serial" : "parallel");
}

void BM_DeltaMatrix(benchmark::State& state) {
  auto b = make_bundle({"x"}, {"u"});
  const TruncationSpec spec{3, 3, 2};
  for (auto _ : state) {
    auto m = operator_matrix(Operator::Delta, b, spec, 0, 1, mode_of(state));
    benchmark::DoNotOptimize(m.matrix.cols.data());
  }
  state.SetLabel(state.range(0) == 0 ? "serial" : "parallel");
}

void BM_PropertySuite(benchmark::State& state) {
  for (auto _ : state) {
    auto r = property_suite(1, 50, mode_of(state));
    benchmark::DoNotOptimize(r.identities.data());
  }
  state.SetLabel(state.range(0) == 0 ? "serial" : "parallel");
}

}  // namespace

BENCHMARK(BM_OperatorMatrix)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DeltaMatrix)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PropertySuite)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
