#include <benchmark/benchmark.h>

#include "dualconv/levy.hpp"

using namespace dualconv;

namespace {

Execution mode(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::serial : Execution::parallel;
}

void moment_matrix_assembly(benchmark::State& state) {
  auto dsg = builtin::free_group(2);
  const auto psi = functional_from_triple(random_generator_triple("freegroup", 2, 2, 1), 4).psi;
  const ConvolutionSemigroup sg(ProductKind::free, dsg, psi);
  const auto phi = sg.at(0.5);
  const auto basis = moment_basis(dsg->algebra(), 4);
  moment_matrix(phi, basis, true, Execution::serial);  // warm the memo
  for (auto _ : state) benchmark::DoNotOptimize(moment_matrix(phi, basis, true, mode(state)).entries);
  state.SetLabel(mode(state) == Execution::serial ? "serial" : "parallel");
}

void exponential_table(benchmark::State& state) {
  auto dsg = builtin::primitive(2);
  const auto psi = functional_from_gns(dsg->algebra(), random_gns_triple(2, 2, 3));
  const auto words = dsg->presentation().normal_words(4);
  std::vector<double> ts;
  for (int i = 1; i <= 16; ++i) ts.push_back(0.125 * i);
  for (auto _ : state) {
    const ConvolutionSemigroup sg(ProductKind::monotone, dsg, psi);
    benchmark::DoNotOptimize(exp_table(sg, ts, words, mode(state)));
  }
  state.SetLabel(mode(state) == Execution::serial ? "serial" : "parallel");
}

}  // namespace

BENCHMARK(moment_matrix_assembly)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(exponential_table)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
