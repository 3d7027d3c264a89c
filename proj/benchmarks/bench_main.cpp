// Copyright 2026 The permanneal Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "permanneal/anneal.hpp"
#include "permanneal/bench.hpp"
#include "permanneal/eigensolver.hpp"
#include "permanneal/spectral.hpp"

namespace pa = permanneal;

namespace {

pa::Formulation formulation_arg(const benchmark::State& state) {
  return pa::kAllFormulations[state.range(1)];
}

pa::HamiltonianPair pair_of(const pa::QuboModel& m) {
  return pa::build_hamiltonians(pa::normalize_couplings(pa::to_spin(m)));
}

void BM_BruteForceQap(benchmark::State& state) {
  const auto inst = pa::generate_instance(static_cast<int>(state.range(0)), 1, 0);
  for (auto _ : state) benchmark::DoNotOptimize(pa::brute_force_qap(inst, 1));
}
BENCHMARK(BM_BruteForceQap)->DenseRange(3, 7)->Unit(benchmark::kMicrosecond);

void BM_BuildQubo(benchmark::State& state) {
  const auto inst = pa::generate_instance(static_cast<int>(state.range(0)), 1, 0);
  const auto f = formulation_arg(state);
  for (auto _ : state) benchmark::DoNotOptimize(pa::build_qubo(inst, f, 1.0));
  state.SetLabel(std::string(pa::to_string(f)));
}
BENCHMARK(BM_BuildQubo)->ArgsProduct({{3, 5, 8}, {0, 1, 2}})->Unit(benchmark::kMicrosecond);

void BM_ExhaustiveQubo(benchmark::State& state) {
  const auto model = pa::build_qubo(pa::generate_instance(static_cast<int>(state.range(0)), 1, 0),
                                    formulation_arg(state));
  for (auto _ : state) benchmark::DoNotOptimize(pa::exhaustive_minimizers(model, 1));
  state.SetLabel(std::to_string(model.dim) + " bits");
}
BENCHMARK(BM_ExhaustiveQubo)->ArgsProduct({{3, 4}, {0, 2}})->Unit(benchmark::kMillisecond);

void BM_LowestTwo(benchmark::State& state) {
  const auto pair = pair_of(pa::build_inserted(pa::generate_instance(static_cast<int>(state.range(0)), 1, 0)));
  const auto op = pa::interpolated_hamiltonian(pair, 0.6).real_operator();
  const auto dim = Eigen::Index{1} << pair.num_qubits();
  for (auto _ : state) benchmark::DoNotOptimize(pa::lowest_two_eigenvalues(op, dim));
  state.SetLabel(std::to_string(pair.num_qubits()) + " qubits");
}
BENCHMARK(BM_LowestTwo)->Arg(3)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_Evolve(benchmark::State& state) {
  const auto pair = pair_of(pa::build_inserted(pa::generate_instance(static_cast<int>(state.range(0)), 1, 0)));
  pa::AnnealSchedule sched;
  sched.tau = 50.0;
  sched.steps = 500;
  for (auto _ : state) benchmark::DoNotOptimize(pa::evolve(pair, sched));
}
BENCHMARK(BM_Evolve)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_EvolveTrotter(benchmark::State& state) {
  const auto pair = pair_of(pa::build_inserted(pa::generate_instance(static_cast<int>(state.range(0)), 1, 0)));
  pa::AnnealSchedule sched;
  sched.tau = 50.0;
  for (auto _ : state) benchmark::DoNotOptimize(pa::evolve_trotter(pair, sched, 512));
}
BENCHMARK(BM_EvolveTrotter)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_SimulatedAnnealing(benchmark::State& state) {
  const auto model = pa::build_qubo(pa::generate_instance(static_cast<int>(state.range(0)), 1, 0),
                                    formulation_arg(state));
  for (auto _ : state) benchmark::DoNotOptimize(pa::simulated_annealing(model, 100, 500, 7, {}, 1));
  state.SetItemsProcessed(state.iterations() * 500 * 100 * model.dim);
}
BENCHMARK(BM_SimulatedAnnealing)->ArgsProduct({{4, 6}, {0, 2}})->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
