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

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "permanneal/anneal.hpp"
#include "permanneal/qap.hpp"
#include "permanneal/qubo.hpp"

namespace permanneal {

enum class Solver { brute, sa, schrodinger, trotter };

std::string_view to_string(Solver s);
Solver parse_solver(std::string_view name);

struct SolverParams {
  // Quantum simulation
  double tau = 100.0;
  int steps = 1000;
  int slices = 512;
  double pause_fraction = 0.0;
  std::uint64_t shots = 500;
  // Simulated annealing
  int sweeps = 1000;
  int runs = 500;
  std::optional<double> t_hi;
  std::optional<double> t_lo;
};

/// One study: a seeded suite of random instances solved under every
/// (formulation, scale) combination.
struct ExperimentSpec {
  int n = 3;
  int num_instances = 10;
  std::uint64_t seed = 1;
  std::vector<Formulation> formulations{Formulation::baseline, Formulation::row_wise,
                                        Formulation::inserted};
  std::vector<double> scales{1.0};
  /// Fraction of the n^4 + n^2 entries of (W, c) forced to zero.
  double sparsity = 0.0;
  Solver solver = Solver::brute;
  SolverParams params;
  bool compute_gap = false;
  int gap_samples = 64;

  /// Throws ValidationError for empty lists, out-of-range values, or a
  /// solver that cannot handle the requested sizes (SizeCapError).
  void validate() const;
};

/// Instance `index` of a seeded family: W, c i.i.d. uniform on [-1, 1], then
/// exactly floor(sparsity * (n^4 + n^2)) entries zeroed, chosen uniformly
/// without replacement.
QapInstance generate_instance(int n, std::uint64_t seed, std::uint64_t index,
                              double sparsity = 0.0);

std::vector<QapInstance> generate_instances(const ExperimentSpec& spec);

struct FormulationRecord {
  Formulation formulation = Formulation::baseline;
  double scale = 1.0;
  int dim = 0;
  /// Bits of the most frequent sample.
  std::string selected;
  bool valid = false;
  /// QAP energy of the selected permutation, or of the worst permutation
  /// when the selection is infeasible.
  double energy = 0.0;
  double normalized_energy = 0.0;
  bool success = false;
  double success_probability = 0.0;
  std::optional<double> min_gap;
  std::optional<double> argmin_t;
};

struct InstanceRecord {
  std::size_t index = 0;
  double f_opt = 0.0;
  double f_worst = 0.0;
  std::vector<int> optimum;
  std::vector<FormulationRecord> records;
  /// Energy supplied by an external baseline solver, if any.
  std::optional<double> external_baseline_energy;
};

struct Aggregate {
  Formulation formulation = Formulation::baseline;
  double scale = 1.0;
  std::size_t instances = 0;
  double mean_normalized_energy = 0.0;
  double mean_success_probability = 0.0;
  /// Fraction of instances whose selected sample is optimal.
  double success_rate = 0.0;
  std::optional<double> mean_min_gap;
};

struct BenchReport {
  ExperimentSpec spec;
  std::vector<InstanceRecord> instances;
  std::vector<Aggregate> aggregates;
  /// Mean normalized energy of the worst permutation (reference column).
  double mean_worst_normalized = 0.0;
};

/// Runs every instance independently (in parallel) and merges by index.
BenchReport run_experiment(const ExperimentSpec& spec, std::size_t workers = default_workers());

/// Solves one QUBO with the configured solver and returns its samples.
SampleSet solve_qubo(const QuboModel& model, Solver solver, const SolverParams& params,
                     std::uint64_t seed, std::size_t workers = default_workers());

/// Named protocol presets: "fig2", "fig3", "fig6", "supp-sa".
ExperimentSpec preset(std::string_view name);
std::vector<std::string> preset_names();

using Color = std::array<double, 3>;

/// Sorting items into a grid_side x grid_side grid by colour: d1 is the
/// Euclidean distance between colours, d2 the Euclidean distance between grid
/// cells, where item/cell p sits at (p % grid_side, p / grid_side).
QapInstance mean_color_sorting_instance(const std::vector<Color>& colors, int grid_side);

}  // namespace permanneal
