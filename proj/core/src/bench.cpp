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

#include "permanneal/bench.hpp"

#include <cmath>
#include <numeric>

#include "permanneal/error.hpp"
#include "permanneal/rng.hpp"
#include "permanneal/spectral.hpp"

namespace permanneal {

std::string_view to_string(Solver s) {
  switch (s) {
    case Solver::brute:
      return "brute";
    case Solver::sa:
      return "sa";
    case Solver::schrodinger:
      return "schrodinger";
    case Solver::trotter:
      return "trotter";
  }
  return "unknown";
}

Solver parse_solver(std::string_view name) {
  if (name == "brute") return Solver::brute;
  if (name == "sa") return Solver::sa;
  if (name == "schrodinger") return Solver::schrodinger;
  if (name == "trotter") return Solver::trotter;
  throw ValidationError("unknown solver '" + std::string(name) +
                        "' (expected brute, sa, schrodinger or trotter)");
}

namespace {

int model_dim(int n, Formulation f) { return f == Formulation::inserted ? (n - 1) * (n - 1) : n * n; }

}  // namespace

void ExperimentSpec::validate() const {
  if (n < 1) throw ValidationError("n must be positive");
  if (num_instances < 1) throw ValidationError("the experiment has no instances");
  if (formulations.empty()) throw ValidationError("no formulations selected");
  if (scales.empty()) throw ValidationError("no penalty scales given");
  for (double s : scales) {
    if (!(s > 0.0) || !std::isfinite(s)) throw ValidationError("penalty scales must be positive");
  }
  if (!(sparsity >= 0.0 && sparsity < 1.0)) throw ValidationError("sparsity must lie in [0, 1)");
  if (gap_samples < 2) throw ValidationError("gap_samples must be at least 2");
  if (n > kMaxBruteForceN) {
    throw SizeCapError("f_opt is computed by enumeration, limited to n <= " +
                       std::to_string(kMaxBruteForceN));
  }
  for (Formulation f : formulations) {
    if (f == Formulation::inserted && n < 2) {
      throw ValidationError("the inserted formulation requires n >= 2");
    }
    const int dim = model_dim(n, f);
    switch (solver) {
      case Solver::brute:
        if (dim > kMaxExhaustiveDim) {
          throw SizeCapError("brute solver limited to " + std::to_string(kMaxExhaustiveDim) +
                             " variables; " + std::string(to_string(f)) + " needs " +
                             std::to_string(dim));
        }
        break;
      case Solver::schrodinger:
      case Solver::trotter:
        if (dim > kMaxEvolveQubits) {
          throw SizeCapError("state-vector solvers limited to " +
                             std::to_string(kMaxEvolveQubits) + " qubits; " +
                             std::string(to_string(f)) + " needs " + std::to_string(dim));
        }
        break;
      case Solver::sa:
        break;
    }
    if (compute_gap && dim > kMaxHamiltonianQubits) {
      throw SizeCapError("spectral gaps limited to " + std::to_string(kMaxHamiltonianQubits) +
                         " qubits; " + std::string(to_string(f)) + " needs " +
                         std::to_string(dim));
    }
  }
  if (params.shots < 1 || params.runs < 1 || params.sweeps < 1 || params.steps < 1 ||
      params.slices < 1 || !(params.tau > 0.0)) {
    throw ValidationError("solver parameters must be positive");
  }
}

QapInstance generate_instance(int n, std::uint64_t seed, std::uint64_t index, double sparsity) {
  if (n < 1) throw ValidationError("n must be positive");
  if (!(sparsity >= 0.0 && sparsity < 1.0)) throw ValidationError("sparsity must lie in [0, 1)");
  const int dim = n * n;
  Rng rng(derive_seed(seed, index));
  Eigen::MatrixXd W(dim, dim);
  Eigen::VectorXd c(dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) W(i, j) = rng.uniform(-1.0, 1.0);
  }
  for (int i = 0; i < dim; ++i) c[i] = rng.uniform(-1.0, 1.0);

  const std::size_t total = static_cast<std::size_t>(dim) * dim + dim;
  const auto zeros = static_cast<std::size_t>(std::floor(sparsity * static_cast<double>(total)));
  if (zeros > 0) {
    std::vector<std::size_t> positions(total);
    std::iota(positions.begin(), positions.end(), 0);
    for (std::size_t k = 0; k < zeros; ++k) {
      std::swap(positions[k], positions[k + rng.below(total - k)]);
      const std::size_t p = positions[k];
      const std::size_t w_entries = static_cast<std::size_t>(dim) * dim;
      if (p < w_entries) {
        W(static_cast<Eigen::Index>(p / dim), static_cast<Eigen::Index>(p % dim)) = 0.0;
      } else {
        c[static_cast<Eigen::Index>(p - w_entries)] = 0.0;
      }
    }
  }
  return QapInstance(n, std::move(W), std::move(c));
}

std::vector<QapInstance> generate_instances(const ExperimentSpec& spec) {
  std::vector<QapInstance> out;
  out.reserve(spec.num_instances);
  for (int k = 0; k < spec.num_instances; ++k) {
    out.push_back(generate_instance(spec.n, spec.seed, static_cast<std::uint64_t>(k),
                                    spec.sparsity));
  }
  return out;
}

SampleSet solve_qubo(const QuboModel& model, Solver solver, const SolverParams& params,
                     std::uint64_t seed, std::size_t workers) {
  SampleSet samples;
  switch (solver) {
    case Solver::brute:
      samples = exhaustive_minimizers(model, workers);
      break;
    case Solver::sa:
      samples = simulated_annealing(model, params.sweeps, params.runs, seed,
                                    {params.t_hi, params.t_lo}, workers);
      break;
    case Solver::schrodinger:
    case Solver::trotter: {
      const auto pair = build_hamiltonians(normalize_couplings(to_spin(model)));
      const auto sched = AnnealSchedule::with_pause(params.tau, params.steps, params.pause_fraction);
      const QuantumState state = solver == Solver::schrodinger
                                     ? evolve(pair, sched)
                                     : evolve_trotter(pair, sched, params.slices);
      samples = measure(state, params.shots, seed, model, workers);
      samples.parameters["tau"] = params.tau;
      samples.parameters["pause_fraction"] = params.pause_fraction;
      if (solver == Solver::schrodinger) {
        samples.parameters["steps"] = params.steps;
      } else {
        samples.parameters["slices"] = params.slices;
      }
      break;
    }
  }
  samples.solver = std::string(to_string(solver));
  samples.seed = seed;
  return samples;
}

namespace {

FormulationRecord solve_one(const QapInstance& inst, const PermutationEnergyRange& range,
                            Formulation f, double scale, const ExperimentSpec& spec,
                            std::uint64_t seed) {
  FormulationRecord rec;
  rec.formulation = f;
  rec.scale = scale;
  const QuboModel model = build_qubo(inst, f, scale);
  rec.dim = model.dim;

  const SampleSet samples = solve_qubo(model, spec.solver, spec.params, seed, 1);
  const SampleEntry* top = most_frequent(samples);
  if (top) rec.selected = top->bits.to_string();
  if (top && top->permutation) {
    rec.valid = true;
    rec.energy = permutation_energy(inst, top->permutation->assignment());
    rec.success = attains_optimum(rec.energy, range.best.energy);
  } else {
    rec.energy = range.worst.energy;
  }
  rec.normalized_energy = rec.success ? 0.0 : rec.energy - range.best.energy;
  rec.success_probability = success_probability(samples, inst, range.best.energy).probability;

  if (spec.compute_gap) {
    const auto pair = build_hamiltonians(normalize_couplings(to_spin(model)));
    const auto profile = spectral_gap(pair, spec.gap_samples, 1);
    rec.min_gap = profile.min_gap;
    rec.argmin_t = profile.argmin_t;
  }
  return rec;
}

}  // namespace

BenchReport run_experiment(const ExperimentSpec& spec, std::size_t workers) {
  spec.validate();
  const auto instances = generate_instances(spec);

  BenchReport report;
  report.spec = spec;
  report.instances.resize(instances.size());
  parallel_for(
      instances.size(),
      [&](std::size_t idx) {
        const QapInstance& inst = instances[idx];
        const auto range = permutation_energy_range(inst, 1);
        InstanceRecord& out = report.instances[idx];
        out.index = idx;
        out.f_opt = range.best.energy;
        out.f_worst = range.worst.energy;
        out.optimum = range.best.permutation.assignment();
        const std::uint64_t instance_seed = derive_seed(spec.seed, 0x10000 + idx);
        std::uint64_t stream = 0;
        for (Formulation f : spec.formulations) {
          for (double scale : spec.scales) {
            out.records.push_back(
                solve_one(inst, range, f, scale, spec, derive_seed(instance_seed, stream++)));
          }
        }
      },
      workers);

  for (Formulation f : spec.formulations) {
    for (double scale : spec.scales) {
      Aggregate agg;
      agg.formulation = f;
      agg.scale = scale;
      double gap_sum = 0.0;
      for (const auto& inst : report.instances) {
        for (const auto& rec : inst.records) {
          if (rec.formulation != f || rec.scale != scale) continue;
          ++agg.instances;
          agg.mean_normalized_energy += rec.normalized_energy;
          agg.mean_success_probability += rec.success_probability;
          agg.success_rate += rec.success ? 1.0 : 0.0;
          if (rec.min_gap) gap_sum += *rec.min_gap;
        }
      }
      const double count = static_cast<double>(agg.instances);
      agg.mean_normalized_energy /= count;
      agg.mean_success_probability /= count;
      agg.success_rate /= count;
      if (spec.compute_gap) agg.mean_min_gap = gap_sum / count;
      report.aggregates.push_back(agg);
    }
  }
  double worst = 0.0;
  for (const auto& inst : report.instances) worst += inst.f_worst - inst.f_opt;
  report.mean_worst_normalized = worst / static_cast<double>(report.instances.size());
  return report;
}

ExperimentSpec preset(std::string_view name) {
  ExperimentSpec spec;
  spec.num_instances = 10;
  spec.seed = 2020;
  if (name == "fig2") {
    spec.n = 3;
    spec.scales = {1.0, 2.0, 3.0, 4.0, 5.0};
    spec.solver = Solver::brute;
    spec.compute_gap = true;
  } else if (name == "fig3") {
    spec.n = 3;
    spec.solver = Solver::schrodinger;
    spec.params.tau = 100.0;
    spec.params.steps = 1000;
    spec.params.shots = 500;
  } else if (name == "fig6") {
    spec.n = 4;
    spec.sparsity = 0.5;
    spec.solver = Solver::sa;
    spec.params.runs = 500;
    spec.params.sweeps = 1000;
  } else if (name == "supp-sa") {
    spec.n = 4;
    spec.solver = Solver::sa;
    spec.params.runs = 5000;
    spec.params.sweeps = 100;
  } else {
    throw ValidationError("unknown preset '" + std::string(name) +
                          "' (expected fig2, fig3, fig6 or supp-sa)");
  }
  return spec;
}

std::vector<std::string> preset_names() { return {"fig2", "fig3", "fig6", "supp-sa"}; }

QapInstance mean_color_sorting_instance(const std::vector<Color>& colors, int grid_side) {
  if (grid_side < 1) throw ValidationError("grid side must be positive");
  const auto n = static_cast<std::size_t>(grid_side) * grid_side;
  if (colors.size() != n) {
    throw ValidationError("expected " + std::to_string(n) + " colours for a " +
                          std::to_string(grid_side) + "x" + std::to_string(grid_side) +
                          " grid, got " + std::to_string(colors.size()));
  }
  const auto size = static_cast<Eigen::Index>(n);
  DistanceData dist{Eigen::MatrixXd::Zero(size, size), Eigen::MatrixXd::Zero(size, size),
                    std::nullopt};
  for (Eigen::Index p = 0; p < size; ++p) {
    for (Eigen::Index r = 0; r < size; ++r) {
      if (p == r) continue;
      double sq = 0.0;
      for (int ch = 0; ch < 3; ++ch) {
        const double d = colors[p][ch] - colors[r][ch];
        sq += d * d;
      }
      dist.d1(p, r) = std::sqrt(sq);
      const double dx = static_cast<double>(p % grid_side) - static_cast<double>(r % grid_side);
      const double dy = static_cast<double>(p / grid_side) - static_cast<double>(r / grid_side);
      dist.d2(p, r) = std::sqrt(dx * dx + dy * dy);
    }
  }
  return isometric_cost(dist);
}

}  // namespace permanneal
