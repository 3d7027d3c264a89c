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

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "permanneal/eigensolver.hpp"
#include "permanneal/parallel.hpp"
#include "permanneal/qubo.hpp"
#include "permanneal/spectral.hpp"

namespace permanneal {

/// Default register cap for state-vector evolution.
inline constexpr int kMaxEvolveQubits = 12;

/// Norm drift above which the state is renormalized after a step.
inline constexpr double kRenormalizeThreshold = 1e-10;

struct QuantumState {
  int num_qubits = 0;
  std::vector<std::complex<double>> amplitudes;

  /// |+>^m: all amplitudes equal to 2^(-m/2).
  static QuantumState uniform(int num_qubits);
  static QuantumState basis(int num_qubits, std::uint64_t index);

  double norm() const;
  std::vector<double> probabilities() const;
};

/// Total time tau (hbar = 1) and the path u(s), s = t / tau, given as
/// piecewise-linear breakpoints (s_k, u_k).
struct AnnealSchedule {
  double tau = 100.0;
  std::vector<std::pair<double, double>> path{{0.0, 0.0}, {1.0, 1.0}};
  /// Integration steps for evolve().
  int steps = 1000;

  /// Linear ramp with a plateau at u = 0.5 covering `pause_fraction` of the
  /// total time, centred in the middle of the anneal.
  static AnnealSchedule with_pause(double tau, int steps, double pause_fraction);

  /// Throws ValidationError unless the path is monotone from (0,0) to (1,1)
  /// and tau, steps are positive.
  void validate() const;
  double u_at(double s) const;
};

struct EvolveOptions {
  int max_qubits = kMaxEvolveQubits;
  PropagatorOptions propagator{};
  /// Called after every step with (step index, s at step end, state).
  std::function<void(int, double, const QuantumState&)> observer;
};

/// Integrates i d/dt psi = H(u(t/tau)) psi from |+>^m. Each step of width
/// tau/steps applies exp(-i H(u_mid) dt) through a Krylov propagator.
/// Throws SolverError on non-finite amplitudes.
QuantumState evolve(const HamiltonianPair& pair, const AnnealSchedule& sched,
                    const EvolveOptions& opts = {});

/// Piecewise-constant evolution over `slices` segments, each applying the
/// symmetric splitting exp(-iA dt/2) exp(-iB dt) exp(-iA dt/2) with
/// A = (1-u) H_B and B = u H_P. sched.steps is ignored.
QuantumState evolve_trotter(const HamiltonianPair& pair, const AnnealSchedule& sched, int slices,
                            const EvolveOptions& opts = {});

struct SampleEntry {
  BinaryVector bits;
  double energy = 0.0;
  std::uint64_t count = 0;
  bool valid = false;
  std::optional<PermutationMatrix> permutation;
};

/// Histogram of states. Entries are unique by bits and sorted by
/// (energy, bits).
struct SampleSet {
  std::vector<SampleEntry> entries;
  std::uint64_t total = 0;
  /// Producer and its parameters, carried into exports.
  std::string solver;
  std::uint64_t seed = 0;
  nlohmann::json parameters = nlohmann::json::object();
};

/// Builds a SampleSet from (state, count) pairs, merging duplicates and
/// attaching model energies and decode results.
SampleSet make_sample_set(const QuboModel& model,
                          const std::vector<std::pair<BinaryVector, std::uint64_t>>& counts);

/// Draws `shots` basis states from |amplitudes|^2. Shots are drawn in fixed
/// chunks with per-chunk generators, so the result depends only on `seed`.
SampleSet measure(const QuantumState& state, std::uint64_t shots, std::uint64_t seed,
                  const QuboModel& model, std::size_t workers = default_workers());

struct TemperatureSchedule {
  /// Defaults: T_hi = largest single-flip |dE| over sampled states,
  /// T_lo = 1e-3 * T_hi.
  std::optional<double> t_hi;
  std::optional<double> t_lo;
};

/// Largest |dE| of a single bit flip seen over `samples` random states.
double estimate_max_flip_delta(const QuboModel& model, std::uint64_t seed, int samples = 64);

/// Single-bit-flip Metropolis, one sweep visits every variable in order, with
/// geometric cooling from T_hi to T_lo across the sweeps. Run r starts from
/// a uniform random state drawn from its own generator derive_seed(seed, r).
SampleSet simulated_annealing(const QuboModel& model, int sweeps, int runs, std::uint64_t seed,
                              const TemperatureSchedule& schedule = {},
                              std::size_t workers = default_workers());

/// Metropolis at a fixed temperature; returns the visit histogram of the
/// state after each sweep.
SampleSet metropolis_fixed_temperature(const QuboModel& model, double temperature, int sweeps,
                                       std::uint64_t seed);

/// Largest QUBO dimension accepted by exhaustive_minimizers.
inline constexpr int kMaxExhaustiveDim = 24;

/// All global minimizers of the model over {0,1}^dim (count 1 each).
SampleSet exhaustive_minimizers(const QuboModel& model, std::size_t workers = default_workers());

struct SuccessProbability {
  double probability = 0.0;
  std::uint64_t optimal_count = 0;
  std::uint64_t total = 0;
  /// Random guessing succeeds with probability 1 / n!.
  std::uint64_t random_guess_denominator = 1;

  double random_guess() const { return 1.0 / static_cast<double>(random_guess_denominator); }
};

/// Fraction of samples whose decoded permutation attains f_opt. f_opt is
/// computed by brute force when not supplied.
SuccessProbability success_probability(const SampleSet& samples, const QapInstance& inst,
                                       std::optional<double> f_opt = std::nullopt);

/// Whether `energy` equals f_opt up to floating-point round-off.
bool attains_optimum(double energy, double f_opt);

/// Most frequent entry; ties go to the lower energy, then lexicographically
/// smaller bits. nullptr for an empty set.
const SampleEntry* most_frequent(const SampleSet& samples);

/// Index of the most probable basis state; ties go to the lower index.
std::uint64_t most_probable_state(const QuantumState& state);

struct HistogramBin {
  double energy = 0.0;  // bin centre
  std::uint64_t count = 0;
  std::uint64_t valid_count = 0;
};

/// Uniform energy bins over [min, max] of the sample energies.
std::vector<HistogramBin> energy_histogram(const SampleSet& samples, int bins = 50);

}  // namespace permanneal
