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

#include <cmath>
#include <string>

#include "permanneal/anneal.hpp"
#include "permanneal/error.hpp"

namespace permanneal {

QuantumState QuantumState::uniform(int num_qubits) {
  const std::size_t size = std::size_t{1} << num_qubits;
  const double amp = 1.0 / std::sqrt(static_cast<double>(size));
  return QuantumState{num_qubits, std::vector<std::complex<double>>(size, {amp, 0.0})};
}

QuantumState QuantumState::basis(int num_qubits, std::uint64_t index) {
  const std::size_t size = std::size_t{1} << num_qubits;
  if (index >= size) throw ValidationError("basis index outside the register");
  QuantumState s{num_qubits, std::vector<std::complex<double>>(size)};
  s.amplitudes[index] = 1.0;
  return s;
}

double QuantumState::norm() const {
  double sum = 0.0;
  for (const auto& a : amplitudes) sum += std::norm(a);
  return std::sqrt(sum);
}

std::vector<double> QuantumState::probabilities() const {
  std::vector<double> p(amplitudes.size());
  for (std::size_t z = 0; z < amplitudes.size(); ++z) p[z] = std::norm(amplitudes[z]);
  return p;
}

AnnealSchedule AnnealSchedule::with_pause(double tau, int steps, double pause_fraction) {
  if (!(pause_fraction >= 0.0 && pause_fraction < 1.0)) {
    throw ValidationError("pause fraction must lie in [0, 1)");
  }
  AnnealSchedule s;
  s.tau = tau;
  s.steps = steps;
  const double ramp = 0.5 * (1.0 - pause_fraction);
  if (pause_fraction == 0.0) return s;
  s.path = {{0.0, 0.0}, {ramp, 0.5}, {ramp + pause_fraction, 0.5}, {1.0, 1.0}};
  return s;
}

void AnnealSchedule::validate() const {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw ValidationError("tau must be positive");
  if (steps < 1) throw ValidationError("steps must be at least 1");
  if (path.size() < 2) throw ValidationError("an anneal path needs at least two breakpoints");
  if (path.front() != std::pair{0.0, 0.0} || path.back() != std::pair{1.0, 1.0}) {
    throw ValidationError("an anneal path must start at (0,0) and end at (1,1)");
  }
  for (std::size_t k = 1; k < path.size(); ++k) {
    if (!(path[k].first > path[k - 1].first)) {
      throw ValidationError("anneal path times must be strictly increasing");
    }
    if (path[k].second < path[k - 1].second) {
      throw ValidationError("anneal path must be monotone nondecreasing");
    }
  }
}

double AnnealSchedule::u_at(double s) const {
  if (s <= path.front().first) return path.front().second;
  for (std::size_t k = 1; k < path.size(); ++k) {
    if (s <= path[k].first) {
      const auto [s0, u0] = path[k - 1];
      const auto [s1, u1] = path[k];
      return u0 + (u1 - u0) * (s - s0) / (s1 - s0);
    }
  }
  return path.back().second;
}

namespace {

void check_register(const HamiltonianPair& pair, const EvolveOptions& opts) {
  if (pair.num_qubits() > opts.max_qubits) {
    throw SizeCapError("state-vector evolution is limited to " + std::to_string(opts.max_qubits) +
                       " qubits (requested " + std::to_string(pair.num_qubits()) + ")");
  }
}

void settle(QuantumState& state, int step) {
  for (const auto& a : state.amplitudes) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
      throw SolverError("non-finite amplitude after step " + std::to_string(step) +
                        "; reduce the step size");
    }
  }
  const double norm = state.norm();
  if (std::abs(norm - 1.0) > kRenormalizeThreshold) {
    for (auto& a : state.amplitudes) a /= norm;
  }
}

// exp(-i theta H_B) with H_B = -sum sigma_x: a product of single-qubit
// rotations cos(theta) + i sin(theta) sigma_x.
void apply_driver_rotation(std::vector<std::complex<double>>& amps, int num_qubits,
                           double theta) {
  const double c = std::cos(theta);
  const std::complex<double> is(0.0, std::sin(theta));
  for (int q = 0; q < num_qubits; ++q) {
    const std::size_t bit = std::size_t{1} << q;
    for (std::size_t z = 0; z < amps.size(); ++z) {
      if (z & bit) continue;
      const auto a0 = amps[z];
      const auto a1 = amps[z | bit];
      amps[z] = c * a0 + is * a1;
      amps[z | bit] = is * a0 + c * a1;
    }
  }
}

}  // namespace

QuantumState evolve(const HamiltonianPair& pair, const AnnealSchedule& sched,
                    const EvolveOptions& opts) {
  check_register(pair, opts);
  sched.validate();

  QuantumState state = QuantumState::uniform(pair.num_qubits());
  const double dt = sched.tau / sched.steps;
  for (int k = 0; k < sched.steps; ++k) {
    const double s_mid = (k + 0.5) / sched.steps;
    const InterpolatedHamiltonian h(pair, sched.u_at(s_mid));
    krylov_propagate(h.complex_operator(), state.amplitudes, dt, opts.propagator);
    settle(state, k);
    if (opts.observer) opts.observer(k, static_cast<double>(k + 1) / sched.steps, state);
  }
  return state;
}

QuantumState evolve_trotter(const HamiltonianPair& pair, const AnnealSchedule& sched, int slices,
                            const EvolveOptions& opts) {
  check_register(pair, opts);
  sched.validate();
  if (slices < 1) throw ValidationError("trotterized evolution needs at least one slice");

  QuantumState state = QuantumState::uniform(pair.num_qubits());
  const double dt = sched.tau / slices;
  const auto& diag = pair.problem_diagonal();
  for (int l = 0; l < slices; ++l) {
    const double u = sched.u_at((l + 0.5) / slices);
    const double half_theta = 0.5 * (1.0 - u) * dt;
    apply_driver_rotation(state.amplitudes, pair.num_qubits(), half_theta);
    for (std::size_t z = 0; z < diag.size(); ++z) {
      state.amplitudes[z] *= std::polar(1.0, -u * diag[z] * dt);
    }
    apply_driver_rotation(state.amplitudes, pair.num_qubits(), half_theta);
    settle(state, l);
    if (opts.observer) opts.observer(l, static_cast<double>(l + 1) / slices, state);
  }
  return state;
}

}  // namespace permanneal
