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

#include "permanneal/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "permanneal/error.hpp"

namespace permanneal {

HamiltonianPair::HamiltonianPair(int num_qubits, std::vector<double> problem_diagonal)
    : num_qubits_(num_qubits), diagonal_(std::move(problem_diagonal)) {
  if (num_qubits < 1) throw ValidationError("a Hamiltonian needs at least one qubit");
  if (num_qubits > kMaxHamiltonianQubits) {
    throw SizeCapError("Hamiltonians are limited to " + std::to_string(kMaxHamiltonianQubits) +
                       " qubits (requested " + std::to_string(num_qubits) + ")");
  }
  if (diagonal_.size() != (std::size_t{1} << num_qubits)) {
    throw ValidationError("problem diagonal must have 2^num_qubits entries");
  }
}

HamiltonianPair build_hamiltonians(const SpinModel& model) {
  const int m = model.dim();
  if (m > kMaxHamiltonianQubits) {
    throw SizeCapError("spectral analysis is limited to " +
                       std::to_string(kMaxHamiltonianQubits) + " qubits (model has " +
                       std::to_string(m) + ")");
  }
  if (m < 1) throw ValidationError("spin model has no variables");

  const std::size_t size = std::size_t{1} << m;
  std::vector<double> diag(size);
  Eigen::VectorXd s(m);
  for (std::size_t z = 0; z < size; ++z) {
    for (int i = 0; i < m; ++i) s[i] = ((z >> i) & 1U) ? 1.0 : -1.0;
    diag[z] = s.dot(model.Q_s * s) + model.q_s.dot(s) + model.offset_s;
  }
  return HamiltonianPair(m, std::move(diag));
}

InterpolatedHamiltonian::InterpolatedHamiltonian(const HamiltonianPair& pair, double u)
    : pair_(&pair), u_(u) {
  if (!(u >= 0.0 && u <= 1.0)) {
    throw ValidationError("interpolation parameter u must lie in [0, 1]");
  }
}

RealOperator InterpolatedHamiltonian::real_operator() const {
  return [self = *this](std::span<const double> in, std::span<double> out) {
    self.apply<double>(in, out);
  };
}

ComplexOperator InterpolatedHamiltonian::complex_operator() const {
  return [self = *this](std::span<const std::complex<double>> in,
                        std::span<std::complex<double>> out) {
    self.apply<std::complex<double>>(in, out);
  };
}

InterpolatedHamiltonian interpolated_hamiltonian(const HamiltonianPair& pair, double u) {
  return InterpolatedHamiltonian(pair, u);
}

SpinModel normalize_couplings(const SpinModel& model, double* divisor) {
  const int m = model.dim();
  double max_coupling = 0.0;
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      max_coupling = std::max(max_coupling, std::abs(model.Q_s(i, j) + model.Q_s(j, i)));
    }
  }
  const double max_field = model.q_s.size() ? model.q_s.cwiseAbs().maxCoeff() : 0.0;
  double factor = std::max(max_coupling, 0.5 * max_field);
  if (!(factor > 0.0)) factor = 1.0;
  if (divisor) *divisor = factor;
  return SpinModel{model.Q_s / factor, model.q_s / factor, model.offset_s / factor};
}

double GapProfile::gap(std::size_t k) const {
  const double g = e1[k] - e0[k];
  return g < kDegenerateGap ? 0.0 : g;
}

GapProfile spectral_gap(const HamiltonianPair& pair, int num_samples, std::size_t workers,
                        const LanczosOptions& opts) {
  if (num_samples < 2) throw ValidationError("a gap profile needs at least 2 samples");

  GapProfile profile;
  const auto count = static_cast<std::size_t>(num_samples);
  profile.ts.resize(count);
  profile.e0.resize(count);
  profile.e1.resize(count);
  const auto n = static_cast<Eigen::Index>(pair.size());

  parallel_for(
      count,
      [&](std::size_t k) {
        const double u = static_cast<double>(k) / static_cast<double>(count - 1);
        const InterpolatedHamiltonian h(pair, u);
        const auto levels = lowest_two_eigenvalues(h.real_operator(), n, opts);
        profile.ts[k] = u;
        profile.e0[k] = levels.e0;
        profile.e1[k] = levels.e1;
      },
      workers);

  profile.min_gap = profile.gap(0);
  profile.argmin_t = profile.ts[0];
  for (std::size_t k = 0; k < count; ++k) {
    const double g = profile.gap(k);
    if (g == 0.0) ++profile.degenerate_points;
    if (g < profile.min_gap) {
      profile.min_gap = g;
      profile.argmin_t = profile.ts[k];
    }
  }
  return profile;
}

}  // namespace permanneal
