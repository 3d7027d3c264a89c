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
#include <cstddef>
#include <span>
#include <vector>

#include "permanneal/eigensolver.hpp"
#include "permanneal/parallel.hpp"
#include "permanneal/qubo.hpp"

namespace permanneal {

/// Largest register for which Hamiltonians are built (2^16 amplitudes).
inline constexpr int kMaxHamiltonianQubits = 16;

/// Default number of points on the u-grid of a gap profile.
inline constexpr int kDefaultGapSamples = 64;

/// Gaps below this are treated as exact degeneracy and reported as 0.
inline constexpr double kDegenerateGap = 1e-10;

/// Problem Hamiltonian (diagonal) and the transverse-field driver
/// H_B = -sum_i sigma_x^(i), kept matrix free.
///
/// Basis index z reads bit i (least significant first) as qubit i, with bit 1
/// meaning spin +1 and bit 0 spin -1, i.e. the QUBO state x with x_i = bit i.
class HamiltonianPair {
 public:
  HamiltonianPair(int num_qubits, std::vector<double> problem_diagonal);

  int num_qubits() const { return num_qubits_; }
  std::size_t size() const { return diagonal_.size(); }
  const std::vector<double>& problem_diagonal() const { return diagonal_; }

  /// out = H_B in
  template <typename T>
  void apply_driver(std::span<const T> in, std::span<T> out) const {
    for (std::size_t z = 0; z < in.size(); ++z) {
      T acc{};
      for (int q = 0; q < num_qubits_; ++q) acc += in[z ^ (std::size_t{1} << q)];
      out[z] = -acc;
    }
  }

 private:
  int num_qubits_;
  std::vector<double> diagonal_;
};

/// H_P[z] is the spin energy of basis state z. Throws SizeCapError above
/// kMaxHamiltonianQubits.
HamiltonianPair build_hamiltonians(const SpinModel& model);

/// H(u) = u H_P + (1 - u) H_B as a matrix-free operator.
class InterpolatedHamiltonian {
 public:
  /// Throws ValidationError unless 0 <= u <= 1.
  InterpolatedHamiltonian(const HamiltonianPair& pair, double u);

  double u() const { return u_; }

  template <typename T>
  void apply(std::span<const T> in, std::span<T> out) const {
    pair_->apply_driver(in, out);
    const auto& diag = pair_->problem_diagonal();
    for (std::size_t z = 0; z < in.size(); ++z) {
      out[z] = (1.0 - u_) * out[z] + u_ * diag[z] * in[z];
    }
  }

  RealOperator real_operator() const;
  ComplexOperator complex_operator() const;

 private:
  const HamiltonianPair* pair_;
  double u_;
};

InterpolatedHamiltonian interpolated_hamiltonian(const HamiltonianPair& pair, double u);

/// Divides the Ising couplings and fields so that the largest coupling
/// magnitude (Q_ij + Q_ji, i < j) is at most 1 and the largest field is at
/// most 2, the input range of annealing hardware. `divisor` receives the
/// factor used (1 for an all-zero model).
SpinModel normalize_couplings(const SpinModel& model, double* divisor = nullptr);

struct GapProfile {
  std::vector<double> ts;  // normalized time u = t / tau
  std::vector<double> e0;
  std::vector<double> e1;
  double min_gap = 0.0;
  double argmin_t = 0.0;
  /// Number of grid points whose two lowest levels are degenerate.
  int degenerate_points = 0;

  double gap(std::size_t k) const;
};

/// Two lowest eigenvalues of H(u) on a uniform grid of `num_samples` points
/// over [0, 1]. Points are evaluated independently and assembled by index.
GapProfile spectral_gap(const HamiltonianPair& pair, int num_samples = kDefaultGapSamples,
                        std::size_t workers = default_workers(),
                        const LanczosOptions& opts = {});

}  // namespace permanneal
