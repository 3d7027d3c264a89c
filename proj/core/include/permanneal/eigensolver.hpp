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
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace permanneal {

/// Matrix-free action out = H * in of a real symmetric operator.
using RealOperator = std::function<void(std::span<const double>, std::span<double>)>;

/// Matrix-free action of a Hermitian operator on complex vectors.
using ComplexOperator =
    std::function<void(std::span<const std::complex<double>>, std::span<std::complex<double>>)>;

struct LanczosOptions {
  /// Initial Krylov subspace size per restart cycle.
  int krylov_dim = 48;
  /// Explicit restarts (from the current Ritz vector) per subspace size.
  int max_restarts = 40;
  /// Number of times the subspace is doubled after the restarts run out.
  int max_growth = 3;
  /// Converged when the Ritz residual is below tol * max(1, |theta|).
  double tol = 1e-11;
  /// Seed of the deterministic start vector.
  std::uint64_t seed = 0x5eed;
};

struct EigenPair {
  double value = 0.0;
  Eigen::VectorXd vector;
  int iterations = 0;
};

/// Lowest eigenpair of `op` (dimension `n`) on the orthogonal complement of
/// the orthonormal columns of `deflate`. Lanczos with full
/// reorthogonalization and explicit restarts; throws SolverError if the
/// residual does not converge after the retry policy.
EigenPair lowest_eigenpair(const RealOperator& op, Eigen::Index n,
                           const Eigen::MatrixXd& deflate = {},
                           const LanczosOptions& opts = {});

struct LowestTwo {
  double e0 = 0.0;
  /// Second-lowest eigenvalue counted with multiplicity.
  double e1 = 0.0;
  Eigen::VectorXd ground;
};

/// Two lowest eigenvalues: the ground pair, then the lowest eigenvalue on the
/// complement of the ground vector.
LowestTwo lowest_two_eigenvalues(const RealOperator& op, Eigen::Index n,
                                 const LanczosOptions& opts = {});

struct PropagatorOptions {
  /// Largest Krylov subspace before the step is split in half.
  int max_krylov_dim = 40;
  /// Local error target for one application.
  double tol = 1e-12;
};

/// psi <- exp(-i * H * dt) psi by a Krylov (Lanczos) approximation of the
/// exponential. Returns the number of operator applications.
int krylov_propagate(const ComplexOperator& op, std::span<std::complex<double>> psi, double dt,
                     const PropagatorOptions& opts = {});

}  // namespace permanneal
