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

// Reference implementations used only by tests. They are deliberately naive
// and share no code with the library beyond its plain data types.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Bits = std::vector<int>;

inline Bits bits_of(std::uint64_t z, int m) {
  Bits b(m);
  for (int i = 0; i < m; ++i) b[i] = static_cast<int>((z >> i) & 1u);
  return b;
}

/// x^T W x + c^T x by explicit double sums.
inline double quadratic(const Eigen::MatrixXd& W, const Eigen::VectorXd& c, const Bits& x,
                        double offset = 0.0) {
  double e = offset;
  const int m = static_cast<int>(x.size());
  for (int i = 0; i < m; ++i) {
    if (!x[i]) continue;
    e += c[i];
    for (int j = 0; j < m; ++j) {
      if (x[j]) e += W(i, j);
    }
  }
  return e;
}

/// All permutations of {0..n-1} by Heap's algorithm (not lexicographic).
inline std::vector<std::vector<int>> heap_permutations(int n) {
  std::vector<int> a(n);
  for (int i = 0; i < n; ++i) a[i] = i;
  std::vector<std::vector<int>> out{a};
  std::vector<int> counter(n, 0);
  int i = 1;
  while (i < n) {
    if (counter[i] < i) {
      if (i % 2 == 0) {
        std::swap(a[0], a[i]);
      } else {
        std::swap(a[counter[i]], a[i]);
      }
      out.push_back(a);
      ++counter[i];
      i = 1;
    } else {
      counter[i] = 0;
      ++i;
    }
  }
  return out;
}

/// Column-major 0/1 vector of the permutation matrix with X(p[j], j) = 1.
inline Bits perm_bits(const std::vector<int>& p) {
  const int n = static_cast<int>(p.size());
  Bits x(n * n, 0);
  for (int j = 0; j < n; ++j) x[j * n + p[j]] = 1;
  return x;
}

/// Reads x column-major and returns the permutation it encodes, or empty.
inline std::vector<int> perm_of(const Bits& x, int n) {
  std::vector<int> p(n, -1);
  std::vector<int> row_count(n, 0);
  for (int j = 0; j < n; ++j) {
    int ones = 0;
    for (int i = 0; i < n; ++i) {
      if (x[j * n + i]) {
        ++ones;
        ++row_count[i];
        p[j] = i;
      }
    }
    if (ones != 1) return {};
  }
  for (int i = 0; i < n; ++i) {
    if (row_count[i] != 1) return {};
  }
  return p;
}

struct Optimum {
  double energy;
  std::vector<std::vector<int>> minimizers;
};

inline Optimum qap_optimum(const Eigen::MatrixXd& W, const Eigen::VectorXd& c, int n,
                           double rel_tol = 1e-12) {
  Optimum best{std::numeric_limits<double>::infinity(), {}};
  std::vector<double> energies;
  const auto perms = heap_permutations(n);
  for (const auto& p : perms) energies.push_back(quadratic(W, c, perm_bits(p)));
  best.energy = *std::min_element(energies.begin(), energies.end());
  for (std::size_t k = 0; k < perms.size(); ++k) {
    if (energies[k] - best.energy <= rel_tol * std::max(1.0, std::abs(best.energy))) {
      best.minimizers.push_back(perms[k]);
    }
  }
  return best;
}

inline Eigen::MatrixXd random_matrix(std::mt19937_64& gen, int rows, int cols) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = u(gen);
  }
  return m;
}

/// Ising energy s^T J s + h^T s + offset with s_i = 2 x_i - 1.
inline double ising(const Eigen::MatrixXd& J, const Eigen::VectorXd& h, double offset,
                    const Bits& x) {
  const int m = static_cast<int>(x.size());
  double e = offset;
  for (int i = 0; i < m; ++i) {
    const double si = 2.0 * x[i] - 1.0;
    e += h[i] * si;
    for (int j = 0; j < m; ++j) e += J(i, j) * si * (2.0 * x[j] - 1.0);
  }
  return e;
}

/// Dense u * diag(hp) - (1 - u) * sum_i sigma_x^(i).
inline Eigen::MatrixXd dense_hamiltonian(const std::vector<double>& hp, int m, double u) {
  const int size = 1 << m;
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(size, size);
  for (int z = 0; z < size; ++z) {
    H(z, z) = u * hp[z];
    for (int q = 0; q < m; ++q) H(z ^ (1 << q), z) -= (1.0 - u);
  }
  return H;
}

/// exp(-i H dt) psi through the eigendecomposition of the real symmetric H.
inline Eigen::VectorXcd dense_propagate(const Eigen::MatrixXd& H, const Eigen::VectorXcd& psi,
                                        double dt) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
  const Eigen::MatrixXcd V = es.eigenvectors().cast<std::complex<double>>();
  Eigen::VectorXcd phase(H.rows());
  for (Eigen::Index k = 0; k < H.rows(); ++k) {
    phase[k] = std::polar(1.0, -es.eigenvalues()[k] * dt);
  }
  return V * phase.asDiagonal() * V.adjoint() * psi;
}

}  // namespace oracle
