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

#include "permanneal/qap.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "permanneal/error.hpp"

namespace permanneal {

BinaryVector::BinaryVector(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i] > 1) {
      throw ValidationError("binary vector entry " + std::to_string(i) + " is not 0 or 1");
    }
  }
}

BinaryVector BinaryVector::from_index(std::uint64_t index, std::size_t size) {
  BinaryVector v(size);
  for (std::size_t i = 0; i < size && i < 64; ++i) v.bits_[i] = (index >> i) & 1U;
  return v;
}

std::uint64_t BinaryVector::to_index() const {
  if (bits_.size() > 64) throw ValidationError("binary vector longer than 64 bits");
  std::uint64_t index = 0;
  for (std::size_t i = 0; i < bits_.size(); ++i) index |= std::uint64_t{bits_[i]} << i;
  return index;
}

std::string BinaryVector::to_string() const {
  std::string s(bits_.size(), '0');
  for (std::size_t i = 0; i < bits_.size(); ++i) s[i] = bits_[i] ? '1' : '0';
  return s;
}

BinaryVector BinaryVector::parse(const std::string& text) {
  std::vector<std::uint8_t> bits(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '0' && text[i] != '1') {
      throw ValidationError("invalid bit character '" + std::string(1, text[i]) + "'");
    }
    bits[i] = text[i] == '1';
  }
  return BinaryVector(std::move(bits));
}

Eigen::VectorXd BinaryVector::as_vector() const {
  Eigen::VectorXd v(bits_.size());
  for (std::size_t i = 0; i < bits_.size(); ++i) v[i] = bits_[i];
  return v;
}

PermutationMatrix::PermutationMatrix(std::vector<int> assignment)
    : assignment_(std::move(assignment)) {
  const int n = static_cast<int>(assignment_.size());
  if (n == 0) throw ValidationError("permutation must have n >= 1");
  std::vector<bool> seen(n, false);
  for (int row : assignment_) {
    if (row < 0 || row >= n || seen[row]) {
      throw ValidationError("assignment is not a bijection on {0..n-1}");
    }
    seen[row] = true;
  }
}

PermutationMatrix PermutationMatrix::identity(int n) {
  std::vector<int> a(n);
  std::iota(a.begin(), a.end(), 0);
  return PermutationMatrix(std::move(a));
}

Eigen::MatrixXd PermutationMatrix::dense() const {
  const int n = this->n();
  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) X(assignment_[j], j) = 1.0;
  return X;
}

QapInstance::QapInstance(int n, Eigen::MatrixXd W, Eigen::VectorXd c)
    : n_(n), W_(std::move(W)), c_(std::move(c)) {
  if (n < 1) throw ValidationError("QAP side length n must be positive");
  const int dim = n * n;
  if (W_.rows() != dim || W_.cols() != dim) {
    throw ValidationError("W must be n^2 x n^2 = " + std::to_string(dim) + "x" +
                          std::to_string(dim));
  }
  if (c_.size() != dim) {
    throw ValidationError("c must have length n^2 = " + std::to_string(dim));
  }
  if (!W_.allFinite() || !c_.allFinite()) {
    throw ValidationError("W and c must be finite");
  }
}

QapInstance QapInstance::zero(int n) {
  return QapInstance(n, Eigen::MatrixXd::Zero(n * n, n * n), Eigen::VectorXd::Zero(n * n));
}

BinaryVector vectorize(const PermutationMatrix& perm) {
  const int n = perm.n();
  BinaryVector x(static_cast<std::size_t>(n * n));
  for (int j = 0; j < n; ++j) x.set(vec_index(n, perm.assignment()[j], j), true);
  return x;
}

std::optional<PermutationMatrix> as_permutation(int n, const BinaryVector& x) {
  if (x.size() != static_cast<std::size_t>(n * n)) return std::nullopt;
  std::vector<int> assignment(n, -1);
  std::vector<int> row_count(n, 0);
  for (int j = 0; j < n; ++j) {
    int ones = 0;
    for (int i = 0; i < n; ++i) {
      if (x[vec_index(n, i, j)]) {
        ++ones;
        ++row_count[i];
        assignment[j] = i;
      }
    }
    if (ones != 1) return std::nullopt;
  }
  for (int count : row_count) {
    if (count != 1) return std::nullopt;
  }
  return PermutationMatrix(std::move(assignment));
}

double qap_energy(const QapInstance& inst, const BinaryVector& x) {
  if (x.size() != static_cast<std::size_t>(inst.dim())) {
    throw ValidationError("binary vector length " + std::to_string(x.size()) +
                          " does not match n^2 = " + std::to_string(inst.dim()));
  }
  const Eigen::VectorXd v = x.as_vector();
  return v.dot(inst.W() * v) + inst.c().dot(v);
}

double permutation_energy(const QapInstance& inst, const std::vector<int>& assignment) {
  const int n = inst.n();
  const auto& W = inst.W();
  double e = 0.0;
  for (int j = 0; j < n; ++j) {
    const int a = vec_index(n, assignment[j], j);
    e += inst.c()[a];
    for (int l = 0; l < n; ++l) e += W(a, vec_index(n, assignment[l], l));
  }
  return e;
}

namespace {

struct Extremes {
  std::vector<int> best;
  double best_energy = 0.0;
  std::vector<int> worst;
  double worst_energy = 0.0;
  bool any = false;
};

// Enumerates, in lexicographic order, the permutations whose first entry is
// `first`.
Extremes scan_partition(const QapInstance& inst, int first) {
  const int n = inst.n();
  std::vector<int> a(n);
  a[0] = first;
  for (int v = 0, k = 1; v < n; ++v) {
    if (v != first) a[k++] = v;
  }
  Extremes ex;
  do {
    const double e = permutation_energy(inst, a);
    if (!ex.any || e < ex.best_energy) {
      ex.best = a;
      ex.best_energy = e;
    }
    if (!ex.any || e > ex.worst_energy) {
      ex.worst = a;
      ex.worst_energy = e;
    }
    ex.any = true;
  } while (std::next_permutation(a.begin() + 1, a.end()));
  return ex;
}

PermutationEnergyRange enumerate_range(const QapInstance& inst, std::size_t workers) {
  const int n = inst.n();
  if (n > kMaxBruteForceN) {
    throw SizeCapError("brute force enumeration limited to n <= " +
                       std::to_string(kMaxBruteForceN) + " (got n = " + std::to_string(n) +
                       ")");
  }
  std::vector<Extremes> parts(n);
  parallel_for(
      static_cast<std::size_t>(n), [&](std::size_t v) { parts[v] = scan_partition(inst, static_cast<int>(v)); },
      workers);

  // Partitions are visited in lexicographic order of their first entry, so a
  // strict comparison keeps the earliest tie as in a sequential scan.
  Extremes total = parts[0];
  for (int v = 1; v < n; ++v) {
    if (parts[v].best_energy < total.best_energy) {
      total.best = parts[v].best;
      total.best_energy = parts[v].best_energy;
    }
    if (parts[v].worst_energy > total.worst_energy) {
      total.worst = parts[v].worst;
      total.worst_energy = parts[v].worst_energy;
    }
  }
  return {QapOptimum{PermutationMatrix(total.best), total.best_energy},
          QapOptimum{PermutationMatrix(total.worst), total.worst_energy}};
}

}  // namespace

QapOptimum brute_force_qap(const QapInstance& inst, std::size_t workers) {
  return enumerate_range(inst, workers).best;
}

PermutationEnergyRange permutation_energy_range(const QapInstance& inst,
                                                std::size_t workers) {
  return enumerate_range(inst, workers);
}

QapInstance isometric_cost(const DistanceData& dist) {
  const auto n = dist.d1.rows();
  auto check = [n](const Eigen::MatrixXd& d, const char* name) {
    if (d.rows() != n || d.cols() != n) {
      throw ValidationError(std::string(name) + " must be " + std::to_string(n) + "x" +
                            std::to_string(n));
    }
    if (!d.allFinite()) throw ValidationError(std::string(name) + " must be finite");
    for (Eigen::Index i = 0; i < n; ++i) {
      if (d(i, i) != 0.0) throw ValidationError(std::string(name) + " has a nonzero diagonal");
      for (Eigen::Index k = 0; k < n; ++k) {
        if (d(i, k) < 0.0) throw ValidationError(std::string(name) + " has negative distances");
        if (d(i, k) != d(k, i)) throw ValidationError(std::string(name) + " is not symmetric");
      }
    }
  };
  if (n < 1) throw ValidationError("distance matrices must be nonempty");
  check(dist.d1, "d1");
  check(dist.d2, "d2");

  const int side = static_cast<int>(n);
  const int dim = side * side;
  Eigen::MatrixXd W(dim, dim);
  for (int j = 0; j < side; ++j) {
    for (int i = 0; i < side; ++i) {
      for (int l = 0; l < side; ++l) {
        for (int k = 0; k < side; ++k) {
          W(vec_index(side, i, j), vec_index(side, k, l)) =
              std::abs(dist.d1(i, k) - dist.d2(j, l));
        }
      }
    }
  }

  Eigen::VectorXd c = Eigen::VectorXd::Zero(dim);
  if (dist.linear_bias) {
    const auto& bias = *dist.linear_bias;
    if (bias.rows() != n || bias.cols() != n) {
      throw ValidationError("linear_bias must match the distance matrix shape");
    }
    for (int j = 0; j < side; ++j) {
      for (int i = 0; i < side; ++i) c[vec_index(side, i, j)] = bias(i, j);
    }
  }
  return QapInstance(side, std::move(W), std::move(c));
}

QapInstance symmetrize(const QapInstance& inst) {
  Eigen::MatrixXd W = 0.5 * (inst.W() + inst.W().transpose());
  return QapInstance(inst.n(), std::move(W), inst.c());
}

std::uint64_t factorial(int n) {
  if (n < 0 || n > 20) throw ValidationError("factorial argument out of range");
  std::uint64_t f = 1;
  for (int k = 2; k <= n; ++k) f *= static_cast<std::uint64_t>(k);
  return f;
}

}  // namespace permanneal
