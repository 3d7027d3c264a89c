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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "permanneal/parallel.hpp"

namespace permanneal {

/// Largest side length accepted by the factorial enumerators.
inline constexpr int kMaxBruteForceN = 8;

/// A bit string over {0,1}. Also the carrier for reduced (n-1)^2 encodings.
class BinaryVector {
 public:
  BinaryVector() = default;
  explicit BinaryVector(std::size_t size) : bits_(size, 0) {}
  /// Throws ValidationError if any entry is not 0 or 1.
  explicit BinaryVector(std::vector<std::uint8_t> bits);

  /// Bit i is bit i (least significant first) of `index`.
  static BinaryVector from_index(std::uint64_t index, std::size_t size);

  std::size_t size() const { return bits_.size(); }
  bool operator[](std::size_t i) const { return bits_[i] != 0; }
  void set(std::size_t i, bool value) { bits_[i] = value ? 1 : 0; }
  void flip(std::size_t i) { bits_[i] ^= 1; }
  std::span<const std::uint8_t> bits() const { return bits_; }

  /// Inverse of from_index; size must be at most 64.
  std::uint64_t to_index() const;
  /// "0110..." with entry 0 first.
  std::string to_string() const;
  static BinaryVector parse(const std::string& text);

  Eigen::VectorXd as_vector() const;

  friend auto operator<=>(const BinaryVector&, const BinaryVector&) = default;
  friend bool operator==(const BinaryVector&, const BinaryVector&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

/// A permutation matrix stored as its column assignment: assignment()[j] is
/// the row i with X(i, j) = 1.
class PermutationMatrix {
 public:
  /// Throws ValidationError unless `assignment` is a bijection on {0..n-1}.
  explicit PermutationMatrix(std::vector<int> assignment);

  static PermutationMatrix identity(int n);

  int n() const { return static_cast<int>(assignment_.size()); }
  const std::vector<int>& assignment() const { return assignment_; }
  bool at(int row, int col) const { return assignment_[col] == row; }
  Eigen::MatrixXd dense() const;

  friend auto operator<=>(const PermutationMatrix&, const PermutationMatrix&) = default;
  friend bool operator==(const PermutationMatrix&, const PermutationMatrix&) = default;

 private:
  std::vector<int> assignment_;
};

/// Constrained problem min x^T W x + c^T x over vectorized permutation
/// matrices. W is kept exactly as given; see symmetrize().
class QapInstance {
 public:
  /// Throws ValidationError on shape mismatch or non-finite entries.
  QapInstance(int n, Eigen::MatrixXd W, Eigen::VectorXd c);

  static QapInstance zero(int n);

  int n() const { return n_; }
  /// Number of binary variables, n^2.
  int dim() const { return n_ * n_; }
  const Eigen::MatrixXd& W() const { return W_; }
  const Eigen::VectorXd& c() const { return c_; }

 private:
  int n_;
  Eigen::MatrixXd W_;
  Eigen::VectorXd c_;
};

/// Pairwise distances on the two graphs plus an optional linear cost. Entry
/// (i, j) of linear_bias is the cost of assigning node i of graph 1 to node j
/// of graph 2.
struct DistanceData {
  Eigen::MatrixXd d1;
  Eigen::MatrixXd d2;
  std::optional<Eigen::MatrixXd> linear_bias;
};

/// Column-major position of entry (row, col) of an n x n matrix.
constexpr int vec_index(int n, int row, int col) { return col * n + row; }

/// Column-major stacking: column j occupies positions j*n .. j*n+n-1.
BinaryVector vectorize(const PermutationMatrix& perm);

/// Reads a length-n^2 bit string as a column-major n x n 0/1 matrix and
/// returns the permutation it encodes, if any.
std::optional<PermutationMatrix> as_permutation(int n, const BinaryVector& x);

/// x^T W x + c^T x exactly as written. Throws ValidationError if
/// x.size() != n^2.
double qap_energy(const QapInstance& inst, const BinaryVector& x);

/// Same value as qap_energy(inst, vectorize(perm)) in O(n^2).
double permutation_energy(const QapInstance& inst, const std::vector<int>& assignment);

struct QapOptimum {
  PermutationMatrix permutation;
  double energy;
};

/// Exhaustive minimum over all n! permutations; ties go to the
/// lexicographically smallest assignment. Throws SizeCapError for
/// n > kMaxBruteForceN. Parallel evaluation returns the sequential result.
QapOptimum brute_force_qap(const QapInstance& inst,
                           std::size_t workers = default_workers());

struct PermutationEnergyRange {
  QapOptimum best;
  /// Highest-energy permutation; ties go to the lexicographically smallest.
  QapOptimum worst;
};

PermutationEnergyRange permutation_energy_range(const QapInstance& inst,
                                                std::size_t workers = default_workers());

/// Graph-matching costs: the coupling between x(i,j) and x(k,l) is
/// |d1(i,k) - d2(j,l)|; c is vec(linear_bias) or zero. Throws ValidationError
/// for mismatched shapes, asymmetric or negative distances, or a nonzero
/// diagonal.
QapInstance isometric_cost(const DistanceData& dist);

/// W <- (W + W^T) / 2. Energies are unchanged.
QapInstance symmetrize(const QapInstance& inst);

/// n! as an exact integer (n <= 20).
std::uint64_t factorial(int n);

}  // namespace permanneal
