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

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "permanneal/qap.hpp"

namespace permanneal {

enum class Formulation { baseline, row_wise, inserted };

inline constexpr Formulation kAllFormulations[] = {Formulation::baseline, Formulation::row_wise,
                                                   Formulation::inserted};

std::string_view to_string(Formulation f);
/// Accepts "baseline", "row_wise"/"row-wise", "inserted".
Formulation parse_formulation(std::string_view name);

/// Relative inflation applied to every penalty bound so that "at the bound"
/// satisfies the strict inequality the equivalence results require.
inline constexpr double kPenaltyMargin = 1e-6;

/// Linear equality system A x = b whose binary solutions are exactly the
/// vectorized permutation matrices. A = [Id (x) 1^T ; 1^T (x) Id].
///
/// Under column-major vectorization the first block sums each column of X and
/// the second block sums each row.
struct ConstraintSystem {
  Eigen::MatrixXd A;  // 2n x n^2
  Eigen::VectorXd b;  // 2n, all ones
};

ConstraintSystem build_constraints(int n);

/// Lower bounds for the penalty multipliers of the three formulations.
struct PenaltyBounds {
  /// Single global multiplier: 1/2 (sum |W_ij| + sum |c_i|).
  double lambda_baseline = 0.0;
  /// One per row of A: D_{J_i} + D_all / 2.
  std::vector<double> lambda_rows;
  /// One per reduced group (contiguous blocks first, then strided), computed
  /// on the reduced objective: D_{J_j} / 2 + D_all / 2.
  std::vector<double> lambda1;
  /// Cardinality penalty on the reduced objective: D_all / 2.
  double lambda2 = 0.0;
};

/// max over k in `indices` of sum_i |W_ki + W_ik| + |W_kk| + |c_k|.
double max_flip_cost(const Eigen::MatrixXd& W, const Eigen::VectorXd& c,
                     std::span<const int> indices);

/// The objective of the inserted formulation before penalties: substituting
/// the eliminated first row and column into the QAP objective gives
///   f(x_full) = y^T W_tilde y + c_tilde^T y + constant
/// for every reduced y, where x_full = embed * y + shift.
struct InsertedReduction {
  Eigen::MatrixXd W_tilde;  // symmetric, zero diagonal
  Eigen::VectorXd c_tilde;
  double constant = 0.0;
  Eigen::MatrixXd embed;  // n^2 x (n-1)^2
  Eigen::VectorXd shift;  // n^2
};

/// Requires n >= 2.
InsertedReduction reduce_inserted(const QapInstance& inst);

/// Reduced variable index of full-matrix entry (row, col), row, col >= 1.
/// Column-major over the trailing (n-1) x (n-1) block.
constexpr int reduced_index(int n, int row, int col) { return (col - 1) * (n - 1) + (row - 1); }

/// The 2(n-1) exclusion groups of the reduced grid: first the contiguous
/// blocks {k : k / (n-1) = g}, then the strided sets {k : k % (n-1) = g}.
std::vector<std::vector<int>> reduced_groups(int n);

/// 1 iff reduced variables j != k share a group.
bool chi(int n, int j, int k);

PenaltyBounds penalty_bounds(const QapInstance& inst);

/// Unconstrained binary quadratic model, energy x^T Q x + q^T x + offset.
struct QuboModel {
  Formulation formulation = Formulation::baseline;
  int n = 0;
  int dim = 0;
  Eigen::MatrixXd Q;
  Eigen::VectorXd q;
  double offset = 0.0;
  /// Multiplier applied to the bounds; >= 1 is the provably equivalent regime.
  double scale = 1.0;
  /// Applied multipliers: {lambda} (baseline), {lambda_i} (row-wise), or
  /// {lambda1_j..., lambda2} (inserted).
  std::vector<double> penalties;
  PenaltyBounds bounds;

  bool provable() const { return scale >= 1.0; }
};

double qubo_energy(const QuboModel& model, const BinaryVector& x);

QuboModel build_baseline(const QapInstance& inst, double scale = 1.0);
QuboModel build_row_wise(const QapInstance& inst, double scale = 1.0);
/// Throws ValidationError for n < 2.
QuboModel build_inserted(const QapInstance& inst, double scale = 1.0);
QuboModel build_qubo(const QapInstance& inst, Formulation f, double scale = 1.0);

/// Maps a model state back to a permutation; nullopt for infeasible states.
/// Throws ValidationError if x.size() != model.dim.
std::optional<PermutationMatrix> decode(const QuboModel& model, const BinaryVector& x);

/// Reduced coordinates (trailing (n-1) x (n-1) block) of a permutation.
BinaryVector reduce_permutation(const PermutationMatrix& perm);

/// The state of `model` that encodes `perm`.
BinaryVector encode(const QuboModel& model, const PermutationMatrix& perm);

/// Ising form: s^T Q_s s + q_s^T s + offset_s with s = 2x - 1.
struct SpinModel {
  Eigen::MatrixXd Q_s;
  Eigen::VectorXd q_s;
  double offset_s = 0.0;

  int dim() const { return static_cast<int>(q_s.size()); }
};

/// Throws ValidationError if model.Q is not symmetric.
SpinModel to_spin(const QuboModel& model);

double spin_energy(const SpinModel& model, std::span<const int> spins);
/// Evaluates at s = 2x - 1.
double spin_energy(const SpinModel& model, const BinaryVector& x);

struct ValueRange {
  double min = 0.0;
  double max = 0.0;
};

/// Coupling and bias ranges split into problem and penalty contributions.
/// Couplings are the upper-triangular values Q_ij + Q_ji (i < j); biases are
/// q_i + Q_ii. All ranges are after the joint rescaling that brings
/// |coupling| <= 1 and |bias| <= 2.
struct CouplingReport {
  double rescale = 1.0;  // divisor applied to the model
  ValueRange coupling, bias;
  ValueRange coupling_prob, bias_prob;
  ValueRange coupling_reg, bias_reg;
  /// max|coupling_reg| / max|coupling_prob|; nullopt when the problem part is 0.
  std::optional<double> coupling_ratio;
  /// max|bias_reg| / max|bias_prob|; nullopt when the problem part is 0.
  std::optional<double> bias_ratio;
};

CouplingReport coupling_report(const QuboModel& model, const QapInstance& inst);

/// One line of the upper-triangular interchange form; i == j carries the
/// linear term.
struct QuboTerm {
  int i;
  int j;
  double value;
};

/// Nonzero terms of the upper-triangular form, row-major order.
std::vector<QuboTerm> upper_triangular_terms(const QuboModel& model);

}  // namespace permanneal
