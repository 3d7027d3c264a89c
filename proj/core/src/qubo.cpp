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

#include "permanneal/qubo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "permanneal/error.hpp"

namespace permanneal {

std::string_view to_string(Formulation f) {
  switch (f) {
    case Formulation::baseline:
      return "baseline";
    case Formulation::row_wise:
      return "row_wise";
    case Formulation::inserted:
      return "inserted";
  }
  return "unknown";
}

Formulation parse_formulation(std::string_view name) {
  if (name == "baseline") return Formulation::baseline;
  if (name == "row_wise" || name == "row-wise" || name == "rowwise") return Formulation::row_wise;
  if (name == "inserted") return Formulation::inserted;
  throw ValidationError("unknown formulation '" + std::string(name) +
                        "' (expected baseline, row_wise or inserted)");
}

ConstraintSystem build_constraints(int n) {
  if (n < 1) throw ValidationError("build_constraints requires n >= 1");
  const int dim = n * n;
  ConstraintSystem sys{Eigen::MatrixXd::Zero(2 * n, dim), Eigen::VectorXd::Ones(2 * n)};
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      sys.A(i, i * n + k) = 1.0;      // Id (x) 1^T
      sys.A(n + i, k * n + i) = 1.0;  // 1^T (x) Id
    }
  }
  return sys;
}

double max_flip_cost(const Eigen::MatrixXd& W, const Eigen::VectorXd& c,
                     std::span<const int> indices) {
  double best = 0.0;
  for (int k : indices) {
    double cost = std::abs(W(k, k)) + std::abs(c[k]);
    for (Eigen::Index i = 0; i < W.rows(); ++i) cost += std::abs(W(k, i) + W(i, k));
    best = std::max(best, cost);
  }
  return best;
}

namespace {

std::vector<int> all_indices(int dim) {
  std::vector<int> idx(dim);
  std::iota(idx.begin(), idx.end(), 0);
  return idx;
}

std::vector<int> support(const Eigen::MatrixXd& A, int row) {
  std::vector<int> idx;
  for (Eigen::Index k = 0; k < A.cols(); ++k) {
    if (A(row, k) != 0.0) idx.push_back(static_cast<int>(k));
  }
  return idx;
}

void check_scale(double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw ValidationError("penalty scale must be a positive finite number");
  }
}

double applied(double bound, double scale) { return scale * bound * (1.0 + kPenaltyMargin); }

Eigen::MatrixXd symmetric_part(const Eigen::MatrixXd& W) { return 0.5 * (W + W.transpose()); }

}  // namespace

InsertedReduction reduce_inserted(const QapInstance& inst) {
  const int n = inst.n();
  if (n < 2) throw ValidationError("the inserted formulation requires n >= 2");
  const int dim = n * n;
  const int m = (n - 1) * (n - 1);

  InsertedReduction red;
  red.embed = Eigen::MatrixXd::Zero(dim, m);
  red.shift = Eigen::VectorXd::Zero(dim);

  for (int col = 0; col < n; ++col) {
    for (int row = 0; row < n; ++row) {
      const int full = vec_index(n, row, col);
      if (row >= 1 && col >= 1) {
        red.embed(full, reduced_index(n, row, col)) = 1.0;
      } else if (row == 0 && col >= 1) {
        // X(0, col) = 1 - sum_{r>=1} X(r, col)
        red.shift[full] = 1.0;
        for (int r = 1; r < n; ++r) red.embed(full, reduced_index(n, r, col)) = -1.0;
      } else if (row >= 1 && col == 0) {
        // X(row, 0) = 1 - sum_{c>=1} X(row, c)
        red.shift[full] = 1.0;
        for (int c = 1; c < n; ++c) red.embed(full, reduced_index(n, row, c)) = -1.0;
      } else {
        // X(0, 0) = 2 - n + sum of the reduced block
        red.shift[full] = 2.0 - n;
        red.embed.row(full).setOnes();
      }
    }
  }

  const Eigen::MatrixXd Ws = symmetric_part(inst.W());
  Eigen::MatrixXd P = red.embed.transpose() * Ws * red.embed;
  P = symmetric_part(P);
  const Eigen::VectorXd linear =
      red.embed.transpose() * (2.0 * (Ws * red.shift) + inst.c());

  red.W_tilde = P;
  red.W_tilde.diagonal().setZero();
  red.c_tilde = linear + P.diagonal();
  red.constant = red.shift.dot(inst.W() * red.shift) + inst.c().dot(red.shift);
  return red;
}

std::vector<std::vector<int>> reduced_groups(int n) {
  const int side = n - 1;
  std::vector<std::vector<int>> groups(2 * static_cast<std::size_t>(std::max(side, 0)));
  for (int k = 0; k < side * side; ++k) {
    groups[k / side].push_back(k);
    groups[side + k % side].push_back(k);
  }
  return groups;
}

bool chi(int n, int j, int k) {
  const int side = n - 1;
  if (j == k) return false;
  return j / side == k / side || j % side == k % side;
}

PenaltyBounds penalty_bounds(const QapInstance& inst) {
  const int n = inst.n();
  PenaltyBounds b;
  b.lambda_baseline = 0.5 * (inst.W().cwiseAbs().sum() + inst.c().cwiseAbs().sum());

  const auto sys = build_constraints(n);
  const double d_all = max_flip_cost(inst.W(), inst.c(), all_indices(inst.dim()));
  b.lambda_rows.resize(2 * n);
  for (int i = 0; i < 2 * n; ++i) {
    b.lambda_rows[i] = max_flip_cost(inst.W(), inst.c(), support(sys.A, i)) + 0.5 * d_all;
  }

  if (n >= 2) {
    const auto red = reduce_inserted(inst);
    const int m = (n - 1) * (n - 1);
    const double d_red = max_flip_cost(red.W_tilde, red.c_tilde, all_indices(m));
    for (const auto& group : reduced_groups(n)) {
      b.lambda1.push_back(0.5 * max_flip_cost(red.W_tilde, red.c_tilde, group) + 0.5 * d_red);
    }
    b.lambda2 = 0.5 * d_red;
  }
  return b;
}

double qubo_energy(const QuboModel& model, const BinaryVector& x) {
  if (x.size() != static_cast<std::size_t>(model.dim)) {
    throw ValidationError("state length " + std::to_string(x.size()) +
                          " does not match model dimension " + std::to_string(model.dim));
  }
  const Eigen::VectorXd v = x.as_vector();
  return v.dot(model.Q * v) + model.q.dot(v) + model.offset;
}

QuboModel build_baseline(const QapInstance& inst, double scale) {
  check_scale(scale);
  const int n = inst.n();
  const auto sys = build_constraints(n);

  QuboModel m;
  m.formulation = Formulation::baseline;
  m.n = n;
  m.dim = inst.dim();
  m.scale = scale;
  m.bounds = penalty_bounds(inst);

  const double lambda = applied(m.bounds.lambda_baseline, scale);
  m.penalties = {lambda};
  m.Q = symmetric_part(inst.W()) + lambda * (sys.A.transpose() * sys.A);
  m.q = inst.c() - 2.0 * lambda * (sys.A.transpose() * sys.b);
  m.offset = lambda * sys.b.squaredNorm();
  return m;
}

QuboModel build_row_wise(const QapInstance& inst, double scale) {
  check_scale(scale);
  const int n = inst.n();
  const auto sys = build_constraints(n);

  QuboModel m;
  m.formulation = Formulation::row_wise;
  m.n = n;
  m.dim = inst.dim();
  m.scale = scale;
  m.bounds = penalty_bounds(inst);

  m.Q = symmetric_part(inst.W());
  m.q = inst.c();
  m.offset = 0.0;
  for (int i = 0; i < 2 * n; ++i) {
    const double lambda = applied(m.bounds.lambda_rows[i], scale);
    m.penalties.push_back(lambda);
    const Eigen::VectorXd a = sys.A.row(i).transpose();
    m.Q += lambda * (a * a.transpose());
    m.q -= 2.0 * lambda * sys.b[i] * a;
    m.offset += lambda * sys.b[i] * sys.b[i];
  }
  return m;
}

QuboModel build_inserted(const QapInstance& inst, double scale) {
  check_scale(scale);
  const int n = inst.n();
  if (n < 2) throw ValidationError("the inserted formulation requires n >= 2");
  const auto red = reduce_inserted(inst);
  const int dim = (n - 1) * (n - 1);

  QuboModel m;
  m.formulation = Formulation::inserted;
  m.n = n;
  m.dim = dim;
  m.scale = scale;
  m.bounds = penalty_bounds(inst);

  m.Q = red.W_tilde;
  m.q = red.c_tilde;
  m.offset = red.constant;

  // Exclusion: lambda1_g * (sum_g x)(sum_g x - 1) = lambda1_g * sum_{k != l in g} x_k x_l.
  const auto groups = reduced_groups(n);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const double lambda1 = applied(m.bounds.lambda1[g], scale);
    m.penalties.push_back(lambda1);
    for (int k : groups[g]) {
      for (int l : groups[g]) {
        if (k != l) m.Q(k, l) += lambda1;
      }
    }
  }

  // Cardinality: lambda2 (S - (n-1)) (S - (n-2)) with S^2 = S + sum_{k != l} x_k x_l.
  const double lambda2 = applied(m.bounds.lambda2, scale);
  m.penalties.push_back(lambda2);
  for (int k = 0; k < dim; ++k) {
    for (int l = 0; l < dim; ++l) {
      if (k != l) m.Q(k, l) += lambda2;
    }
  }
  m.q.array() += lambda2 * (1.0 - (2.0 * n - 3.0));
  m.offset += lambda2 * (n - 1.0) * (n - 2.0);
  return m;
}

QuboModel build_qubo(const QapInstance& inst, Formulation f, double scale) {
  switch (f) {
    case Formulation::baseline:
      return build_baseline(inst, scale);
    case Formulation::row_wise:
      return build_row_wise(inst, scale);
    case Formulation::inserted:
      return build_inserted(inst, scale);
  }
  throw ValidationError("unknown formulation");
}

namespace {

// Reconstruction of the full matrix from the reduced block;
// nullopt if any entry leaves {0,1} or the result is not a permutation.
std::optional<PermutationMatrix> expand_reduced(int n, const BinaryVector& y) {
  const int side = n - 1;
  std::vector<int> col_sum(n, 0), row_sum(n, 0);
  int total = 0;
  for (int col = 1; col < n; ++col) {
    for (int row = 1; row < n; ++row) {
      const int bit = y[reduced_index(n, row, col)] ? 1 : 0;
      col_sum[col] += bit;
      row_sum[row] += bit;
      total += bit;
    }
  }
  BinaryVector full(static_cast<std::size_t>(n * n));
  auto put = [&](int row, int col, int value) {
    if (value != 0 && value != 1) return false;
    full.set(vec_index(n, row, col), value == 1);
    return true;
  };
  if (!put(0, 0, 2 - n + total)) return std::nullopt;
  for (int k = 1; k <= side; ++k) {
    if (!put(0, k, 1 - col_sum[k])) return std::nullopt;
    if (!put(k, 0, 1 - row_sum[k])) return std::nullopt;
    for (int row = 1; row < n; ++row) put(row, k, y[reduced_index(n, row, k)] ? 1 : 0);
  }
  return as_permutation(n, full);
}

}  // namespace

std::optional<PermutationMatrix> decode(const QuboModel& model, const BinaryVector& x) {
  if (x.size() != static_cast<std::size_t>(model.dim)) {
    throw ValidationError("state length " + std::to_string(x.size()) +
                          " does not match model dimension " + std::to_string(model.dim));
  }
  if (model.formulation == Formulation::inserted) return expand_reduced(model.n, x);
  return as_permutation(model.n, x);
}

BinaryVector reduce_permutation(const PermutationMatrix& perm) {
  const int n = perm.n();
  if (n < 2) throw ValidationError("reduced coordinates require n >= 2");
  BinaryVector y(static_cast<std::size_t>((n - 1) * (n - 1)));
  for (int col = 1; col < n; ++col) {
    const int row = perm.assignment()[col];
    if (row >= 1) y.set(reduced_index(n, row, col), true);
  }
  return y;
}

BinaryVector encode(const QuboModel& model, const PermutationMatrix& perm) {
  if (perm.n() != model.n) throw ValidationError("permutation size does not match model");
  if (model.formulation == Formulation::inserted) return reduce_permutation(perm);
  return vectorize(perm);
}

SpinModel to_spin(const QuboModel& model) {
  const double tol = 1e-12 * std::max(1.0, model.Q.cwiseAbs().maxCoeff());
  if (model.Q.size() > 0 && (model.Q - model.Q.transpose()).cwiseAbs().maxCoeff() > tol) {
    throw ValidationError("to_spin requires a symmetric Q");
  }
  const Eigen::MatrixXd Q = symmetric_part(model.Q);
  const Eigen::VectorXd row_sums = Q.rowwise().sum();
  SpinModel s;
  s.Q_s = 0.25 * Q;
  s.q_s = 0.5 * (row_sums + model.q);
  s.offset_s = model.offset + 0.25 * row_sums.sum() + 0.5 * model.q.sum();
  return s;
}

double spin_energy(const SpinModel& model, std::span<const int> spins) {
  if (spins.size() != static_cast<std::size_t>(model.dim())) {
    throw ValidationError("spin vector length does not match model dimension");
  }
  Eigen::VectorXd s(spins.size());
  for (std::size_t i = 0; i < spins.size(); ++i) s[i] = spins[i];
  return s.dot(model.Q_s * s) + model.q_s.dot(s) + model.offset_s;
}

double spin_energy(const SpinModel& model, const BinaryVector& x) {
  std::vector<int> s(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) s[i] = x[i] ? 1 : -1;
  return spin_energy(model, s);
}

namespace {

struct Interchange {
  std::vector<double> couplings;  // i < j, Q_ij + Q_ji
  std::vector<double> biases;     // q_i + Q_ii
};

Interchange interchange(const Eigen::MatrixXd& Q, const Eigen::VectorXd& q) {
  Interchange out;
  const auto dim = q.size();
  for (Eigen::Index i = 0; i < dim; ++i) {
    out.biases.push_back(q[i] + Q(i, i));
    for (Eigen::Index j = i + 1; j < dim; ++j) out.couplings.push_back(Q(i, j) + Q(j, i));
  }
  return out;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

ValueRange range_of(const std::vector<double>& v, double divisor) {
  if (v.empty()) return {};
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return {*lo / divisor, *hi / divisor};
}

std::optional<double> ratio(double reg, double prob) {
  if (prob == 0.0) return std::nullopt;
  return reg / prob;
}

}  // namespace

CouplingReport coupling_report(const QuboModel& model, const QapInstance& inst) {
  if (inst.n() != model.n) throw ValidationError("instance does not match model");

  Eigen::MatrixXd Q_prob;
  Eigen::VectorXd q_prob;
  if (model.formulation == Formulation::inserted) {
    const auto red = reduce_inserted(inst);
    Q_prob = red.W_tilde;
    q_prob = red.c_tilde;
  } else {
    Q_prob = symmetric_part(inst.W());
    q_prob = inst.c();
  }

  const auto total = interchange(model.Q, model.q);
  const auto prob = interchange(Q_prob, q_prob);
  const auto reg = interchange(model.Q - Q_prob, model.q - q_prob);

  CouplingReport r;
  const double divisor = std::max(max_abs(total.couplings), 0.5 * max_abs(total.biases));
  r.rescale = divisor > 0.0 ? divisor : 1.0;
  r.coupling = range_of(total.couplings, r.rescale);
  r.bias = range_of(total.biases, r.rescale);
  r.coupling_prob = range_of(prob.couplings, r.rescale);
  r.bias_prob = range_of(prob.biases, r.rescale);
  r.coupling_reg = range_of(reg.couplings, r.rescale);
  r.bias_reg = range_of(reg.biases, r.rescale);
  r.coupling_ratio = ratio(max_abs(reg.couplings), max_abs(prob.couplings));
  r.bias_ratio = ratio(max_abs(reg.biases), max_abs(prob.biases));
  return r;
}

std::vector<QuboTerm> upper_triangular_terms(const QuboModel& model) {
  std::vector<QuboTerm> terms;
  for (int i = 0; i < model.dim; ++i) {
    const double linear = model.q[i] + model.Q(i, i);
    if (linear != 0.0) terms.push_back({i, i, linear});
    for (int j = i + 1; j < model.dim; ++j) {
      const double coupling = model.Q(i, j) + model.Q(j, i);
      if (coupling != 0.0) terms.push_back({i, j, coupling});
    }
  }
  return terms;
}

}  // namespace permanneal
