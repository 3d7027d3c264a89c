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

#include "permanneal/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "permanneal/error.hpp"
#include "permanneal/rng.hpp"

namespace permanneal {

namespace {

void project_out(const Eigen::MatrixXd& basis, Eigen::Ref<Eigen::VectorXd> w) {
  if (basis.cols() == 0) return;
  for (int pass = 0; pass < 2; ++pass) w -= basis * (basis.transpose() * w);
}

Eigen::VectorXd start_vector(Eigen::Index n, const Eigen::MatrixXd& deflate,
                             std::uint64_t seed) {
  Rng rng(seed);
  for (int attempt = 0; attempt < 8; ++attempt) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = rng.uniform(-1.0, 1.0);
    project_out(deflate, v);
    const double norm = v.norm();
    if (norm > 1e-8) return v / norm;
  }
  throw SolverError("could not build a Lanczos start vector outside the deflated space");
}

struct CycleResult {
  double theta = 0.0;
  Eigen::VectorXd ritz;
  double residual = 0.0;
  int steps = 0;
};

// One Lanczos cycle of at most `k_max` steps from the unit vector `v`.
CycleResult lanczos_cycle(const RealOperator& op, const Eigen::MatrixXd& deflate,
                          const Eigen::VectorXd& v, int k_max) {
  const Eigen::Index n = v.size();
  Eigen::MatrixXd V(n, k_max + 1);
  std::vector<double> alpha, beta;
  V.col(0) = v;
  Eigen::VectorXd w(n);

  int k = 0;
  bool breakdown = false;
  for (int j = 0; j < k_max; ++j) {
    op(std::span<const double>(V.col(j).data(), static_cast<std::size_t>(n)),
       std::span<double>(w.data(), static_cast<std::size_t>(n)));
    const double a = V.col(j).dot(w);
    alpha.push_back(a);
    w -= a * V.col(j);
    if (j > 0) w -= beta[j - 1] * V.col(j - 1);
    for (int pass = 0; pass < 2; ++pass) {
      w -= V.leftCols(j + 1) * (V.leftCols(j + 1).transpose() * w);
    }
    project_out(deflate, w);
    const double b = w.norm();
    k = j + 1;
    beta.push_back(b);
    if (b <= 1e-12 * std::max(1.0, std::abs(a))) {
      breakdown = true;
      break;
    }
    V.col(j + 1) = w / b;
  }

  Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), k);
  Eigen::VectorXd sub(std::max(k - 1, 0));
  for (int i = 0; i + 1 < k; ++i) sub[i] = beta[i];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);

  CycleResult r;
  r.theta = es.eigenvalues()[0];
  const Eigen::VectorXd s = es.eigenvectors().col(0);
  r.ritz = V.leftCols(k) * s;
  project_out(deflate, r.ritz);
  r.ritz.normalize();
  r.residual = breakdown ? 0.0 : beta[k - 1] * std::abs(s[k - 1]);
  r.steps = k;
  return r;
}

}  // namespace

EigenPair lowest_eigenpair(const RealOperator& op, Eigen::Index n, const Eigen::MatrixXd& deflate,
                           const LanczosOptions& opts) {
  const Eigen::Index available = n - deflate.cols();
  if (available <= 0) throw SolverError("no eigenvalues left outside the deflated space");

  Eigen::VectorXd v = start_vector(n, deflate, opts.seed);
  int k = static_cast<int>(std::min<Eigen::Index>(opts.krylov_dim, available));
  int iterations = 0;
  CycleResult last;
  for (int growth = 0; growth <= opts.max_growth; ++growth) {
    for (int restart = 0; restart <= opts.max_restarts; ++restart) {
      last = lanczos_cycle(op, deflate, v, k);
      iterations += last.steps;
      const bool full_space = last.steps >= available;
      if (full_space || last.residual <= opts.tol * std::max(1.0, std::abs(last.theta))) {
        return {last.theta, last.ritz, iterations};
      }
      v = last.ritz;
    }
    k = static_cast<int>(std::min<Eigen::Index>(2 * static_cast<Eigen::Index>(k), available));
  }
  throw SolverError("Lanczos did not converge (residual " + std::to_string(last.residual) +
                    " after " + std::to_string(iterations) + " iterations)");
}

LowestTwo lowest_two_eigenvalues(const RealOperator& op, Eigen::Index n,
                                 const LanczosOptions& opts) {
  if (n < 2) throw SolverError("need at least a 2-dimensional space for two eigenvalues");
  const EigenPair ground = lowest_eigenpair(op, n, {}, opts);
  Eigen::MatrixXd deflate = ground.vector;
  LanczosOptions second = opts;
  second.seed = opts.seed + 1;
  const EigenPair excited = lowest_eigenpair(op, n, deflate, second);
  return {ground.value, std::max(excited.value, ground.value), ground.vector};
}

int krylov_propagate(const ComplexOperator& op, std::span<std::complex<double>> psi, double dt,
                     const PropagatorOptions& opts) {
  using cvec = Eigen::VectorXcd;
  const auto n = static_cast<Eigen::Index>(psi.size());
  Eigen::Map<cvec> state(psi.data(), n);
  const double norm0 = state.norm();
  if (norm0 == 0.0 || dt == 0.0) return 0;

  std::vector<cvec> V;
  V.reserve(opts.max_krylov_dim + 1);
  V.push_back(state / norm0);
  std::vector<double> alpha, beta;
  cvec w(n);
  const std::complex<double> minus_i(0.0, -1.0);

  for (int j = 0; j < opts.max_krylov_dim; ++j) {
    op(std::span<const std::complex<double>>(V[j].data(), psi.size()),
       std::span<std::complex<double>>(w.data(), psi.size()));
    const double a = V[j].dot(w).real();
    alpha.push_back(a);
    w -= a * V[j];
    if (j > 0) w -= beta[j - 1] * V[j - 1];
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& basis : V) w -= basis.dot(w) * basis;
    }
    const double b = w.norm();
    beta.push_back(b);

    const int k = j + 1;
    Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), k);
    Eigen::VectorXd sub(k - 1);
    for (int i = 0; i + 1 < k; ++i) sub[i] = beta[i];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    const Eigen::MatrixXd& S = es.eigenvectors();
    cvec phase(k);
    for (int i = 0; i < k; ++i) phase[i] = std::exp(minus_i * es.eigenvalues()[i] * dt) * S(0, i);
    const cvec coeff = S.cast<std::complex<double>>() * phase;

    const bool invariant = b <= 1e-13 * std::max(1.0, std::abs(a));
    if (invariant || b * std::abs(coeff[k - 1]) <= opts.tol) {
      state.setZero();
      for (int i = 0; i < k; ++i) state += coeff[i] * V[i];
      state *= norm0;
      return k;
    }
    V.push_back(w / b);
  }

  // Subspace budget exhausted: halve the step.
  int applications = krylov_propagate(op, psi, 0.5 * dt, opts);
  applications += krylov_propagate(op, psi, 0.5 * dt, opts);
  return applications;
}

}  // namespace permanneal
