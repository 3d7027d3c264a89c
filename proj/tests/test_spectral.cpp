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

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "permanneal/bench.hpp"
#include "permanneal/eigensolver.hpp"
#include "permanneal/error.hpp"
#include "permanneal/spectral.hpp"

namespace pa = permanneal;

namespace {

pa::SpinModel random_spin(std::mt19937_64& gen, int m) {
  Eigen::MatrixXd J = oracle::random_matrix(gen, m, m);
  J = 0.5 * (J + J.transpose()).eval();
  J.diagonal().setZero();
  return {J, oracle::random_matrix(gen, m, 1).col(0), 0.0};
}

std::vector<double> spin_diagonal(const pa::SpinModel& s) {
  const int m = s.dim();
  std::vector<double> d(std::size_t{1} << m);
  for (std::uint64_t z = 0; z < d.size(); ++z) {
    d[z] = oracle::ising(s.Q_s, s.q_s, s.offset_s, oracle::bits_of(z, m));
  }
  return d;
}

pa::HamiltonianPair pair_of(const pa::QuboModel& m) {
  return pa::build_hamiltonians(pa::normalize_couplings(pa::to_spin(m)));
}

}  // namespace

TEST(Hamiltonians, SingleQubitField) {
  pa::SpinModel s{Eigen::MatrixXd::Zero(1, 1), Eigen::VectorXd::Ones(1), 0.0};
  const auto pair = pa::build_hamiltonians(s);
  EXPECT_EQ(pair.problem_diagonal(), (std::vector<double>{-1.0, 1.0}));
}

TEST(Hamiltonians, ParityCoupling) {
  Eigen::MatrixXd J(2, 2);
  J << 0, 0.5, 0.5, 0;
  const auto pair = pa::build_hamiltonians({J, Eigen::VectorXd::Zero(2), 0.0});
  EXPECT_EQ(pair.problem_diagonal(), (std::vector<double>{1.0, -1.0, -1.0, 1.0}));
}

TEST(Hamiltonians, DiagonalMinimumIsSpinMinimum) {
  const auto m = pa::build_row_wise(pa::generate_instance(3, 2, 0));
  const auto s = pa::to_spin(m);
  const auto pair = pa::build_hamiltonians(s);
  const auto ref = spin_diagonal(s);
  for (std::size_t z = 0; z < ref.size(); ++z) {
    EXPECT_NEAR(pair.problem_diagonal()[z], ref[z], 1e-9);
  }
  EXPECT_NEAR(*std::min_element(pair.problem_diagonal().begin(), pair.problem_diagonal().end()),
              *std::min_element(ref.begin(), ref.end()), 1e-9);
}

TEST(Hamiltonians, SizeCap) {
  pa::SpinModel big{Eigen::MatrixXd::Zero(17, 17), Eigen::VectorXd::Zero(17), 0.0};
  try {
    pa::build_hamiltonians(big);
    FAIL() << "expected a size-cap error";
  } catch (const pa::SizeCapError& e) {
    EXPECT_NE(std::string(e.what()).find("16"), std::string::npos);
  }
}

TEST(Interpolated, Endpoints) {
  std::mt19937_64 gen(5);
  const auto s = random_spin(gen, 3);
  const auto pair = pa::build_hamiltonians(s);
  std::vector<double> plus(8, 1.0 / std::sqrt(8.0)), out(8);
  pa::InterpolatedHamiltonian(pair, 0.0).apply<double>(plus, out);
  for (std::size_t z = 0; z < 8; ++z) EXPECT_NEAR(out[z], -3.0 * plus[z], 1e-14);

  for (std::size_t z = 0; z < 8; ++z) {
    std::vector<double> basis(8, 0.0);
    basis[z] = 1.0;
    pa::InterpolatedHamiltonian(pair, 1.0).apply<double>(basis, out);
    for (std::size_t k = 0; k < 8; ++k) {
      EXPECT_NEAR(out[k], k == z ? pair.problem_diagonal()[z] : 0.0, 1e-14);
    }
  }
  EXPECT_THROW(pa::InterpolatedHamiltonian(pair, 1.5), pa::ValidationError);
  EXPECT_THROW(pa::InterpolatedHamiltonian(pair, -0.1), pa::ValidationError);
}

TEST(Interpolated, HalfWaySingleQubit) {
  const pa::HamiltonianPair pair(1, {0.0, 0.0});
  const auto two = pa::lowest_two_eigenvalues(pa::interpolated_hamiltonian(pair, 0.5).real_operator(),
                                              2);
  EXPECT_NEAR(two.e0, -0.5, 1e-12);
  EXPECT_NEAR(two.e1, 0.5, 1e-12);
}

TEST(Interpolated, Hermitian) {
  std::mt19937_64 gen(6);
  const auto pair = pa::build_hamiltonians(random_spin(gen, 5));
  const auto h = pa::interpolated_hamiltonian(pair, 0.37);
  const Eigen::VectorXd v = oracle::random_matrix(gen, 32, 1).col(0);
  const Eigen::VectorXd w = oracle::random_matrix(gen, 32, 1).col(0);
  Eigen::VectorXd hv(32), hw(32);
  h.apply<double>({v.data(), 32}, {hv.data(), 32});
  h.apply<double>({w.data(), 32}, {hw.data(), 32});
  EXPECT_NEAR(v.dot(hw), hv.dot(w), 1e-10 * std::max(1.0, std::abs(v.dot(hw))));

  const auto dense = oracle::dense_hamiltonian(pair.problem_diagonal(), 5, 0.37);
  EXPECT_TRUE((dense * v).isApprox(hv, 1e-12));
}

TEST(Lanczos, MatchesDenseDiagonalization) {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 2 + trial % 9;
    const auto pair = pa::build_hamiltonians(random_spin(gen, m));
    const double u = u01(gen);
    const auto two =
        pa::lowest_two_eigenvalues(pa::interpolated_hamiltonian(pair, u).real_operator(), 1 << m);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
        oracle::dense_hamiltonian(pair.problem_diagonal(), m, u), Eigen::EigenvaluesOnly);
    EXPECT_NEAR(two.e0, es.eigenvalues()[0], 1e-8) << "m=" << m;
    EXPECT_NEAR(two.e1, es.eigenvalues()[1], 1e-8) << "m=" << m;
  }
}

TEST(Lanczos, RepeatedEigenvalueCountsTwice) {
  // diag(1, 1, 3): the second eigenvalue counted with multiplicity is 1.
  const pa::RealOperator op = [](std::span<const double> in, std::span<double> out) {
    out[0] = in[0];
    out[1] = in[1];
    out[2] = 3.0 * in[2];
  };
  const auto two = pa::lowest_two_eigenvalues(op, 3);
  EXPECT_NEAR(two.e0, 1.0, 1e-12);
  EXPECT_NEAR(two.e1, 1.0, 1e-12);
}

TEST(Lanczos, SmallSubspaceStillConverges) {
  std::mt19937_64 gen(9);
  const auto pair = pa::build_hamiltonians(random_spin(gen, 8));
  pa::LanczosOptions opts;
  opts.krylov_dim = 4;
  const auto op = pa::interpolated_hamiltonian(pair, 0.6).real_operator();
  const auto two = pa::lowest_two_eigenvalues(op, 256, opts);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      oracle::dense_hamiltonian(pair.problem_diagonal(), 8, 0.6), Eigen::EigenvaluesOnly);
  EXPECT_NEAR(two.e0, es.eigenvalues()[0], 1e-8);
  EXPECT_NEAR(two.e1, es.eigenvalues()[1], 1e-8);
}

TEST(Lanczos, ImpossibleToleranceIsASolverError) {
  std::mt19937_64 gen(10);
  const auto pair = pa::build_hamiltonians(random_spin(gen, 6));
  pa::LanczosOptions opts;
  opts.krylov_dim = 3;
  opts.max_restarts = 1;
  opts.max_growth = 0;
  opts.tol = 1e-30;
  EXPECT_THROW(
      pa::lowest_eigenpair(pa::interpolated_hamiltonian(pair, 0.5).real_operator(), 64, {}, opts),
      pa::SolverError);
}

TEST(Normalize, HardwareRange) {
  const auto s = pa::to_spin(pa::build_baseline(pa::generate_instance(3, 1, 0)));
  double divisor = 0.0;
  const auto n = pa::normalize_couplings(s, &divisor);
  EXPECT_GT(divisor, 0.0);
  double max_j = 0.0, max_h = 0.0;
  for (int i = 0; i < n.dim(); ++i) {
    max_h = std::max(max_h, std::abs(n.q_s[i]));
    for (int j = i + 1; j < n.dim(); ++j) {
      max_j = std::max(max_j, std::abs(n.Q_s(i, j) + n.Q_s(j, i)));
    }
  }
  EXPECT_LE(max_j, 1.0 + 1e-12);
  EXPECT_LE(max_h, 2.0 + 1e-12);
  EXPECT_TRUE(std::abs(max_j - 1.0) < 1e-12 || std::abs(max_h - 2.0) < 1e-12);

  double zero_div = 0.0;
  pa::normalize_couplings({Eigen::MatrixXd::Zero(2, 2), Eigen::VectorXd::Zero(2), 0.0},
                          &zero_div);
  EXPECT_EQ(zero_div, 1.0);
}

TEST(Gap, EndpointIsTwoAtZero) {
  const auto pair = pair_of(pa::build_baseline(pa::generate_instance(2, 3, 0)));
  const auto p = pa::spectral_gap(pair, 16);
  ASSERT_EQ(p.ts.front(), 0.0);
  EXPECT_NEAR(p.gap(0), 2.0, 1e-9);
  EXPECT_EQ(p.ts.back(), 1.0);
}

TEST(Gap, DegenerateOptimaCloseTheGap) {
  const auto pair = pair_of(pa::build_baseline(pa::QapInstance::zero(2)));
  const auto p = pa::spectral_gap(pair, 8);
  EXPECT_EQ(p.gap(p.ts.size() - 1), 0.0);
  EXPECT_EQ(p.min_gap, 0.0);
  EXPECT_GE(p.degenerate_points, 1);
}

TEST(Gap, ProfileInvariants) {
  const auto pair = pair_of(pa::build_row_wise(pa::generate_instance(3, 4, 0)));
  const auto p = pa::spectral_gap(pair, 32);
  double min_gap = 1e300;
  for (std::size_t k = 0; k < p.ts.size(); ++k) {
    EXPECT_GE(p.e1[k], p.e0[k]);
    EXPECT_GE(p.gap(k), 0.0);
    min_gap = std::min(min_gap, p.gap(k));
  }
  EXPECT_EQ(p.min_gap, min_gap);
}

TEST(Gap, ParallelMatchesSerial) {
  const auto pair = pair_of(pa::build_inserted(pa::generate_instance(4, 4, 0)));
  const auto a = pa::spectral_gap(pair, 24, 1);
  const auto b = pa::spectral_gap(pair, 24, 3);
  EXPECT_EQ(a.e0, b.e0);
  EXPECT_EQ(a.e1, b.e1);
}

TEST(Gap, GridRefinementIsStable) {
  for (std::uint64_t k = 0; k < 3; ++k) {
    const auto pair = pair_of(pa::build_baseline(pa::generate_instance(3, 40, k)));
    const double coarse = pa::spectral_gap(pair, 64).min_gap;
    const double fine = pa::spectral_gap(pair, 127).min_gap;
    EXPECT_LT(std::abs(fine - coarse), 0.05 * coarse) << "instance " << k;
  }
}

TEST(Gap, ShrinksWithPenaltyScale) {
  const auto inst = pa::generate_instance(3, 41, 0);
  for (auto f : pa::kAllFormulations) {
    const double g1 = pa::spectral_gap(pair_of(pa::build_qubo(inst, f, 1.0))).min_gap;
    const double g3 = pa::spectral_gap(pair_of(pa::build_qubo(inst, f, 3.0))).min_gap;
    EXPECT_LT(g3, g1) << pa::to_string(f);
  }
}
