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
#include "permanneal/error.hpp"
#include "permanneal/serialize.hpp"

namespace pa = permanneal;

namespace {

int zeros(const pa::QapInstance& inst) {
  return static_cast<int>((inst.W().array() == 0.0).count() + (inst.c().array() == 0.0).count());
}

pa::ExperimentSpec small_spec(pa::Solver solver) {
  pa::ExperimentSpec spec;
  spec.n = 3;
  spec.num_instances = 3;
  spec.seed = 12;
  spec.solver = solver;
  spec.params.runs = 50;
  spec.params.sweeps = 50;
  spec.params.tau = 20.0;
  spec.params.steps = 100;
  spec.params.shots = 200;
  return spec;
}

}  // namespace

TEST(Generate, EntriesInRangeAndDeterministic) {
  const auto a = pa::generate_instance(3, 5, 2);
  const auto b = pa::generate_instance(3, 5, 2);
  const auto c = pa::generate_instance(3, 5, 3);
  EXPECT_EQ(a.W(), b.W());
  EXPECT_EQ(a.c(), b.c());
  EXPECT_NE(a.W(), c.W());
  EXPECT_LE(a.W().cwiseAbs().maxCoeff(), 1.0);
  EXPECT_LE(a.c().cwiseAbs().maxCoeff(), 1.0);
}

TEST(Generate, ExactSparsity) {
  EXPECT_EQ(zeros(pa::generate_instance(4, 1, 0, 0.5)), 136);
  EXPECT_EQ(zeros(pa::generate_instance(4, 1, 0, 0.75)), 204);
  EXPECT_EQ(zeros(pa::generate_instance(4, 1, 0, 0.0)), 0);
  EXPECT_EQ(zeros(pa::generate_instance(3, 2, 0, 0.3)), 27);  // floor(0.3 * 90)
  EXPECT_THROW(pa::generate_instance(3, 1, 0, 1.0), pa::ValidationError);
}

TEST(Generate, SparsityKeepsPenaltyConnectivity) {
  const auto sys = pa::build_constraints(4);
  const Eigen::MatrixXd AtA = sys.A.transpose() * sys.A;
  for (double sparsity : {0.0, 0.5, 0.75}) {
    const auto inst = pa::generate_instance(4, 8, 0, sparsity);
    const auto model = pa::build_baseline(inst);
    const Eigen::MatrixXd penalty = model.Q - pa::symmetrize(inst).W();
    for (int i = 0; i < 16; ++i) {
      for (int j = 0; j < 16; ++j) {
        if (i == j) continue;
        EXPECT_EQ(penalty(i, j) != 0.0, AtA(i, j) != 0.0) << i << "," << j;
      }
    }
  }
}

TEST(Spec, Validation) {
  pa::ExperimentSpec spec;
  EXPECT_NO_THROW(spec.validate());
  spec.num_instances = 0;
  EXPECT_THROW(spec.validate(), pa::ValidationError);
  spec = {};
  spec.scales.clear();
  EXPECT_THROW(spec.validate(), pa::ValidationError);
  spec = {};
  spec.formulations.clear();
  EXPECT_THROW(spec.validate(), pa::ValidationError);
  spec = {};
  spec.scales = {0.0};
  EXPECT_THROW(spec.validate(), pa::ValidationError);
  spec = {};
  spec.n = 4;
  spec.solver = pa::Solver::schrodinger;
  EXPECT_THROW(spec.validate(), pa::SizeCapError);  // 16 qubits > 12
  spec.formulations = {pa::Formulation::inserted};
  EXPECT_NO_THROW(spec.validate());
  spec = {};
  spec.n = 5;
  spec.compute_gap = true;
  spec.solver = pa::Solver::sa;
  EXPECT_THROW(spec.validate(), pa::SizeCapError);
  spec = {};
  spec.n = 9;
  spec.solver = pa::Solver::sa;
  EXPECT_THROW(spec.validate(), pa::SizeCapError);
}

TEST(Run, BruteSolverIsAlwaysOptimal) {
  auto spec = small_spec(pa::Solver::brute);
  spec.num_instances = 4;
  const auto report = pa::run_experiment(spec);
  ASSERT_EQ(report.aggregates.size(), 3u);
  for (const auto& agg : report.aggregates) {
    EXPECT_EQ(agg.instances, 4u);
    EXPECT_EQ(agg.mean_normalized_energy, 0.0);
    EXPECT_EQ(agg.mean_success_probability, 1.0);
    EXPECT_EQ(agg.success_rate, 1.0);
  }
  for (const auto& inst : report.instances) {
    const auto ref = oracle::qap_optimum(pa::generate_instance(3, 12, inst.index).W(),
                                         pa::generate_instance(3, 12, inst.index).c(), 3);
    EXPECT_NEAR(inst.f_opt, ref.energy, 1e-12);
  }
  EXPECT_GT(report.mean_worst_normalized, 0.0);
}

TEST(Run, NormalizedEnergiesAreNonNegative) {
  auto spec = small_spec(pa::Solver::sa);
  spec.params.sweeps = 2;
  spec.params.runs = 3;
  const auto report = pa::run_experiment(spec);
  for (const auto& inst : report.instances) {
    for (const auto& r : inst.records) {
      EXPECT_GE(r.normalized_energy, 0.0);
      EXPECT_EQ(r.normalized_energy == 0.0, r.success);
      if (!r.valid) EXPECT_DOUBLE_EQ(r.normalized_energy, inst.f_worst - inst.f_opt);
    }
  }
}

TEST(Run, SerialAndParallelReportsAreIdentical) {
  for (auto solver : {pa::Solver::sa, pa::Solver::schrodinger, pa::Solver::trotter}) {
    auto spec = small_spec(solver);
    spec.formulations = {pa::Formulation::inserted, pa::Formulation::row_wise};
    spec.params.slices = 64;
    const auto a = pa::io::dump(pa::io::to_json(pa::run_experiment(spec, 1)));
    const auto b = pa::io::dump(pa::io::to_json(pa::run_experiment(spec, 3)));
    const auto c = pa::io::dump(pa::io::to_json(pa::run_experiment(spec, 1)));
    EXPECT_EQ(a, b) << pa::to_string(solver);
    EXPECT_EQ(a, c) << pa::to_string(solver);
  }
}

TEST(Run, GapsAreRecordedPerScale) {
  auto spec = small_spec(pa::Solver::brute);
  spec.num_instances = 2;
  spec.formulations = {pa::Formulation::inserted};
  spec.scales = {1.0, 3.0};
  spec.compute_gap = true;
  spec.gap_samples = 16;
  const auto report = pa::run_experiment(spec);
  ASSERT_EQ(report.aggregates.size(), 2u);
  for (const auto& agg : report.aggregates) ASSERT_TRUE(agg.mean_min_gap.has_value());
  EXPECT_LT(*report.aggregates[1].mean_min_gap, *report.aggregates[0].mean_min_gap);
}

TEST(Solve, RejectsSizeMismatch) {
  const auto model = pa::build_baseline(pa::generate_instance(4, 1, 0));
  EXPECT_THROW(pa::solve_qubo(model, pa::Solver::schrodinger, {}, 1), pa::SizeCapError);
}

TEST(Solver, Names) {
  for (auto s : {pa::Solver::brute, pa::Solver::sa, pa::Solver::schrodinger, pa::Solver::trotter}) {
    EXPECT_EQ(pa::parse_solver(pa::to_string(s)), s);
  }
  EXPECT_THROW(pa::parse_solver("qpu"), pa::ValidationError);
}

TEST(Presets, Protocols) {
  const auto fig2 = pa::preset("fig2");
  EXPECT_EQ(fig2.n, 3);
  EXPECT_EQ(fig2.num_instances, 10);
  EXPECT_EQ(fig2.scales, (std::vector<double>{1, 2, 3, 4, 5}));
  EXPECT_TRUE(fig2.compute_gap);
  const auto fig6 = pa::preset("fig6");
  EXPECT_EQ(fig6.n, 4);
  EXPECT_EQ(fig6.sparsity, 0.5);
  EXPECT_EQ(fig6.params.runs, 500);
  const auto supp = pa::preset("supp-sa");
  EXPECT_EQ(supp.solver, pa::Solver::sa);
  EXPECT_EQ(supp.params.runs, 5000);
  EXPECT_EQ(supp.num_instances, 10);
  for (const auto& name : pa::preset_names()) EXPECT_NO_THROW(pa::preset(name).validate());
  EXPECT_THROW(pa::preset("fig9"), pa::ValidationError);
}

TEST(MeanColor, IdenticalColorsAreDegenerate) {
  const std::vector<pa::Color> colors(4, {0.2, 0.4, 0.6});
  const auto inst = pa::mean_color_sorting_instance(colors, 2);
  const double first = pa::permutation_energy(inst, {0, 1, 2, 3});
  for (const auto& p : oracle::heap_permutations(4)) {
    EXPECT_NEAR(pa::permutation_energy(inst, p), first, 1e-12);
  }
}

TEST(MeanColor, GridOrderedColorsAreOptimalAtZero) {
  // Colour p placed at the grid coordinates of cell p reproduces d2 exactly.
  const std::vector<pa::Color> colors{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}};
  const auto inst = pa::mean_color_sorting_instance(colors, 2);
  const auto opt = pa::brute_force_qap(inst);
  EXPECT_NEAR(opt.energy, 0.0, 1e-12);
  EXPECT_NEAR(pa::permutation_energy(inst, {0, 1, 2, 3}), 0.0, 1e-12);
}

TEST(MeanColor, MatchesExplicitEnumeration) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<pa::Color> colors(4);
  for (auto& c : colors) c = {u(gen), u(gen), u(gen)};
  const auto inst = pa::mean_color_sorting_instance(colors, 2);
  auto grid = [](int p, int r) {
    return std::hypot(double(p % 2 - r % 2), double(p / 2 - r / 2));
  };
  auto color = [&](int a, int b) {
    return std::sqrt(std::pow(colors[a][0] - colors[b][0], 2) +
                     std::pow(colors[a][1] - colors[b][1], 2) +
                     std::pow(colors[a][2] - colors[b][2], 2));
  };
  double best = 1e300;
  for (const auto& p : oracle::heap_permutations(4)) {
    double e = 0.0;
    for (int j = 0; j < 4; ++j) {
      for (int l = 0; l < 4; ++l) e += std::abs(color(p[j], p[l]) - grid(j, l));
    }
    best = std::min(best, e);
  }
  EXPECT_NEAR(pa::brute_force_qap(inst).energy, best, 1e-12);
  EXPECT_THROW(pa::mean_color_sorting_instance(colors, 3), pa::ValidationError);
}
