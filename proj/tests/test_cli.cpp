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

#include <filesystem>
#include <sstream>

#include "cli.hpp"
#include "permanneal/serialize.hpp"

namespace fs = std::filesystem;
namespace cli = permanneal::cli;
namespace io = permanneal::io;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("permanneal_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string instance(int n, std::uint64_t seed = 1) {
    const auto p = path("inst" + std::to_string(n) + ".json");
    EXPECT_EQ(run({"generate", "-n", std::to_string(n), "--seed", std::to_string(seed), "-o", p}).code,
              cli::kExitOk);
    return p;
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, cli::kExitValidation);
  EXPECT_EQ(run({"bogus"}).code, cli::kExitValidation);
  EXPECT_EQ(run({"build"}).code, cli::kExitValidation);
  EXPECT_EQ(run({"--help"}).code, cli::kExitOk);
}

TEST_F(Cli, MissingAndMalformedInputs) {
  auto r = run({"build", path("nope.json")});
  EXPECT_EQ(r.code, cli::kExitValidation);
  EXPECT_NE(r.err.find("nope.json"), std::string::npos);

  io::write_file(path("bad.json"), "{\n\"n\": 2,\n\"W\": [}\n");
  r = run({"build", path("bad.json")});
  EXPECT_EQ(r.code, cli::kExitValidation);
  EXPECT_NE(r.err.find("bad.json:3:"), std::string::npos) << r.err;

  r = run({"build", instance(3), "-f", "column_wise"});
  EXPECT_EQ(r.code, cli::kExitValidation);
}

TEST_F(Cli, BuildZeroInstanceHasZeroPenalties) {
  io::write_file(path("zero.json"), R"({"n": 2, "W": [[0,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]],
    "c": [0,0,0,0]})");
  const auto r = run({"build", path("zero.json"), "-f", "baseline", "-q"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const auto j = io::parse_json(r.out);
  EXPECT_EQ(j["dim"], 4);
  for (const auto& p : j["penalties"]) EXPECT_EQ(p.get<double>(), 0.0);
}

TEST_F(Cli, BuildDimensionsAndPenaltyCounts) {
  auto r = run({"build", instance(3), "-f", "inserted", "-q"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  auto j = io::parse_json(r.out);
  EXPECT_EQ(j["dim"], 4);
  EXPECT_EQ(j["penalties"].size(), 5u);

  r = run({"build", instance(4), "-f", "row_wise", "-q"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  j = io::parse_json(r.out);
  EXPECT_EQ(j["dim"], 16);
  EXPECT_EQ(j["penalties"].size(), 8u);
  EXPECT_EQ(j["provenance"]["tool"], "permanneal");
}

TEST_F(Cli, BuildSummaryGoesToErrWhenDataOnStdout) {
  const auto r = run({"build", instance(3)});
  ASSERT_EQ(r.code, cli::kExitOk);
  EXPECT_NE(r.err.find("dim=9"), std::string::npos);
  EXPECT_EQ(r.out.find("dim=9 "), std::string::npos);
}

TEST_F(Cli, BuildTextExport) {
  const auto r = run({"build", instance(3), "--format", "txt", "-q"});
  ASSERT_EQ(r.code, cli::kExitOk);
  EXPECT_EQ(r.out.rfind("# permanneal", 0), 0u);
  EXPECT_NE(r.out.find("\noffset "), std::string::npos);
}

TEST_F(Cli, GapCsvStartsAtTwo) {
  const auto r = run({"gap", instance(3), "--samples", "9", "-q"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line.rfind("# permanneal", 0), 0u);
  std::getline(lines, line);
  EXPECT_EQ(line, "u,e0,e1,gap");
  std::getline(lines, line);
  const double gap = std::stod(line.substr(line.rfind(',') + 1));
  EXPECT_NEAR(gap, 2.0, 1e-9);
  int rows = 0;
  while (std::getline(lines, line)) ++rows;
  EXPECT_EQ(rows, 8);
}

TEST_F(Cli, GapMultipleScalesAddColumn) {
  const auto r = run({"gap", instance(3), "--scales", "1,2", "--samples", "4", "-q"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_NE(r.out.find("\nscale,u,e0,e1,gap\n"), std::string::npos);
}

TEST_F(Cli, GapSizeCap) {
  const auto r = run({"gap", instance(5)});
  EXPECT_EQ(r.code, cli::kExitSizeCap);
  EXPECT_NE(r.err.find("16"), std::string::npos);
}

TEST_F(Cli, QuantumSolverSizeCap) {
  EXPECT_EQ(run({"solve", instance(4), "--solver", "schrodinger"}).code, cli::kExitSizeCap);
}

TEST_F(Cli, BruteSolveIsOptimal) {
  for (const char* f : {"baseline", "row_wise", "inserted"}) {
    const auto r = run({"solve", instance(3), "-f", f, "--solver", "brute", "-q"});
    ASSERT_EQ(r.code, cli::kExitOk) << r.err;
    const auto j = io::parse_json(r.out);
    EXPECT_EQ(j["summary"]["success_probability"], 1.0) << f;
    EXPECT_EQ(j["summary"]["most_frequent"]["normalized_energy"], 0.0) << f;
    EXPECT_EQ(j["summary"]["random_guess"]["denominator"], 6);
  }
}

TEST_F(Cli, BuiltQuboSolvesLikeFreshOne) {
  const auto inst = instance(3);
  ASSERT_EQ(run({"build", inst, "-f", "row_wise", "--scale", "1.5", "-o", path("q.json"), "-q"}).code,
            cli::kExitOk);
  const auto a = run({"solve", inst, "--qubo", path("q.json"), "--solver", "sa", "--runs", "40",
                      "--sweeps", "30", "--seed", "9", "-q"});
  const auto b = run({"solve", inst, "-f", "row_wise", "--scale", "1.5", "--solver", "sa", "--runs", "40",
                      "--sweeps", "30", "--seed", "9", "-q"});
  ASSERT_EQ(a.code, cli::kExitOk) << a.err;
  ASSERT_EQ(b.code, cli::kExitOk) << b.err;
  const auto ja = io::parse_json(a.out), jb = io::parse_json(b.out);
  EXPECT_EQ(ja["samples"]["entries"], jb["samples"]["entries"]);
  EXPECT_EQ(ja["summary"], jb["summary"]);
}

TEST_F(Cli, QuboForOtherSizeIsRejected) {
  ASSERT_EQ(run({"build", instance(2), "-o", path("q2.json"), "-q"}).code, cli::kExitOk);
  EXPECT_EQ(run({"solve", instance(3), "--qubo", path("q2.json")}).code, cli::kExitValidation);
}

TEST_F(Cli, SolveHistogramFile) {
  const auto r = run({"solve", instance(3), "--solver", "sa", "--runs", "20", "--sweeps", "10",
                      "--histogram", path("h.csv"), "--bins", "5", "-q"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const auto text = io::read_file(path("h.csv"));
  EXPECT_NE(text.find("energy_bin,count,valid_count\n"), std::string::npos);
}

TEST_F(Cli, SchrodingerAndTrotterRun) {
  for (const char* solver : {"schrodinger", "trotter"}) {
    const auto r = run({"solve", instance(2), "-f", "inserted", "--solver", solver, "--tau", "5",
                        "--shots", "50", "--slices", "32", "--steps", "50", "-q"});
    ASSERT_EQ(r.code, cli::kExitOk) << solver << r.err;
    EXPECT_EQ(io::parse_json(r.out)["samples"]["total"], 50) << solver;
  }
}

TEST_F(Cli, SeedsAreReproducible) {
  const auto inst = instance(3);
  auto once = [&](const char* seed) {
    return run({"solve", inst, "--solver", "sa", "--runs", "30", "--sweeps", "5", "--seed", seed, "-q"})
        .out;
  };
  EXPECT_EQ(once("3"), once("3"));
  EXPECT_NE(once("3"), once("4"));
}

TEST_F(Cli, BenchAndReport) {
  io::write_file(path("spec.json"),
                 R"({"preset": "fig2", "num_instances": 2, "scales": [1, 2], "gap_samples": 8})");
  auto r = run({"bench", path("spec.json"), "-o", path("r.json"), "--tables", path("t"), "-q"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const auto j = io::parse_json(io::read_file(path("r.json")));
  EXPECT_EQ(j["instances"].size(), 2u);
  EXPECT_EQ(j["aggregates"].size(), 6u);
  EXPECT_TRUE(fs::exists(path("t.aggregates.csv")));
  EXPECT_TRUE(fs::exists(path("t.records.csv")));

  r = run({"report", path("r.json"), "-q"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_NE(r.out.find("\nformulation,scale,"), std::string::npos);
  r = run({"report", path("r.json"), "--table", "records", "-q"});
  EXPECT_EQ(r.code, cli::kExitOk);
  r = run({"report", path("r.json"), "--table", "nothing"});
  EXPECT_EQ(r.code, cli::kExitValidation);
}

TEST_F(Cli, BenchRejectsBadSpecs) {
  io::write_file(path("empty.json"), R"({"num_instances": 0})");
  EXPECT_EQ(run({"bench", path("empty.json")}).code, cli::kExitValidation);
  io::write_file(path("big.json"), R"({"n": 4, "solver": "schrodinger"})");
  EXPECT_EQ(run({"bench", path("big.json")}).code, cli::kExitSizeCap);
  EXPECT_EQ(run({"bench"}).code, cli::kExitValidation);
  EXPECT_EQ(run({"bench", "--preset", "fig7"}).code, cli::kExitValidation);
}

TEST_F(Cli, DistanceInput) {
  io::write_file(path("d.json"), R"({"n": 2, "d1": [[0, 1], [1, 0]], "d2": [[0, 2], [2, 0]]})");
  const auto r = run({"solve", path("d.json"), "--solver", "brute", "-q"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_DOUBLE_EQ(io::parse_json(r.out)["summary"]["f_opt"].get<double>(), 2.0);
}
