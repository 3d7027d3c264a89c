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

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "permanneal/anneal.hpp"
#include "permanneal/bench.hpp"
#include "permanneal/qap.hpp"
#include "permanneal/qubo.hpp"
#include "permanneal/spectral.hpp"

namespace permanneal::io {

using nlohmann::json;

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes);
/// 16 lowercase hex digits.
std::string hex_digest(std::uint64_t hash);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

/// Parses JSON text; syntax errors become ValidationError naming the line
/// and column. `origin` prefixes the message (usually the file name).
json parse_json(std::string_view text, std::string_view origin = "input");

/// Stable textual form: two-space indent, sorted keys, trailing newline.
std::string dump(const json& value);

/// Shortest decimal that reads back to the same double.
std::string format_double(double value);

/// {"tool", "version", "seed", "inputs": {name: hash}}.
json provenance(std::uint64_t seed, const std::map<std::string, std::string>& input_hashes);

// Instances ------------------------------------------------------------------

/// {"n", "W": n^2 rows of n^2 reals, "c": n^2 reals}.
json to_json(const QapInstance& inst);
QapInstance instance_from_json(const json& j);

/// {"n", "d1": n x n, "d2": n x n, "linear_bias": optional n x n}.
json to_json(const DistanceData& dist);
DistanceData distance_from_json(const json& j);

/// Accepts either an instance file or a distance file (which is turned into
/// an instance through isometric_cost).
QapInstance load_instance(const std::filesystem::path& path);

// QUBO -------------------------------------------------------------------------

/// {"dim", "formulation", "n", "Q", "q", "offset", "scale", "penalties",
/// "bounds"}.
json to_json(const QuboModel& model);
QuboModel qubo_from_json(const json& j);

/// "offset <v>" followed by "i j value" lines of the upper-triangular form;
/// linear terms appear as "i i value".
std::string sparse_text(const QuboModel& model);

// Spectral ---------------------------------------------------------------------

struct ScaledProfile {
  double scale = 1.0;
  GapProfile profile;
};

/// Columns u, e0, e1, gap. With more than one profile a leading scale column
/// is added.
std::string gap_csv(const std::vector<ScaledProfile>& profiles);
json gap_summary(const ScaledProfile& p, Formulation f);

// Samples ----------------------------------------------------------------------

json to_json(const SampleSet& samples, std::string_view model_hash);
/// Columns energy_bin, count, valid_count.
std::string histogram_csv(const std::vector<HistogramBin>& bins);

// Benchmarks -------------------------------------------------------------------

json to_json(const SolverParams& params);
json to_json(const ExperimentSpec& spec);
/// Missing keys keep their defaults; unknown keys are rejected.
ExperimentSpec spec_from_json(const json& j);

json to_json(const BenchReport& report);
BenchReport report_from_json(const json& j);
/// One row per (instance, formulation, scale).
std::string report_csv(const BenchReport& report);
/// One row per (formulation, scale).
std::string aggregate_csv(const BenchReport& report);

}  // namespace permanneal::io
