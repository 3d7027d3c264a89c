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

#include "permanneal/serialize.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "permanneal/error.hpp"

namespace permanneal::io {

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex_digest(std::uint64_t hash) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int k = 15; k >= 0; --k) {
    out[k] = kDigits[hash & 0xf];
    hash >>= 4;
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write '" + path.string() + "'");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
}

json parse_json(std::string_view text, std::string_view origin) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t k = 0; k < stop; ++k) {
      if (text[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ValidationError(std::string(origin) + ":" + std::to_string(line) + ":" +
                          std::to_string(col) + ": malformed JSON");
  }
}

std::string dump(const json& value) { return value.dump(2) + "\n"; }

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) return "0";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

json provenance(std::uint64_t seed, const std::map<std::string, std::string>& input_hashes) {
  json inputs = json::object();
  for (const auto& [name, hash] : input_hashes) inputs[name] = hash;
  return {{"tool", "permanneal"}, {"version", PERMANNEAL_VERSION}, {"seed", seed},
          {"inputs", inputs}};
}

namespace {

const json& field(const json& j, const char* key, std::string_view ctx) {
  if (!j.is_object()) throw ValidationError(std::string(ctx) + ": expected a JSON object");
  const auto it = j.find(key);
  if (it == j.end()) {
    throw ValidationError(std::string(ctx) + ": missing field '" + key + "'");
  }
  return *it;
}

double number(const json& j, std::string_view where) {
  if (!j.is_number()) throw ValidationError(std::string(where) + ": expected a number");
  return j.get<double>();
}

int integer(const json& j, std::string_view where) {
  if (!j.is_number_integer()) throw ValidationError(std::string(where) + ": expected an integer");
  return j.get<int>();
}

Eigen::VectorXd read_vector(const json& j, Eigen::Index size, const std::string& where) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != size) {
    throw ValidationError(where + ": expected an array of " + std::to_string(size) + " numbers");
  }
  Eigen::VectorXd v(size);
  for (Eigen::Index i = 0; i < size; ++i) {
    v[i] = number(j[static_cast<std::size_t>(i)], where + "[" + std::to_string(i) + "]");
  }
  return v;
}

Eigen::MatrixXd read_matrix(const json& j, Eigen::Index rows, Eigen::Index cols,
                            const std::string& where) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows) {
    throw ValidationError(where + ": expected " + std::to_string(rows) + " rows");
  }
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    m.row(r) = read_vector(j[static_cast<std::size_t>(r)], cols,
                           where + "[" + std::to_string(r) + "]")
                   .transpose();
  }
  return m;
}

json vector_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

json matrix_json(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(vector_json(m.row(r).transpose()));
  return out;
}

int positive_n(const json& j, std::string_view ctx) {
  const int n = integer(field(j, "n", ctx), std::string(ctx) + ".n");
  if (n < 1) throw ValidationError(std::string(ctx) + ".n: must be positive");
  return n;
}

template <typename T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

std::string csv_optional(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

}  // namespace

json to_json(const QapInstance& inst) {
  return {{"n", inst.n()}, {"W", matrix_json(inst.W())}, {"c", vector_json(inst.c())}};
}

QapInstance instance_from_json(const json& j) {
  const int n = positive_n(j, "instance");
  const int dim = n * n;
  return QapInstance(n, read_matrix(field(j, "W", "instance"), dim, dim, "instance.W"),
                     read_vector(field(j, "c", "instance"), dim, "instance.c"));
}

json to_json(const DistanceData& dist) {
  json out = {{"n", dist.d1.rows()}, {"d1", matrix_json(dist.d1)}, {"d2", matrix_json(dist.d2)}};
  if (dist.linear_bias) out["linear_bias"] = matrix_json(*dist.linear_bias);
  return out;
}

DistanceData distance_from_json(const json& j) {
  const int n = positive_n(j, "distances");
  DistanceData d;
  d.d1 = read_matrix(field(j, "d1", "distances"), n, n, "distances.d1");
  d.d2 = read_matrix(field(j, "d2", "distances"), n, n, "distances.d2");
  if (j.contains("linear_bias") && !j["linear_bias"].is_null()) {
    d.linear_bias = read_matrix(j["linear_bias"], n, n, "distances.linear_bias");
  }
  return d;
}

QapInstance load_instance(const std::filesystem::path& path) {
  const json j = parse_json(read_file(path), path.string());
  if (j.is_object() && j.contains("d1")) return isometric_cost(distance_from_json(j));
  return instance_from_json(j);
}

json to_json(const QuboModel& model) {
  json bounds = {{"lambda_baseline", model.bounds.lambda_baseline},
                 {"lambda_rows", model.bounds.lambda_rows},
                 {"lambda1", model.bounds.lambda1},
                 {"lambda2", model.bounds.lambda2}};
  return {{"dim", model.dim},
          {"formulation", std::string(to_string(model.formulation))},
          {"n", model.n},
          {"Q", matrix_json(model.Q)},
          {"q", vector_json(model.q)},
          {"offset", model.offset},
          {"scale", model.scale},
          {"provable", model.provable()},
          {"penalties", model.penalties},
          {"bounds", bounds}};
}

QuboModel qubo_from_json(const json& j) {
  QuboModel m;
  m.formulation = parse_formulation(field(j, "formulation", "qubo").get<std::string>());
  m.n = positive_n(j, "qubo");
  m.dim = integer(field(j, "dim", "qubo"), "qubo.dim");
  const int expected = m.formulation == Formulation::inserted ? (m.n - 1) * (m.n - 1) : m.n * m.n;
  if (m.dim != expected) {
    throw ValidationError("qubo.dim: " + std::to_string(m.dim) + " does not match formulation " +
                          std::string(to_string(m.formulation)) + " at n = " +
                          std::to_string(m.n));
  }
  m.Q = read_matrix(field(j, "Q", "qubo"), m.dim, m.dim, "qubo.Q");
  m.q = read_vector(field(j, "q", "qubo"), m.dim, "qubo.q");
  m.offset = number(field(j, "offset", "qubo"), "qubo.offset");
  if (j.contains("scale")) m.scale = number(j["scale"], "qubo.scale");
  if (j.contains("penalties")) m.penalties = j["penalties"].get<std::vector<double>>();
  if (j.contains("bounds")) {
    const json& b = j["bounds"];
    m.bounds.lambda_baseline = number(field(b, "lambda_baseline", "qubo.bounds"),
                                      "qubo.bounds.lambda_baseline");
    m.bounds.lambda_rows = field(b, "lambda_rows", "qubo.bounds").get<std::vector<double>>();
    m.bounds.lambda1 = field(b, "lambda1", "qubo.bounds").get<std::vector<double>>();
    m.bounds.lambda2 = number(field(b, "lambda2", "qubo.bounds"), "qubo.bounds.lambda2");
  }
  return m;
}

std::string sparse_text(const QuboModel& model) {
  std::string out = "offset " + format_double(model.offset) + "\n";
  for (const auto& t : upper_triangular_terms(model)) {
    out += std::to_string(t.i) + " " + std::to_string(t.j) + " " + format_double(t.value) + "\n";
  }
  return out;
}

std::string gap_csv(const std::vector<ScaledProfile>& profiles) {
  const bool with_scale = profiles.size() > 1;
  std::string out = with_scale ? "scale,u,e0,e1,gap\n" : "u,e0,e1,gap\n";
  for (const auto& sp : profiles) {
    const auto& p = sp.profile;
    for (std::size_t k = 0; k < p.ts.size(); ++k) {
      if (with_scale) out += format_double(sp.scale) + ",";
      out += format_double(p.ts[k]) + "," + format_double(p.e0[k]) + "," +
             format_double(p.e1[k]) + "," + format_double(p.gap(k)) + "\n";
    }
  }
  return out;
}

json gap_summary(const ScaledProfile& p, Formulation f) {
  return {{"min_gap", p.profile.min_gap},
          {"argmin_t", p.profile.argmin_t},
          {"formulation", std::string(to_string(f))},
          {"scale", p.scale},
          {"samples", p.profile.ts.size()},
          {"degenerate_points", p.profile.degenerate_points}};
}

json to_json(const SampleSet& samples, std::string_view model_hash) {
  json entries = json::array();
  for (const auto& e : samples.entries) {
    json entry = {{"bits", e.bits.to_string()},
                  {"energy", e.energy},
                  {"count", e.count},
                  {"valid", e.valid}};
    entry["permutation"] = e.permutation ? json(e.permutation->assignment()) : json(nullptr);
    entries.push_back(std::move(entry));
  }
  return {{"entries", entries},
          {"total", samples.total},
          {"solver", samples.solver},
          {"seed", samples.seed},
          {"model_hash", std::string(model_hash)},
          {"parameters", samples.parameters}};
}

std::string histogram_csv(const std::vector<HistogramBin>& bins) {
  std::string out = "energy_bin,count,valid_count\n";
  for (const auto& b : bins) {
    out += format_double(b.energy) + "," + std::to_string(b.count) + "," +
           std::to_string(b.valid_count) + "\n";
  }
  return out;
}

json to_json(const SolverParams& p) {
  return {{"tau", p.tau},       {"steps", p.steps},   {"slices", p.slices},
          {"pause_fraction", p.pause_fraction},     {"shots", p.shots},
          {"sweeps", p.sweeps}, {"runs", p.runs},     {"t_hi", optional_json(p.t_hi)},
          {"t_lo", optional_json(p.t_lo)}};
}

json to_json(const ExperimentSpec& spec) {
  json forms = json::array();
  for (Formulation f : spec.formulations) forms.push_back(std::string(to_string(f)));
  return {{"n", spec.n},
          {"num_instances", spec.num_instances},
          {"seed", spec.seed},
          {"formulations", forms},
          {"scales", spec.scales},
          {"sparsity", spec.sparsity},
          {"solver", std::string(to_string(spec.solver))},
          {"params", to_json(spec.params)},
          {"compute_gap", spec.compute_gap},
          {"gap_samples", spec.gap_samples}};
}

namespace {

void reject_unknown(const json& j, const std::set<std::string>& known, std::string_view ctx) {
  for (const auto& [key, _] : j.items()) {
    if (!known.count(key)) {
      throw ValidationError(std::string(ctx) + ": unknown field '" + key + "'");
    }
  }
}

template <typename T>
void read_if(const json& j, const char* key, T& dst, std::string_view ctx) {
  const auto it = j.find(key);
  if (it == j.end()) return;
  try {
    dst = it->get<T>();
  } catch (const json::exception&) {
    throw ValidationError(std::string(ctx) + "." + key + ": wrong type");
  }
}

}  // namespace

ExperimentSpec spec_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("spec: expected a JSON object");
  ExperimentSpec spec;
  if (j.contains("preset")) spec = preset(j["preset"].get<std::string>());
  reject_unknown(j,
                 {"preset", "n", "num_instances", "seed", "formulations", "scales", "sparsity",
                  "solver", "params", "compute_gap", "gap_samples"},
                 "spec");
  read_if(j, "n", spec.n, "spec");
  read_if(j, "num_instances", spec.num_instances, "spec");
  read_if(j, "seed", spec.seed, "spec");
  read_if(j, "scales", spec.scales, "spec");
  read_if(j, "sparsity", spec.sparsity, "spec");
  read_if(j, "compute_gap", spec.compute_gap, "spec");
  read_if(j, "gap_samples", spec.gap_samples, "spec");
  if (j.contains("formulations")) {
    spec.formulations.clear();
    for (const auto& f : j["formulations"]) {
      spec.formulations.push_back(parse_formulation(f.get<std::string>()));
    }
  }
  if (j.contains("solver")) spec.solver = parse_solver(j["solver"].get<std::string>());
  if (j.contains("params")) {
    const json& p = j["params"];
    reject_unknown(p,
                   {"tau", "steps", "slices", "pause_fraction", "shots", "sweeps", "runs", "t_hi",
                    "t_lo"},
                   "spec.params");
    auto& sp = spec.params;
    read_if(p, "tau", sp.tau, "spec.params");
    read_if(p, "steps", sp.steps, "spec.params");
    read_if(p, "slices", sp.slices, "spec.params");
    read_if(p, "pause_fraction", sp.pause_fraction, "spec.params");
    read_if(p, "shots", sp.shots, "spec.params");
    read_if(p, "sweeps", sp.sweeps, "spec.params");
    read_if(p, "runs", sp.runs, "spec.params");
    if (p.contains("t_hi") && !p["t_hi"].is_null()) sp.t_hi = number(p["t_hi"], "spec.params.t_hi");
    if (p.contains("t_lo") && !p["t_lo"].is_null()) sp.t_lo = number(p["t_lo"], "spec.params.t_lo");
  }
  spec.validate();
  return spec;
}

json to_json(const BenchReport& report) {
  json instances = json::array();
  for (const auto& inst : report.instances) {
    json records = json::array();
    for (const auto& r : inst.records) {
      records.push_back({{"formulation", std::string(to_string(r.formulation))},
                         {"scale", r.scale},
                         {"dim", r.dim},
                         {"selected", r.selected},
                         {"valid", r.valid},
                         {"energy", r.energy},
                         {"normalized_energy", r.normalized_energy},
                         {"success", r.success},
                         {"success_probability", r.success_probability},
                         {"min_gap", optional_json(r.min_gap)},
                         {"argmin_t", optional_json(r.argmin_t)},
                         {"chain_length", nullptr},
                         {"chain_breaks", nullptr}});
    }
    instances.push_back({{"index", inst.index},
                         {"f_opt", inst.f_opt},
                         {"f_worst", inst.f_worst},
                         {"optimum", inst.optimum},
                         {"external_baseline_energy", optional_json(inst.external_baseline_energy)},
                         {"records", records}});
  }
  json aggregates = json::array();
  for (const auto& a : report.aggregates) {
    aggregates.push_back({{"formulation", std::string(to_string(a.formulation))},
                          {"scale", a.scale},
                          {"instances", a.instances},
                          {"mean_normalized_energy", a.mean_normalized_energy},
                          {"mean_success_probability", a.mean_success_probability},
                          {"success_rate", a.success_rate},
                          {"mean_min_gap", optional_json(a.mean_min_gap)}});
  }
  const double guess = 1.0 / static_cast<double>(factorial(report.spec.n));
  return {{"spec", to_json(report.spec)},
          {"instances", instances},
          {"aggregates", aggregates},
          {"mean_worst_normalized", report.mean_worst_normalized},
          {"random_guess", {{"numerator", 1},
                            {"denominator", factorial(report.spec.n)},
                            {"value", guess}}}};
}

namespace {

std::optional<double> optional_number(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return number(*it, key);
}

}  // namespace

BenchReport report_from_json(const json& j) {
  BenchReport r;
  r.spec = spec_from_json(field(j, "spec", "report"));
  for (const auto& ij : field(j, "instances", "report")) {
    InstanceRecord inst;
    inst.index = ij.at("index").get<std::size_t>();
    inst.f_opt = number(ij.at("f_opt"), "report.instances.f_opt");
    inst.f_worst = number(ij.at("f_worst"), "report.instances.f_worst");
    inst.optimum = ij.at("optimum").get<std::vector<int>>();
    inst.external_baseline_energy = optional_number(ij, "external_baseline_energy");
    for (const auto& rj : ij.at("records")) {
      FormulationRecord rec;
      rec.formulation = parse_formulation(rj.at("formulation").get<std::string>());
      rec.scale = number(rj.at("scale"), "record.scale");
      rec.dim = rj.at("dim").get<int>();
      rec.selected = rj.at("selected").get<std::string>();
      rec.valid = rj.at("valid").get<bool>();
      rec.energy = number(rj.at("energy"), "record.energy");
      rec.normalized_energy = number(rj.at("normalized_energy"), "record.normalized_energy");
      rec.success = rj.at("success").get<bool>();
      rec.success_probability =
          number(rj.at("success_probability"), "record.success_probability");
      rec.min_gap = optional_number(rj, "min_gap");
      rec.argmin_t = optional_number(rj, "argmin_t");
      inst.records.push_back(std::move(rec));
    }
    r.instances.push_back(std::move(inst));
  }
  for (const auto& aj : field(j, "aggregates", "report")) {
    Aggregate a;
    a.formulation = parse_formulation(aj.at("formulation").get<std::string>());
    a.scale = number(aj.at("scale"), "aggregate.scale");
    a.instances = aj.at("instances").get<std::size_t>();
    a.mean_normalized_energy = number(aj.at("mean_normalized_energy"), "aggregate");
    a.mean_success_probability = number(aj.at("mean_success_probability"), "aggregate");
    a.success_rate = number(aj.at("success_rate"), "aggregate");
    a.mean_min_gap = optional_number(aj, "mean_min_gap");
    r.aggregates.push_back(a);
  }
  r.mean_worst_normalized =
      number(field(j, "mean_worst_normalized", "report"), "report.mean_worst_normalized");
  return r;
}

std::string report_csv(const BenchReport& report) {
  std::string out =
      "instance,formulation,scale,dim,valid,energy,f_opt,normalized_energy,success,"
      "success_probability,min_gap,argmin_t,external_baseline_energy,chain_length,chain_breaks\n";
  for (const auto& inst : report.instances) {
    for (const auto& r : inst.records) {
      out += std::to_string(inst.index) + "," + std::string(to_string(r.formulation)) + "," +
             format_double(r.scale) + "," + std::to_string(r.dim) + "," +
             (r.valid ? "1" : "0") + "," + format_double(r.energy) + "," +
             format_double(inst.f_opt) + "," + format_double(r.normalized_energy) + "," +
             (r.success ? "1" : "0") + "," + format_double(r.success_probability) + "," +
             csv_optional(r.min_gap) + "," + csv_optional(r.argmin_t) + "," +
             csv_optional(inst.external_baseline_energy) + ",,\n";
    }
  }
  return out;
}

std::string aggregate_csv(const BenchReport& report) {
  std::string out =
      "formulation,scale,instances,mean_normalized_energy,mean_success_probability,"
      "success_rate,mean_min_gap\n";
  for (const auto& a : report.aggregates) {
    out += std::string(to_string(a.formulation)) + "," + format_double(a.scale) + "," +
           std::to_string(a.instances) + "," + format_double(a.mean_normalized_energy) + "," +
           format_double(a.mean_success_probability) + "," + format_double(a.success_rate) +
           "," + csv_optional(a.mean_min_gap) + "\n";
  }
  return out;
}

}  // namespace permanneal::io
