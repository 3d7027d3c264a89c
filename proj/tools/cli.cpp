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

#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "permanneal/anneal.hpp"
#include "permanneal/bench.hpp"
#include "permanneal/error.hpp"
#include "permanneal/qubo.hpp"
#include "permanneal/serialize.hpp"
#include "permanneal/spectral.hpp"

namespace permanneal::cli {

namespace {

using io::json;

struct Globals {
  std::uint64_t seed = 1;
  bool seed_given = false;
  std::string out_path;
  std::string format;
  bool quiet = false;
};

// Where data goes (the --out file or stdout) and where summaries go.
class Sink {
 public:
  Sink(const Globals& g, std::ostream& out, std::ostream& err) : g_(g), out_(out), err_(err) {}

  std::string format(const std::string& fallback) const {
    if (!g_.format.empty()) return g_.format;
    const auto ext = std::filesystem::path(g_.out_path).extension().string();
    if (ext == ".csv") return "csv";
    if (ext == ".txt") return "txt";
    if (ext == ".json") return "json";
    return fallback;
  }

  void emit(std::string_view data) const {
    if (g_.out_path.empty()) {
      out_ << data;
    } else {
      io::write_file(g_.out_path, data);
    }
  }

  std::ostream& info() const { return g_.out_path.empty() ? err_ : out_; }
  bool quiet() const { return g_.quiet; }

 private:
  const Globals& g_;
  std::ostream& out_;
  std::ostream& err_;
};

void require_format(const std::string& fmt, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed) {
    if (fmt == a) return;
  }
  std::string list;
  for (const char* a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
  throw ValidationError("format '" + fmt + "' not supported here (expected " + list + ")");
}

std::string csv_header(const json& prov) {
  std::string line = "# " + prov["tool"].get<std::string>() + " " +
                     prov["version"].get<std::string>() + " seed=" +
                     std::to_string(prov["seed"].get<std::uint64_t>());
  for (const auto& [name, hash] : prov["inputs"].items()) {
    line += " " + name + "=" + hash.get<std::string>();
  }
  return line + "\n";
}

std::string file_hash(const std::string& path) {
  return io::hex_digest(io::fnv1a(io::read_file(path)));
}

std::string model_hash(const QuboModel& model) {
  return io::hex_digest(io::fnv1a(io::dump(io::to_json(model))));
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (double x : v) s += (s.empty() ? "" : ",") + io::format_double(x);
  return "[" + s + "]";
}

std::string range(const ValueRange& r) {
  return "[" + io::format_double(r.min) + ", " + io::format_double(r.max) + "]";
}

// generate ---------------------------------------------------------------------

struct GenerateArgs {
  int n = 3;
  std::uint64_t index = 0;
  double sparsity = 0.0;
};

void cmd_generate(const GenerateArgs& a, const Globals& g, const Sink& sink) {
  require_format(sink.format("json"), {"json"});
  const QapInstance inst = generate_instance(a.n, g.seed, a.index, a.sparsity);
  json j = io::to_json(inst);
  j["provenance"] = io::provenance(g.seed, {});
  j["provenance"]["index"] = a.index;
  j["provenance"]["sparsity"] = a.sparsity;
  sink.emit(io::dump(j));
}

// build ------------------------------------------------------------------------

struct BuildArgs {
  std::string instance;
  std::string formulation = "baseline";
  double scale = 1.0;
};

void cmd_build(const BuildArgs& a, const Globals& g, const Sink& sink) {
  if (!(a.scale > 0.0)) throw ValidationError("--scale must be positive");
  const QapInstance inst = io::load_instance(a.instance);
  const QuboModel model = build_qubo(inst, parse_formulation(a.formulation), a.scale);
  const json prov = io::provenance(g.seed, {{"instance", file_hash(a.instance)}});

  const std::string fmt = sink.format("json");
  require_format(fmt, {"json", "txt"});
  if (fmt == "json") {
    json j = io::to_json(model);
    j["provenance"] = prov;
    sink.emit(io::dump(j));
  } else {
    sink.emit(csv_header(prov) + io::sparse_text(model));
  }

  if (sink.quiet()) return;
  const CouplingReport cr = coupling_report(model, inst);
  auto& info = sink.info();
  info << "dim=" << model.dim << " formulation=" << to_string(model.formulation)
       << " scale=" << io::format_double(model.scale) << " lambda=" << join(model.penalties)
       << " coupling=" << range(cr.coupling) << " bias=" << range(cr.bias)
       << " coupling_prob=" << range(cr.coupling_prob) << " coupling_reg="
       << range(cr.coupling_reg);
  if (cr.coupling_ratio) info << " coupling_ratio=" << io::format_double(*cr.coupling_ratio);
  if (cr.bias_ratio) info << " bias_ratio=" << io::format_double(*cr.bias_ratio);
  if (!model.provable()) info << " (scale < 1: outside the provably equivalent regime)";
  info << "\n";
}

// gap --------------------------------------------------------------------------

struct GapArgs {
  std::string instance;
  std::string formulation = "baseline";
  std::vector<double> scales{1.0};
  int samples = kDefaultGapSamples;
};

void cmd_gap(const GapArgs& a, const Globals& g, const Sink& sink) {
  if (a.samples < 2) throw ValidationError("--samples must be at least 2");
  const QapInstance inst = io::load_instance(a.instance);
  const Formulation f = parse_formulation(a.formulation);
  const int dim = f == Formulation::inserted ? (inst.n() - 1) * (inst.n() - 1) : inst.dim();
  if (dim > kMaxHamiltonianQubits) {
    throw SizeCapError("gap analysis is limited to " + std::to_string(kMaxHamiltonianQubits) +
                       " qubits; " + std::string(to_string(f)) + " at n = " +
                       std::to_string(inst.n()) + " needs " + std::to_string(dim));
  }
  std::vector<io::ScaledProfile> profiles;
  for (double s : a.scales) {
    if (!(s > 0.0)) throw ValidationError("scales must be positive");
    const QuboModel model = build_qubo(inst, f, s);
    const auto pair = build_hamiltonians(normalize_couplings(to_spin(model)));
    profiles.push_back({s, spectral_gap(pair, a.samples)});
  }
  const json prov = io::provenance(g.seed, {{"instance", file_hash(a.instance)}});

  const std::string fmt = sink.format("csv");
  require_format(fmt, {"csv", "json"});
  if (fmt == "csv") {
    sink.emit(csv_header(prov) + io::gap_csv(profiles));
  } else {
    json j = {{"provenance", prov}, {"profiles", json::array()}};
    for (const auto& p : profiles) {
      json entry = io::gap_summary(p, f);
      entry["u"] = p.profile.ts;
      entry["e0"] = p.profile.e0;
      entry["e1"] = p.profile.e1;
      j["profiles"].push_back(std::move(entry));
    }
    sink.emit(io::dump(j));
  }

  if (sink.quiet()) return;
  for (const auto& p : profiles) {
    sink.info() << "formulation=" << to_string(f) << " scale=" << io::format_double(p.scale)
                << " min_gap=" << io::format_double(p.profile.min_gap)
                << " argmin_t=" << io::format_double(p.profile.argmin_t) << "\n";
  }
}

// solve ------------------------------------------------------------------------

struct SolveArgs {
  std::string instance;
  std::string qubo;
  std::string formulation = "baseline";
  std::string solver = "brute";
  double scale = 1.0;
  SolverParams params;
  std::string histogram;
  int bins = 50;
};

void cmd_solve(const SolveArgs& a, const Globals& g, const Sink& sink) {
  const QapInstance inst = io::load_instance(a.instance);
  std::map<std::string, std::string> inputs{{"instance", file_hash(a.instance)}};
  QuboModel model;
  if (!a.qubo.empty()) {
    model = io::qubo_from_json(io::parse_json(io::read_file(a.qubo), a.qubo));
    if (model.n != inst.n()) {
      throw ValidationError("QUBO file is for n = " + std::to_string(model.n) +
                            " but the instance has n = " + std::to_string(inst.n()));
    }
    inputs["qubo"] = file_hash(a.qubo);
  } else {
    model = build_qubo(inst, parse_formulation(a.formulation), a.scale);
  }
  const Solver solver = parse_solver(a.solver);
  const SampleSet samples = solve_qubo(model, solver, a.params, g.seed);

  const auto range = permutation_energy_range(inst);
  const double f_opt = range.best.energy;
  const SuccessProbability sp = success_probability(samples, inst, f_opt);
  const SampleEntry* top = most_frequent(samples);

  json top_json = nullptr;
  double normalized = range.worst.energy - f_opt;
  if (top) {
    top_json = {{"bits", top->bits.to_string()}, {"valid", top->valid}, {"count", top->count}};
    if (top->permutation) {
      const double e = permutation_energy(inst, top->permutation->assignment());
      normalized = attains_optimum(e, f_opt) ? 0.0 : e - f_opt;
      top_json["permutation"] = top->permutation->assignment();
      top_json["qap_energy"] = e;
    } else {
      top_json["permutation"] = nullptr;
    }
    top_json["normalized_energy"] = normalized;
  }
  const json summary = {
      {"f_opt", f_opt},
      {"success_probability", sp.probability},
      {"optimal_count", sp.optimal_count},
      {"total", sp.total},
      {"random_guess", {{"numerator", 1}, {"denominator", sp.random_guess_denominator},
                        {"value", sp.random_guess()}}},
      {"most_frequent", top_json}};
  const json prov = io::provenance(g.seed, inputs);
  const auto bins = energy_histogram(samples, a.bins);

  const std::string fmt = sink.format("json");
  require_format(fmt, {"json", "csv"});
  if (fmt == "json") {
    json j = {{"provenance", prov},
              {"formulation", std::string(to_string(model.formulation))},
              {"scale", model.scale},
              {"samples", io::to_json(samples, model_hash(model))},
              {"summary", summary}};
    sink.emit(io::dump(j));
  } else {
    sink.emit(csv_header(prov) + io::histogram_csv(bins));
  }
  if (!a.histogram.empty()) io::write_file(a.histogram, csv_header(prov) + io::histogram_csv(bins));

  if (sink.quiet()) return;
  auto& info = sink.info();
  info << "solver=" << to_string(solver) << " formulation=" << to_string(model.formulation)
       << " success_probability=" << io::format_double(sp.probability) << " (" << sp.optimal_count
       << "/" << sp.total << "; random guess 1/" << sp.random_guess_denominator << " = "
       << io::format_double(sp.random_guess()) << ")";
  if (top) {
    info << " most_frequent=" << top->bits.to_string() << (top->valid ? " valid" : " invalid")
         << " normalized_energy=" << io::format_double(normalized);
  }
  info << "\n";
}

// bench ------------------------------------------------------------------------

struct BenchArgs {
  std::string spec;
  std::string preset;
  std::string tables;
};

void cmd_bench(const BenchArgs& a, const Globals& g, const Sink& sink) {
  if (a.spec.empty() == a.preset.empty()) {
    throw ValidationError("bench needs exactly one of a spec file or --preset");
  }
  ExperimentSpec spec;
  std::map<std::string, std::string> inputs;
  if (!a.spec.empty()) {
    spec = io::spec_from_json(io::parse_json(io::read_file(a.spec), a.spec));
    inputs["spec"] = file_hash(a.spec);
  } else {
    spec = preset(a.preset);
    inputs["preset"] = a.preset;
  }
  if (g.seed_given) spec.seed = g.seed;
  spec.validate();

  const BenchReport report = run_experiment(spec);
  const json prov = io::provenance(spec.seed, inputs);

  const std::string fmt = sink.format("json");
  require_format(fmt, {"json", "csv"});
  if (fmt == "json") {
    json j = io::to_json(report);
    j["provenance"] = prov;
    sink.emit(io::dump(j));
  } else {
    sink.emit(csv_header(prov) + io::report_csv(report));
  }
  if (!a.tables.empty()) {
    io::write_file(a.tables + ".records.csv", csv_header(prov) + io::report_csv(report));
    io::write_file(a.tables + ".aggregates.csv", csv_header(prov) + io::aggregate_csv(report));
  }

  if (sink.quiet()) return;
  auto& info = sink.info();
  for (const auto& agg : report.aggregates) {
    info << to_string(agg.formulation) << " scale=" << io::format_double(agg.scale)
         << " mean_normalized_energy=" << io::format_double(agg.mean_normalized_energy)
         << " success_rate=" << io::format_double(agg.success_rate)
         << " mean_success_probability=" << io::format_double(agg.mean_success_probability);
    if (agg.mean_min_gap) info << " mean_min_gap=" << io::format_double(*agg.mean_min_gap);
    info << "\n";
  }
  info << "worst permutation mean_normalized_energy="
       << io::format_double(report.mean_worst_normalized) << "\n";
}

// report -----------------------------------------------------------------------

struct ReportArgs {
  std::string report;
  std::string table = "aggregates";
};

void cmd_report(const ReportArgs& a, const Sink& sink) {
  const json j = io::parse_json(io::read_file(a.report), a.report);
  const BenchReport report = io::report_from_json(j);
  json prov = io::provenance(report.spec.seed, {{"report", file_hash(a.report)}});

  const std::string fmt = sink.format("csv");
  require_format(fmt, {"csv"});
  if (a.table == "aggregates") {
    sink.emit(csv_header(prov) + io::aggregate_csv(report));
  } else if (a.table == "records") {
    sink.emit(csv_header(prov) + io::report_csv(report));
  } else {
    throw ValidationError("--table must be aggregates or records");
  }

  if (sink.quiet()) return;
  auto& info = sink.info();
  info << std::left << std::setw(12) << "formulation" << std::setw(8) << "scale"
       << std::setw(14) << "mean_energy" << std::setw(14) << "success_rate" << "mean_min_gap\n";
  for (const auto& agg : report.aggregates) {
    info << std::setw(12) << to_string(agg.formulation) << std::setw(8)
         << io::format_double(agg.scale) << std::setw(14)
         << io::format_double(agg.mean_normalized_energy) << std::setw(14)
         << io::format_double(agg.success_rate)
         << (agg.mean_min_gap ? io::format_double(*agg.mean_min_gap) : "-") << "\n";
  }
}

void add_solver_options(CLI::App* cmd, SolverParams& p) {
  cmd->add_option("--tau", p.tau, "Total anneal time")->capture_default_str();
  cmd->add_option("--steps", p.steps, "Integration steps (schrodinger)")->capture_default_str();
  cmd->add_option("--slices", p.slices, "Trotter slices (trotter)")->capture_default_str();
  cmd->add_option("--pause", p.pause_fraction, "Fraction of tau spent paused at u = 0.5")
      ->capture_default_str();
  cmd->add_option("--shots", p.shots, "Measurements (schrodinger, trotter)")
      ->capture_default_str();
  cmd->add_option("--sweeps", p.sweeps, "Sweeps per run (sa)")->capture_default_str();
  cmd->add_option("--runs", p.runs, "Independent runs (sa)")->capture_default_str();
  cmd->add_option("--t-hi", p.t_hi, "Initial temperature (sa)");
  cmd->add_option("--t-lo", p.t_lo, "Final temperature (sa)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"permanneal: permutation problems as QUBOs, spectral gaps and anneal simulation"};
  app.set_version_flag("--version", std::string(PERMANNEAL_VERSION));
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("-o,--out", g.out_path, "Output file (stdout if omitted)");
  app.add_option("--format", g.format, "Output format: json, csv or txt (default from --out)")
      ->check(CLI::IsMember({"json", "csv", "txt"}));
  app.add_flag("-q,--quiet", g.quiet, "Suppress summary lines");

  GenerateArgs ga;
  auto* gen = app.add_subcommand("generate", "Write a seeded random instance");
  gen->add_option("-n", ga.n, "Permutation size")->required();
  gen->add_option("--index", ga.index, "Instance index within the seeded family")
      ->capture_default_str();
  gen->add_option("--sparsity", ga.sparsity, "Fraction of entries set to zero")
      ->capture_default_str();

  BuildArgs ba;
  auto* build = app.add_subcommand("build", "Build a QUBO from an instance");
  build->add_option("instance", ba.instance, "Instance or distance JSON")->required();
  build->add_option("-f,--formulation", ba.formulation, "baseline, row_wise or inserted")
      ->capture_default_str();
  build->add_option("--scale", ba.scale, "Penalty scale")->capture_default_str();

  GapArgs gp;
  auto* gap = app.add_subcommand("gap", "Spectral gap profile along the anneal path");
  gap->add_option("instance", gp.instance, "Instance or distance JSON")->required();
  gap->add_option("-f,--formulation", gp.formulation, "baseline, row_wise or inserted")
      ->capture_default_str();
  gap->add_option("--scales", gp.scales, "Penalty scales")->delimiter(',')->capture_default_str();
  gap->add_option("--samples", gp.samples, "Grid points on [0, 1]")->capture_default_str();

  SolveArgs sa;
  auto* solve = app.add_subcommand("solve", "Sample a QUBO and score against the optimum");
  solve->add_option("instance", sa.instance, "Instance or distance JSON")->required();
  solve->add_option("--qubo", sa.qubo, "Use this QUBO file instead of building one");
  solve->add_option("-f,--formulation", sa.formulation, "baseline, row_wise or inserted")
      ->capture_default_str();
  solve->add_option("--scale", sa.scale, "Penalty scale (ignored with --qubo)")
      ->capture_default_str();
  solve->add_option("--solver", sa.solver, "brute, sa, schrodinger or trotter")
      ->capture_default_str();
  solve->add_option("--histogram", sa.histogram, "Also write the energy histogram CSV here");
  solve->add_option("--bins", sa.bins, "Histogram bins")->capture_default_str();
  add_solver_options(solve, sa.params);

  BenchArgs bb;
  auto* bench = app.add_subcommand("bench", "Run an experiment over seeded instances");
  bench->add_option("spec", bb.spec, "Experiment spec JSON");
  bench->add_option("--preset", bb.preset, "fig2, fig3, fig6 or supp-sa");
  bench->add_option("--tables", bb.tables,
                    "Also write <prefix>.records.csv and <prefix>.aggregates.csv");

  ReportArgs ra;
  auto* report = app.add_subcommand("report", "Tabulate a bench report");
  report->add_option("report", ra.report, "Report JSON from bench")->required();
  report->add_option("--table", ra.table, "aggregates or records")->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }
  g.seed_given = app.count("--seed") > 0;

  const Sink sink(g, out, err);
  try {
    if (*gen) cmd_generate(ga, g, sink);
    if (*build) cmd_build(ba, g, sink);
    if (*gap) cmd_gap(gp, g, sink);
    if (*solve) cmd_solve(sa, g, sink);
    if (*bench) cmd_bench(bb, g, sink);
    if (*report) cmd_report(ra, sink);
  } catch (const SizeCapError& e) {
    err << "error: " << e.what() << "\n";
    return kExitSizeCap;
  } catch (const SolverError& e) {
    err << "error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitOk;
}

}  // namespace permanneal::cli
