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

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <string>

#include "permanneal/anneal.hpp"
#include "permanneal/error.hpp"
#include "permanneal/rng.hpp"

namespace permanneal {

namespace {

// Shots drawn per generator; fixed so results do not depend on the worker count.
constexpr std::uint64_t kShotChunk = 4096;

// Stream index reserved for the temperature estimate of simulated annealing.
constexpr std::uint64_t kTemperatureStream = 0xfeedfacecafeULL;

Eigen::MatrixXd symmetric_part(const Eigen::MatrixXd& Q) { return 0.5 * (Q + Q.transpose()); }

// Incremental single-flip energy changes of x^T Q x + q^T x for symmetric Q.
class FlipState {
 public:
  FlipState(const Eigen::MatrixXd& Qs, const Eigen::VectorXd& q, BinaryVector x)
      : Qs_(Qs), q_(q), x_(std::move(x)), field_(Eigen::VectorXd::Zero(q.size())) {
    const auto dim = q.size();
    for (Eigen::Index i = 0; i < dim; ++i) {
      for (Eigen::Index j = 0; j < dim; ++j) {
        if (j != i && x_[j]) field_[i] += Qs_(i, j);
      }
    }
  }

  double delta(Eigen::Index i) const {
    const double sign = x_[i] ? -1.0 : 1.0;
    return sign * (Qs_(i, i) + q_[i] + 2.0 * field_[i]);
  }

  void flip(Eigen::Index i) {
    const double change = x_[i] ? -1.0 : 1.0;
    x_.flip(i);
    for (Eigen::Index j = 0; j < q_.size(); ++j) {
      if (j != i) field_[j] += change * Qs_(j, i);
    }
  }

  const BinaryVector& state() const { return x_; }

 private:
  const Eigen::MatrixXd& Qs_;
  const Eigen::VectorXd& q_;
  BinaryVector x_;
  Eigen::VectorXd field_;
};

BinaryVector random_state(Rng& rng, int dim) {
  BinaryVector x(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) x.set(i, rng.bit());
  return x;
}

}  // namespace

SampleSet make_sample_set(const QuboModel& model,
                          const std::vector<std::pair<BinaryVector, std::uint64_t>>& counts) {
  std::map<BinaryVector, std::uint64_t> merged;
  for (const auto& [bits, count] : counts) {
    if (count > 0) merged[bits] += count;
  }
  SampleSet set;
  for (const auto& [bits, count] : merged) {
    SampleEntry e;
    e.bits = bits;
    e.energy = qubo_energy(model, bits);
    e.count = count;
    e.permutation = decode(model, bits);
    e.valid = e.permutation.has_value();
    set.total += count;
    set.entries.push_back(std::move(e));
  }
  std::stable_sort(set.entries.begin(), set.entries.end(),
                   [](const SampleEntry& a, const SampleEntry& b) {
                     if (a.energy != b.energy) return a.energy < b.energy;
                     return a.bits < b.bits;
                   });
  return set;
}

SampleSet measure(const QuantumState& state, std::uint64_t shots, std::uint64_t seed,
                  const QuboModel& model, std::size_t workers) {
  if (shots < 1) throw ValidationError("measure needs at least one shot");
  if (model.dim != state.num_qubits) {
    throw ValidationError("state register does not match the model dimension");
  }
  const auto probs = state.probabilities();
  std::vector<double> cumulative(probs.size());
  double running = 0.0;
  for (std::size_t z = 0; z < probs.size(); ++z) cumulative[z] = (running += probs[z]);

  const std::uint64_t chunks = (shots + kShotChunk - 1) / kShotChunk;
  std::vector<std::map<std::uint64_t, std::uint64_t>> partial(chunks);
  parallel_for(
      chunks,
      [&](std::size_t chunk) {
        Rng rng(derive_seed(seed, chunk));
        const std::uint64_t begin = chunk * kShotChunk;
        const std::uint64_t end = std::min(shots, begin + kShotChunk);
        for (std::uint64_t shot = begin; shot < end; ++shot) {
          const double r = rng.uniform() * running;
          auto it = std::upper_bound(cumulative.begin(), cumulative.end(), r);
          // Skip zero-probability states at the boundary.
          if (it == cumulative.end()) it = std::prev(cumulative.end());
          ++partial[chunk][static_cast<std::uint64_t>(it - cumulative.begin())];
        }
      },
      workers);

  std::map<std::uint64_t, std::uint64_t> total;
  for (const auto& p : partial) {
    for (const auto& [z, count] : p) total[z] += count;
  }
  std::vector<std::pair<BinaryVector, std::uint64_t>> counts;
  for (const auto& [z, count] : total) {
    counts.emplace_back(BinaryVector::from_index(z, model.dim), count);
  }
  SampleSet set = make_sample_set(model, counts);
  set.solver = "measure";
  set.seed = seed;
  set.parameters = {{"shots", shots}};
  return set;
}

double estimate_max_flip_delta(const QuboModel& model, std::uint64_t seed, int samples) {
  const Eigen::MatrixXd Qs = symmetric_part(model.Q);
  Rng rng(seed);
  double best = 0.0;
  for (int s = 0; s < samples; ++s) {
    FlipState fs(Qs, model.q, random_state(rng, model.dim));
    for (int i = 0; i < model.dim; ++i) best = std::max(best, std::abs(fs.delta(i)));
  }
  return best;
}

SampleSet simulated_annealing(const QuboModel& model, int sweeps, int runs, std::uint64_t seed,
                              const TemperatureSchedule& schedule, std::size_t workers) {
  if (sweeps < 1) throw ValidationError("simulated annealing needs sweeps >= 1");
  if (runs < 1) throw ValidationError("simulated annealing needs runs >= 1");

  double t_hi = schedule.t_hi.value_or(
      estimate_max_flip_delta(model, derive_seed(seed, kTemperatureStream)));
  if (!(t_hi > 0.0)) t_hi = 1.0;
  const double t_lo = schedule.t_lo.value_or(1e-3 * t_hi);
  if (!(t_lo > 0.0) || t_lo > t_hi) {
    throw ValidationError("temperature schedule needs 0 < T_lo <= T_hi");
  }
  const double ratio = sweeps > 1 ? std::pow(t_lo / t_hi, 1.0 / (sweeps - 1)) : 1.0;

  const Eigen::MatrixXd Qs = symmetric_part(model.Q);
  std::vector<BinaryVector> finals(static_cast<std::size_t>(runs));
  parallel_for(
      static_cast<std::size_t>(runs),
      [&](std::size_t run) {
        Rng rng(derive_seed(seed, run));
        FlipState fs(Qs, model.q, random_state(rng, model.dim));
        double temperature = t_hi;
        for (int sweep = 0; sweep < sweeps; ++sweep) {
          for (int i = 0; i < model.dim; ++i) {
            const double d = fs.delta(i);
            if (d <= 0.0 || rng.uniform() < std::exp(-d / temperature)) fs.flip(i);
          }
          temperature *= ratio;
        }
        finals[run] = fs.state();
      },
      workers);

  std::vector<std::pair<BinaryVector, std::uint64_t>> counts;
  counts.reserve(finals.size());
  for (auto& x : finals) counts.emplace_back(std::move(x), 1);
  SampleSet set = make_sample_set(model, counts);
  set.solver = "sa";
  set.seed = seed;
  set.parameters = {{"sweeps", sweeps}, {"runs", runs}, {"t_hi", t_hi}, {"t_lo", t_lo}};
  return set;
}

SampleSet metropolis_fixed_temperature(const QuboModel& model, double temperature, int sweeps,
                                       std::uint64_t seed) {
  if (!(temperature > 0.0)) throw ValidationError("temperature must be positive");
  const Eigen::MatrixXd Qs = symmetric_part(model.Q);
  Rng rng(seed);
  FlipState fs(Qs, model.q, random_state(rng, model.dim));
  std::map<BinaryVector, std::uint64_t> visits;
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    for (int i = 0; i < model.dim; ++i) {
      const double d = fs.delta(i);
      if (d <= 0.0 || rng.uniform() < std::exp(-d / temperature)) fs.flip(i);
    }
    ++visits[fs.state()];
  }
  std::vector<std::pair<BinaryVector, std::uint64_t>> counts(visits.begin(), visits.end());
  SampleSet set = make_sample_set(model, counts);
  set.solver = "metropolis";
  set.seed = seed;
  set.parameters = {{"temperature", temperature}, {"sweeps", sweeps}};
  return set;
}

SampleSet exhaustive_minimizers(const QuboModel& model, std::size_t workers) {
  const int dim = model.dim;
  if (dim > kMaxExhaustiveDim) {
    throw SizeCapError("exhaustive QUBO enumeration is limited to " +
                       std::to_string(kMaxExhaustiveDim) + " variables (model has " +
                       std::to_string(dim) + ")");
  }
  const Eigen::MatrixXd Qs = symmetric_part(model.Q);
  const double tol =
      1e-9 * (1.0 + model.Q.cwiseAbs().sum() + model.q.cwiseAbs().sum() + std::abs(model.offset));

  const std::uint64_t states = std::uint64_t{1} << dim;
  const std::uint64_t chunks = std::min<std::uint64_t>(states, 64);
  struct Partial {
    double best = 0.0;
    std::vector<std::uint64_t> candidates;
    std::vector<double> energies;
  };
  std::vector<Partial> parts(chunks);

  // Gray-code walk inside each contiguous index range; state g(i) = i ^ (i >> 1).
  parallel_for(
      chunks,
      [&](std::size_t chunk) {
        const std::uint64_t begin = states * chunk / chunks;
        const std::uint64_t end = states * (chunk + 1) / chunks;
        std::uint64_t gray = begin ^ (begin >> 1);
        BinaryVector x = BinaryVector::from_index(gray, dim);
        FlipState fs(Qs, model.q, x);
        double energy = qubo_energy(model, x);
        Partial& p = parts[chunk];
        p.best = energy;
        for (std::uint64_t i = begin;;) {
          if (energy < p.best) p.best = energy;
          if (energy <= p.best + tol) {
            p.candidates.push_back(gray);
            p.energies.push_back(energy);
          }
          if (++i >= end) break;
          const int bit = std::countr_zero(i);
          energy += fs.delta(bit);
          fs.flip(bit);
          gray ^= std::uint64_t{1} << bit;
        }
      },
      workers);

  double best = parts[0].best;
  for (const auto& p : parts) best = std::min(best, p.best);

  // Re-evaluate the near-minimal states exactly and keep the minimizers.
  std::vector<std::pair<BinaryVector, double>> exact;
  double exact_best = 0.0;
  for (const auto& p : parts) {
    for (std::size_t k = 0; k < p.candidates.size(); ++k) {
      if (p.energies[k] > best + 2.0 * tol) continue;
      auto x = BinaryVector::from_index(p.candidates[k], dim);
      const double e = qubo_energy(model, x);
      if (exact.empty() || e < exact_best) exact_best = e;
      exact.emplace_back(std::move(x), e);
    }
  }
  std::vector<std::pair<BinaryVector, std::uint64_t>> counts;
  for (auto& [x, e] : exact) {
    if (e <= exact_best + tol) counts.emplace_back(std::move(x), 1);
  }
  SampleSet set = make_sample_set(model, counts);
  set.solver = "brute";
  set.parameters = {{"states", states}};
  return set;
}

bool attains_optimum(double energy, double f_opt) {
  return std::abs(energy - f_opt) <= 1e-9 * std::max(1.0, std::abs(f_opt));
}

SuccessProbability success_probability(const SampleSet& samples, const QapInstance& inst,
                                       std::optional<double> f_opt) {
  const double optimum = f_opt ? *f_opt : brute_force_qap(inst).energy;
  SuccessProbability sp;
  sp.total = samples.total;
  sp.random_guess_denominator = factorial(inst.n());
  for (const auto& e : samples.entries) {
    if (!e.permutation) continue;
    if (attains_optimum(permutation_energy(inst, e.permutation->assignment()), optimum)) {
      sp.optimal_count += e.count;
    }
  }
  sp.probability =
      sp.total ? static_cast<double>(sp.optimal_count) / static_cast<double>(sp.total) : 0.0;
  return sp;
}

const SampleEntry* most_frequent(const SampleSet& samples) {
  const SampleEntry* best = nullptr;
  for (const auto& e : samples.entries) {
    if (!best || e.count > best->count ||
        (e.count == best->count &&
         (e.energy < best->energy || (e.energy == best->energy && e.bits < best->bits)))) {
      best = &e;
    }
  }
  return best;
}

std::uint64_t most_probable_state(const QuantumState& state) {
  std::uint64_t best = 0;
  double best_p = -1.0;
  for (std::size_t z = 0; z < state.amplitudes.size(); ++z) {
    const double p = std::norm(state.amplitudes[z]);
    if (p > best_p) {
      best_p = p;
      best = z;
    }
  }
  return best;
}

std::vector<HistogramBin> energy_histogram(const SampleSet& samples, int bins) {
  if (bins < 1) throw ValidationError("histogram needs at least one bin");
  if (samples.entries.empty()) return {};
  const double lo = samples.entries.front().energy;
  const double hi = samples.entries.back().energy;
  if (hi == lo) bins = 1;
  const double width = bins > 1 ? (hi - lo) / bins : 1.0;
  std::vector<HistogramBin> out(static_cast<std::size_t>(bins));
  for (int b = 0; b < bins; ++b) out[b].energy = bins > 1 ? lo + (b + 0.5) * width : lo;
  for (const auto& e : samples.entries) {
    int b = bins > 1 ? static_cast<int>((e.energy - lo) / width) : 0;
    b = std::clamp(b, 0, bins - 1);
    out[b].count += e.count;
    if (e.valid) out[b].valid_count += e.count;
  }
  return out;
}

}  // namespace permanneal
