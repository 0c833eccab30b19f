// Copyright 2026 The QuEPP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "quepp/backend.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <thread>

#include "quepp/clifford_eval.h"
#include "quepp/errors.h"
#include "quepp/pauli_sum.h"
#include "quepp/statevector.h"

namespace quepp {

void ExecutionPlan::validate() const {
  if (num_twirls < 1) throw PreconditionError("num_twirls must be at least 1");
  if (shots_per_twirl < 1) throw PreconditionError("shots_per_twirl must be at least 1");
}

namespace {

// Error Pauli at a location: (location index, local code).
struct Error {
  std::uint32_t loc;
  std::uint32_t code;
  auto operator<=>(const Error&) const = default;
};

// Samples which locations fail, by geometric skipping within groups of
// locations that share a rate table.
class ErrorSampler {
 public:
  explicit ErrorSampler(const std::vector<NoiseLocation>& locs) {
    std::map<const double*, std::size_t> by_table;
    for (std::size_t i = 0; i < locs.size(); ++i) {
      const auto& l = locs[i];
      if (l.total <= 0.0) continue;
      auto [it, fresh] = by_table.try_emplace(l.rates, groups_.size());
      if (fresh) {
        Group g;
        g.total = l.total;
        const std::size_t count = l.arity == 2 ? 15 : 3;
        g.pick = std::discrete_distribution<unsigned>(l.rates, l.rates + count);
        groups_.push_back(std::move(g));
      }
      groups_[it->second].members.push_back(static_cast<std::uint32_t>(i));
    }
  }

  void sample(std::mt19937_64& rng, std::vector<Error>& out) {
    out.clear();
    for (auto& g : groups_) {
      if (g.total >= 1.0) {
        for (auto m : g.members) out.push_back({m, g.pick(rng) + 1});
        continue;
      }
      std::geometric_distribution<std::size_t> skip(g.total);
      for (std::size_t idx = skip(rng); idx < g.members.size(); idx += 1 + skip(rng))
        out.push_back({g.members[idx], g.pick(rng) + 1});
    }
    std::sort(out.begin(), out.end());
  }

 private:
  struct Group {
    double total = 0.0;
    std::discrete_distribution<unsigned> pick;
    std::vector<std::uint32_t> members;
  };
  std::vector<Group> groups_;
};

std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t twirl) {
  std::seed_seq seq{seed, stream, twirl};
  return std::mt19937_64(seq);
}

// +1 or -1 from an expectation value, then readout flips on the measured qubits.
int draw_outcome(double expectation, const std::vector<double>& readout, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int v = unit(rng) < 0.5 * (1.0 + expectation) ? 1 : -1;
  for (double r : readout)
    if (r > 0.0 && unit(rng) < r) v = -v;
  return v;
}

struct Tally {
  long long sum = 0;
  std::size_t shots = 0;
};

// ---------------------------------------------------------------- Clifford

class CliffordEngine {
 public:
  CliffordEngine(const Circuit& c, const PauliString& o, const NoiseModel& noise) : locs_(noise_locations(c, noise)) {
    // Frame seen by each location: the observable pulled back through every
    // op that follows it.
    loc_frames_.resize(locs_.size());
    PauliString frame = o;
    std::size_t next = locs_.size();
    const auto& ops = c.ops();
    for (std::size_t i = ops.size(); i-- > 0;) {
      while (next > 0 && locs_[next - 1].op_index == i) {
        --next;
        loc_frames_[next] = frame;
      }
      if (const auto* g = std::get_if<CliffordGate>(&ops[i])) {
        conjugate_in_place(frame, *g);
      } else {
        const auto& r = std::get<Rotation>(ops[i]);
        const int turns = quarter_turns(r.angle);
        if (turns < 0) throw InternalError("Clifford engine given a non-Clifford rotation");
        apply_quarter_turns(frame, r.generator, turns);
      }
    }
    ideal_ = expectation_on_stabilizer_input(frame, c.input());
    for (auto q : o.support()) readout_.push_back(noise.readout_flip(q));
  }

  double exact() const {
    if (ideal_ == 0) return 0.0;
    double v = ideal_;
    for (std::size_t i = 0; i < locs_.size(); ++i) v *= 1.0 - 2.0 * flip_probability(locs_[i], loc_frames_[i]);
    for (double r : readout_) v *= 1.0 - 2.0 * r;
    return v;
  }

  Tally run(std::size_t shots, std::mt19937_64& rng) const {
    // Twirl Paulis commute through the frame bookkeeping exactly (each pair
    // multiplies to the identity), so a twirl instance only selects a stream.
    ErrorSampler sampler(locs_);
    std::vector<Error> errs;
    std::uniform_int_distribution<int> coin(0, 1);
    Tally t;
    for (std::size_t s = 0; s < shots; ++s) {
      sampler.sample(rng, errs);
      if (ideal_ == 0) {
        t.sum += coin(rng) ? 1 : -1;
        ++t.shots;
        continue;
      }
      int v = ideal_;
      for (const auto& e : errs)
        if (error_anticommutes(locs_[e.loc], e.code, loc_frames_[e.loc])) v = -v;
      t.sum += draw_outcome(static_cast<double>(v), readout_, rng);
      ++t.shots;
    }
    return t;
  }

 private:
  std::vector<NoiseLocation> locs_;
  std::vector<PauliString> loc_frames_;
  std::vector<double> readout_;
  int ideal_ = 0;
};

// ------------------------------------------------------------------- dense

// Twirl partner: the Pauli after the gate that undoes the one before it.
unsigned twirl_partner(GateKind kind, unsigned code) {
  PauliString p(2);
  p.set_letter(0, local_letter(code));
  p.set_letter(1, local_letter(code >> 2));
  // G P G^dagger is the Heisenberg conjugation by the inverse gate.
  conjugate_in_place(p, CliffordGate{gate_inverse(kind), {0, 1}});
  auto idx = [](char l) { return l == 'I' ? 0U : l == 'X' ? 1U : l == 'Y' ? 2U : 3U; };
  return idx(p.letter(0)) | (idx(p.letter(1)) << 2);
}

// A twirl pair P' G P equals G up to a global phase, and the Pauli letters are
// exact in floating point, so a trajectory depends only on its error pattern.
// The fast path therefore caches one expectation per pattern, shared by all
// twirl instances, and starts each trajectory from a checkpoint of the
// error-free run. With literal_twirls every trajectory is run from scratch
// with its twirl Paulis applied; both paths give bit-identical results.
class DenseEngine {
 public:
  DenseEngine(const Circuit& c, const PauliString& o, const NoiseModel& noise, bool literal)
      : circuit_(c), observable_(o), locs_(noise_locations(c, noise)), literal_(literal) {
    for (auto q : o.support()) readout_.push_back(noise.readout_flip(q));
    for (std::size_t i = 0; i < c.ops().size(); ++i)
      if (const auto* g = std::get_if<CliffordGate>(&c.ops()[i]); g && g->arity() == 2) twirl_ops_.push_back(i);
    for (auto kind : {GateKind::kCX, GateKind::kCZ})
      for (unsigned code = 0; code < 16; ++code) partner_[kind == GateKind::kCX][code] = twirl_partner(kind, code);
  }

  Tally run(std::size_t shots, std::mt19937_64& rng) const {
    std::uniform_int_distribution<unsigned> pauli16(0, 15);
    std::vector<unsigned> twirl(circuit_.ops().size(), 0);
    for (auto i : twirl_ops_) twirl[i] = pauli16(rng);

    ErrorSampler sampler(locs_);
    std::map<std::vector<Error>, std::size_t> patterns;
    std::vector<Error> errs;
    for (std::size_t s = 0; s < shots; ++s) {
      sampler.sample(rng, errs);
      ++patterns[errs];
    }
    Tally t;
    for (const auto& [pattern, count] : patterns) {
      const double e = literal_ ? trajectory(pattern, &twirl, nullptr, 0) : cached(pattern);
      for (std::size_t s = 0; s < count; ++s) t.sum += draw_outcome(e, readout_, rng);
      t.shots += count;
    }
    return t;
  }

 private:
  static constexpr std::size_t kCheckpointStride = 16;

  double cached(const std::vector<Error>& pattern) const {
    {
      std::lock_guard lock(mu_);
      if (auto it = cache_.find(pattern); it != cache_.end()) return it->second;
    }
    std::call_once(checkpoints_once_, [this] { build_checkpoints(); });
    const std::size_t first = pattern.empty() ? circuit_.ops().size() : locs_[pattern.front().loc].op_index;
    const std::size_t k = std::min(first / kCheckpointStride, checkpoints_.size() - 1);
    const double e = trajectory(pattern, nullptr, &checkpoints_[k], k * kCheckpointStride);
    std::lock_guard lock(mu_);
    cache_.emplace(pattern, e);
    return e;
  }

  // checkpoints_[k] is the error-free state before op k * stride.
  void build_checkpoints() const {
    StateVector psi(circuit_.num_qubits(), circuit_.input());
    const auto& ops = circuit_.ops();
    for (std::size_t i = 0; i < ops.size(); ++i) {
      if (i % kCheckpointStride == 0) checkpoints_.push_back(psi);
      psi.apply(ops[i]);
    }
    if (ops.empty()) checkpoints_.push_back(psi);
  }

  double trajectory(const std::vector<Error>& pattern, const std::vector<unsigned>* twirl, const StateVector* start,
                    std::size_t start_op) const {
    StateVector psi = start ? *start : StateVector(circuit_.num_qubits(), circuit_.input());
    auto apply_local = [&psi](std::size_t a, std::size_t b, unsigned code) {
      if (code & 3U) psi.apply_letter(a, local_letter(code));
      if (code >> 2) psi.apply_letter(b, local_letter(code >> 2));
    };
    std::size_t next = 0;
    const auto& ops = circuit_.ops();
    for (std::size_t i = start_op; i < ops.size(); ++i) {
      const auto* g = std::get_if<CliffordGate>(&ops[i]);
      if (twirl && g && g->arity() == 2) {
        const unsigned pre = (*twirl)[i];
        apply_local(g->qubits[0], g->qubits[1], pre);
        psi.apply_clifford(*g);
        apply_local(g->qubits[0], g->qubits[1], partner_[g->kind == GateKind::kCX][pre]);
      } else {
        psi.apply(ops[i]);
      }
      for (; next < pattern.size() && locs_[pattern[next].loc].op_index == i; ++next) {
        const auto& loc = locs_[pattern[next].loc];
        if (loc.arity == 2)
          apply_local(loc.qubits[0], loc.qubits[1], pattern[next].code);
        else
          psi.apply_letter(loc.qubits[0], local_letter(pattern[next].code));
      }
    }
    return psi.expectation(observable_);
  }

  const Circuit& circuit_;
  const PauliString& observable_;
  std::vector<NoiseLocation> locs_;
  bool literal_;
  std::vector<double> readout_;
  std::vector<std::size_t> twirl_ops_;
  unsigned partner_[2][16]{};

  mutable std::mutex mu_;
  mutable std::map<std::vector<Error>, double> cache_;
  mutable std::once_flag checkpoints_once_;
  mutable std::vector<StateVector> checkpoints_;
};

double exact_noisy_dense(const Circuit& c, const PauliString& o, const NoiseModel& noise, std::size_t term_cap) {
  const auto locs = noise_locations(c, noise);
  PauliSum sum(o);
  std::size_t next = locs.size();
  const auto& ops = c.ops();
  for (std::size_t i = ops.size(); i-- > 0;) {
    while (next > 0 && locs[next - 1].op_index == i) {
      const auto& loc = locs[--next];
      if (loc.total > 0.0)
        sum.apply_damping([&loc](const PauliString& p) { return 1.0 - 2.0 * flip_probability(loc, p); });
    }
    sum.apply_op(ops[i]);
    if (sum.size() > term_cap)
      throw CapabilityError("exact noisy evaluation exceeded " + std::to_string(term_cap) + " Pauli terms");
  }
  double v = sum.expectation(c.input());
  for (auto q : o.support()) v *= 1.0 - 2.0 * noise.readout_flip(q);
  return v;
}

NoisyEstimate finish(const std::vector<Tally>& per_twirl) {
  long long sum = 0;
  std::size_t n = 0;
  for (const auto& t : per_twirl) {
    sum += t.sum;
    n += t.shots;
  }
  NoisyEstimate e;
  e.total_shots = n;
  const double dn = static_cast<double>(n);
  e.mean = static_cast<double>(sum) / dn;
  if (n > 1) {
    // Outcomes are +-1, so the sum of squares is n.
    const double var = std::max(0.0, (dn - static_cast<double>(sum) * static_cast<double>(sum) / dn) / (dn - 1.0));
    e.std_error = std::sqrt(var / dn);
  }
  return e;
}

}  // namespace

SimulatorBackend::SimulatorBackend(NoiseModel noise, SimulatorOptions options)
    : noise_(std::move(noise)), options_(options) {
  noise_.validate();
  if (options_.workers < 1) options_.workers = 1;
}

NoisyEstimate SimulatorBackend::estimate(const Circuit& circuit, const PauliString& observable,
                                         const ExecutionPlan& plan, std::uint64_t stream) const {
  plan.validate();
  if (observable.num_qubits() != circuit.num_qubits()) throw DimensionError("observable size does not match circuit");
  const bool clifford = is_clifford(circuit);
  if (plan.infinite_shots) {
    NoisyEstimate e;
    e.mean = clifford ? CliffordEngine(circuit, observable, noise_).exact()
                      : exact_noisy_dense(circuit, observable, noise_, options_.exact_term_cap);
    return e;
  }
  if (!clifford && circuit.num_qubits() > options_.dense_qubit_cap)
    throw CapabilityError("non-Clifford circuit on " + std::to_string(circuit.num_qubits()) +
                          " qubits exceeds the dense trajectory cap of " + std::to_string(options_.dense_qubit_cap) +
                          "; reduce num_qubits");
  std::vector<Tally> tallies(plan.num_twirls);
  if (clifford) {
    CliffordEngine engine(circuit, observable, noise_);
    for (std::size_t t = 0; t < plan.num_twirls; ++t) {
      auto rng = stream_rng(plan.seed, stream, t);
      tallies[t] = engine.run(plan.shots_per_twirl, rng);
    }
  } else {
    DenseEngine engine(circuit, observable, noise_, options_.literal_twirls);
    for (std::size_t t = 0; t < plan.num_twirls; ++t) {
      auto rng = stream_rng(plan.seed, stream, t);
      tallies[t] = engine.run(plan.shots_per_twirl, rng);
    }
  }
  return finish(tallies);
}

std::vector<JobResult> SimulatorBackend::submit_batch(std::span<const Job> jobs, const ExecutionPlan& plan) const {
  plan.validate();
  std::vector<JobResult> results(jobs.size());

  // Engines are built up front so every failure is attributed to its job.
  struct Prepared {
    std::unique_ptr<CliffordEngine> clifford;
    std::unique_ptr<DenseEngine> dense;
  };
  std::vector<Prepared> prepared(jobs.size());
  auto fail = [&results](std::size_t i, JobErrorKind kind, const std::string& what) {
    results[i].error_kind = kind;
    results[i].error = what;
  };
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    try {
      const auto& job = jobs[i];
      if (job.observable.num_qubits() != job.circuit.num_qubits())
        throw DimensionError("observable size does not match circuit");
      const bool clifford = is_clifford(job.circuit);
      if (plan.infinite_shots) {
        NoisyEstimate e;
        e.mean = clifford ? CliffordEngine(job.circuit, job.observable, noise_).exact()
                          : exact_noisy_dense(job.circuit, job.observable, noise_, options_.exact_term_cap);
        results[i].estimate = e;
        continue;
      }
      if (clifford) {
        prepared[i].clifford = std::make_unique<CliffordEngine>(job.circuit, job.observable, noise_);
      } else {
        if (job.circuit.num_qubits() > options_.dense_qubit_cap)
          throw CapabilityError("non-Clifford circuit on " + std::to_string(job.circuit.num_qubits()) +
                                " qubits exceeds the dense trajectory cap of " +
                                std::to_string(options_.dense_qubit_cap) + "; reduce num_qubits");
        prepared[i].dense = std::make_unique<DenseEngine>(job.circuit, job.observable, noise_, options_.literal_twirls);
      }
    } catch (const CapabilityError& e) {
      fail(i, JobErrorKind::kCapability, e.what());
    } catch (const std::invalid_argument& e) {
      fail(i, JobErrorKind::kInvalid, e.what());
    } catch (const std::logic_error& e) {
      fail(i, JobErrorKind::kInvalid, e.what());
    } catch (const std::exception& e) {
      fail(i, JobErrorKind::kInternal, e.what());
    }
  }
  if (plan.infinite_shots) return results;

  // Work units in execution order: round-robin over jobs when interleaving.
  struct Unit {
    std::size_t job;
    std::size_t twirl;
  };
  std::vector<Unit> units;
  auto runnable = [&](std::size_t i) { return prepared[i].clifford || prepared[i].dense; };
  if (plan.interleave) {
    for (std::size_t t = 0; t < plan.num_twirls; ++t)
      for (std::size_t i = 0; i < jobs.size(); ++i)
        if (runnable(i)) units.push_back({i, t});
  } else {
    for (std::size_t i = 0; i < jobs.size(); ++i)
      if (runnable(i))
        for (std::size_t t = 0; t < plan.num_twirls; ++t) units.push_back({i, t});
  }

  std::vector<std::vector<Tally>> tallies(jobs.size(), std::vector<Tally>(plan.num_twirls));
  std::vector<std::string> unit_errors(units.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t u = next++; u < units.size(); u = next++) {
      const auto [i, t] = units[u];
      try {
        auto rng = stream_rng(plan.seed, i, t);
        tallies[i][t] = prepared[i].clifford ? prepared[i].clifford->run(plan.shots_per_twirl, rng)
                                             : prepared[i].dense->run(plan.shots_per_twirl, rng);
      } catch (const std::exception& e) {
        unit_errors[u] = e.what();
      }
    }
  };
  const std::size_t workers = std::min(options_.workers, std::max<std::size_t>(units.size(), 1));
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> threads;
    for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(work);
    for (auto& th : threads) th.join();
  }
  for (std::size_t u = 0; u < units.size(); ++u)
    if (!unit_errors[u].empty() && results[units[u].job].error.empty())
      fail(units[u].job, JobErrorKind::kInternal, unit_errors[u]);
  for (std::size_t i = 0; i < jobs.size(); ++i)
    if (runnable(i) && results[i].error.empty()) results[i].estimate = finish(tallies[i]);
  return results;
}

NoisyEstimate estimate_noisy_expectation(const Circuit& circuit, const PauliString& observable,
                                         const NoiseModel& noise, const ExecutionPlan& plan) {
  return SimulatorBackend(noise).estimate(circuit, observable, plan, 0);
}

double clifford_noisy_expectation(const Circuit& circuit, const PauliString& observable, const NoiseModel& noise) {
  if (!is_clifford(circuit)) throw PreconditionError("clifford_noisy_expectation needs a Clifford circuit");
  return CliffordEngine(circuit, observable, noise).exact();
}

}  // namespace quepp
