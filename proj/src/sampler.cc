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

#include "quepp/sampler.h"

#include <algorithm>
#include <atomic>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <map>
#include <mutex>
#include <thread>
#include <unordered_set>

#include "quepp/errors.h"

namespace quepp {

std::string distribution_name(SamplingDistribution d) {
  return d == SamplingDistribution::kDTilde ? "d_tilde" : "d_postselected";
}

SamplingDistribution parse_distribution(const std::string& name) {
  if (name == "d_tilde") return SamplingDistribution::kDTilde;
  if (name == "d_postselected") return SamplingDistribution::kDPostselected;
  throw std::invalid_argument("unknown sampling distribution '" + name + "'");
}

void SamplerConfig::validate() const {
  if (target_unique_paths < 1) throw PreconditionError("target_unique_paths must be at least 1");
  if (max_attempts < target_unique_paths) throw PreconditionError("max_attempts must be >= target_unique_paths");
  if (workers < 1) throw PreconditionError("workers must be at least 1");
}

SampleOutcome sample_path(const Circuit& circuit, const PauliString& observable, SamplingDistribution distribution,
                          std::mt19937_64& rng) {
  if (observable.num_qubits() != circuit.num_qubits()) throw DimensionError("observable size does not match circuit");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  SampleOutcome out;
  PauliString frame = observable;
  std::vector<Branch> decisions(circuit.rotation_count(), Branch::kPassthrough);
  double coeff = 1.0;
  std::size_t order = 0;
  std::size_t j = circuit.rotation_count();
  const auto& ops = circuit.ops();
  for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
    if (const auto* g = std::get_if<CliffordGate>(&*it)) {
      conjugate_in_place(frame, *g);
      continue;
    }
    const auto& r = std::get<Rotation>(*it);
    const double c = std::cos(r.angle);
    const double s = std::sin(r.angle);
    const double norm = std::abs(c) + std::abs(s);
    if (commutes(frame, r.generator)) {
      if (distribution == SamplingDistribution::kDPostselected && unit(rng) >= 1.0 / norm) return out;
    } else if (unit(rng) < std::abs(c) / norm) {
      decisions[j - 1] = Branch::kCos;
      coeff *= c;
    } else {
      decisions[j - 1] = Branch::kSin;
      coeff *= s;
      ++order;
      multiply_by_generator_in_place(frame, r.generator);
    }
    --j;
  }
  out.completed = true;
  PauliPath& p = out.path;
  p.coeff.value = coeff;
  p.coeff.order = order;
  for (std::size_t i = 1; i <= decisions.size(); ++i) {
    if (decisions[i - 1] == Branch::kSin)
      p.coeff.sin_indices.push_back(i);
    else if (decisions[i - 1] == Branch::kCos)
      p.coeff.cos_indices.push_back(i);
  }
  p.path_id = path_id_of(p.coeff.sin_indices);
  p.branches.decisions = std::move(decisions);
  p.ideal_expectation = expectation_on_stabilizer_input(frame, circuit.input());
  p.frame = std::move(frame);
  out.accepted = p.ideal_expectation != 0;
  return out;
}

namespace {

struct SinSetHash {
  std::size_t operator()(const std::vector<std::size_t>& v) const noexcept {
    return static_cast<std::size_t>(path_id_of(v));
  }
};

void tally(const SampleOutcome& s, SamplingReport& r) {
  ++r.attempts;
  if (!s.completed)
    ++r.aborted;
  else if (!s.accepted)
    ++r.zero_expectation;
  else
    ++r.accepted;
}

}  // namespace

SampledEnsemble build_ensemble(const Circuit& circuit, const PauliString& observable, const SamplerConfig& config) {
  config.validate();
  SampledEnsemble out;
  std::unordered_set<std::vector<std::size_t>, SinSetHash> seen;
  if (config.workers == 1) {
    std::mt19937_64 rng(config.rng_seed);
    while (out.paths.size() < config.target_unique_paths && out.report.attempts < config.max_attempts) {
      auto s = sample_path(circuit, observable, config.distribution, rng);
      tally(s, out.report);
      if (s.accepted && seen.insert(s.path.coeff.sin_indices).second) out.paths.push_back(std::move(s.path));
    }
  } else {
    std::mutex mu;
    std::atomic<std::size_t> tickets{0};
    std::atomic<bool> done{false};
    std::vector<SamplingReport> reports(config.workers);
    std::vector<std::exception_ptr> errors(config.workers);
    auto run = [&](std::size_t w) {
      try {
        std::seed_seq seq{config.rng_seed, static_cast<std::uint64_t>(w)};
        std::mt19937_64 rng(seq);
        while (!done.load() && tickets.fetch_add(1) < config.max_attempts) {
          auto s = sample_path(circuit, observable, config.distribution, rng);
          tally(s, reports[w]);
          if (!s.accepted) continue;
          std::lock_guard lock(mu);
          if (out.paths.size() >= config.target_unique_paths) break;
          if (seen.insert(s.path.coeff.sin_indices).second) out.paths.push_back(std::move(s.path));
          if (out.paths.size() >= config.target_unique_paths) done = true;
        }
      } catch (...) {
        errors[w] = std::current_exception();
        done = true;
      }
    };
    std::vector<std::thread> threads;
    for (std::size_t w = 0; w < config.workers; ++w) threads.emplace_back(run, w);
    for (auto& t : threads) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
    for (const auto& r : reports) {
      out.report.attempts += r.attempts;
      out.report.accepted += r.accepted;
      out.report.aborted += r.aborted;
      out.report.zero_expectation += r.zero_expectation;
    }
    std::sort(out.paths.begin(), out.paths.end(), [](const PauliPath& a, const PauliPath& b) {
      if (a.path_id != b.path_id) return a.path_id < b.path_id;
      return a.coeff.sin_indices < b.coeff.sin_indices;
    });
  }
  out.report.unique = out.paths.size();
  out.report.saturated = out.paths.size() < config.target_unique_paths;
  return out;
}

double walk_probability(const Circuit& circuit, const PauliString& observable, const PauliPath& path,
                        SamplingDistribution distribution) {
  auto back = backpropagate(circuit, observable, path.branches);
  if (!back.ok()) throw InconsistentBranchError(*back.inconsistent_at);
  double prob = 1.0;
  for (std::size_t j = 1; j <= circuit.rotation_count(); ++j) {
    const double angle = circuit.rotation(j).angle;
    const double c = std::abs(std::cos(angle));
    const double s = std::abs(std::sin(angle));
    switch (path.branches.decisions[j - 1]) {
      case Branch::kCos: prob *= c / (c + s); break;
      case Branch::kSin: prob *= s / (c + s); break;
      case Branch::kPassthrough:
        if (distribution == SamplingDistribution::kDPostselected) prob *= 1.0 / (c + s);
        break;
    }
  }
  return prob;
}

DistributionCheck empirical_distribution_check(const Circuit& circuit, const PauliString& observable,
                                               SamplingDistribution distribution, std::size_t num_draws,
                                               std::uint64_t seed, std::size_t max_paths) {
  std::vector<PauliPath> paths;
  for_each_path(circuit, observable, TruncationPolicy::unbounded(), true, [&](PauliPath&& p) {
    if (paths.size() >= max_paths) throw CapabilityError("too many paths to enumerate for a distribution check");
    paths.push_back(std::move(p));
  });
  std::map<std::vector<std::size_t>, std::size_t> index;
  for (std::size_t i = 0; i < paths.size(); ++i) index[paths[i].coeff.sin_indices] = i;

  std::vector<double> prob(paths.size());
  double total = 0.0;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    prob[i] = distribution == SamplingDistribution::kDTilde ? walk_probability(circuit, observable, paths[i], distribution)
                                                           : std::abs(paths[i].coeff.value);
    total += prob[i];
  }
  for (auto& p : prob) p /= total;

  DistributionCheck out;
  out.draws = num_draws;
  out.paths = paths.size();
  std::vector<std::size_t> counts(paths.size(), 0);
  std::mt19937_64 rng(seed);
  for (std::size_t d = 0; d < num_draws; ++d) {
    auto s = sample_path(circuit, observable, distribution, rng);
    if (!s.completed) continue;
    ++out.completed;
    auto it = index.find(s.path.coeff.sin_indices);
    if (it == index.end()) throw InternalError("sampled a path missing from the enumeration");
    ++counts[it->second];
  }

  // Pool sparse cells (smallest expectation first) until each has >= 5.
  std::vector<std::size_t> order(paths.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return prob[a] < prob[b]; });
  std::vector<std::pair<double, double>> cells;  // (expected, observed)
  double pend_e = 0.0, pend_o = 0.0;
  const double n = static_cast<double>(out.completed);
  for (auto i : order) {
    pend_e += prob[i] * n;
    pend_o += static_cast<double>(counts[i]);
    if (pend_e >= 5.0) {
      cells.emplace_back(pend_e, pend_o);
      pend_e = pend_o = 0.0;
    }
  }
  if (pend_e > 0.0 || pend_o > 0.0) {
    if (cells.empty())
      cells.emplace_back(pend_e, pend_o);
    else {
      cells.back().first += pend_e;
      cells.back().second += pend_o;
    }
  }
  for (const auto& [e, o] : cells)
    if (e > 0.0) out.chi_square += (o - e) * (o - e) / e;
  out.dof = cells.size() > 1 ? cells.size() - 1 : 0;
  out.p_value = out.dof == 0 ? 1.0 : boost::math::gamma_q(0.5 * static_cast<double>(out.dof), 0.5 * out.chi_square);
  return out;
}

}  // namespace quepp
