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

#include "quepp/cpt.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <deque>
#include <mutex>
#include <thread>

#include "quepp/errors.h"
#include "quepp/pauli_sum.h"

namespace quepp {

std::uint64_t path_id_of(std::span<const std::size_t> sin_indices) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](std::uint64_t v) {
    for (int b = 0; b < 8; ++b) {
      h ^= (v >> (8 * b)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  };
  feed(sin_indices.size());
  for (auto j : sin_indices) feed(j);
  return h;
}

std::string format_path_id(std::uint64_t id) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(id));
  return buf;
}

std::string PauliPath::id_string() const { return format_path_id(path_id); }

TruncationPolicy TruncationPolicy::order(std::size_t k_t) { return {Mode::kOrder, k_t, 0.0}; }

TruncationPolicy TruncationPolicy::coefficient(double epsilon) {
  if (!(epsilon > 0.0)) throw PreconditionError("coefficient truncation needs epsilon > 0");
  return {Mode::kCoefficient, std::numeric_limits<std::size_t>::max(), epsilon};
}

TruncationPolicy TruncationPolicy::hybrid(std::size_t k_t, double epsilon) {
  if (!(epsilon > 0.0)) throw PreconditionError("hybrid truncation needs epsilon > 0");
  return {Mode::kHybrid, k_t, epsilon};
}

TruncationPolicy TruncationPolicy::unbounded() { return {}; }

std::string truncation_mode_name(TruncationPolicy::Mode mode) {
  switch (mode) {
    case TruncationPolicy::Mode::kOrder: return "order";
    case TruncationPolicy::Mode::kCoefficient: return "coefficient";
    case TruncationPolicy::Mode::kHybrid: return "hybrid";
    case TruncationPolicy::Mode::kUnbounded: return "unbounded";
  }
  return "unknown";
}

void EnumerationStats::add_power(double g2) {
  power_units += static_cast<unsigned __int128>(std::llround(std::ldexp(g2, 60)));
  coefficient_power = static_cast<double>(power_units) / kPowerScale;
}

void EnumerationStats::merge(const EnumerationStats& o) {
  completed += o.completed;
  emitted += o.emitted;
  zero_expectation += o.zero_expectation;
  pruned_order += o.pruned_order;
  pruned_coefficient += o.pruned_coefficient;
  power_units += o.power_units;
  coefficient_power = static_cast<double>(power_units) / kPowerScale;
  max_stack = std::max(max_stack, o.max_stack);
}

namespace {

struct Node {
  std::size_t pos = 0;  // ops before this index remain to be processed
  std::size_t j = 0;    // rotations before this one remain
  PauliString frame;
  double coeff = 1.0;
  std::size_t order = 0;
  std::vector<Branch> decisions;
};

class Walker {
 public:
  Walker(const Circuit& c, const PauliString& o, const TruncationPolicy& p, bool keep_zero)
      : circuit_(c), observable_(o), policy_(p), keep_zero_(keep_zero) {
    if (o.num_qubits() != c.num_qubits()) throw DimensionError("observable size does not match circuit");
  }

  Node root() const {
    return Node{circuit_.size(), circuit_.rotation_count(), observable_, 1.0, 0,
                std::vector<Branch>(circuit_.rotation_count(), Branch::kPassthrough)};
  }

  /// Advances `n` to its next branch point. Pushes viable children onto `out`
  /// (sin first, so the cos child ends on top) or finishes the path.
  void expand(Node&& n, std::vector<Node>& out, EnumerationStats& stats, const PathSink& sink) const {
    const auto& ops = circuit_.ops();
    while (n.pos > 0) {
      const auto& op = ops[n.pos - 1];
      --n.pos;
      if (const auto* g = std::get_if<CliffordGate>(&op)) {
        conjugate_in_place(n.frame, *g);
        continue;
      }
      const auto& r = std::get<Rotation>(op);
      const std::size_t j = n.j--;
      if (commutes(n.frame, r.generator)) continue;
      const double c = std::cos(r.angle);
      const double s = std::sin(r.angle);
      const double cv = n.coeff * c;
      const double sv = n.coeff * s;
      if (n.order + 1 > policy_.max_order) {
        ++stats.pruned_order;
      } else if (std::abs(sv) < policy_.epsilon) {
        ++stats.pruned_coefficient;
      } else {
        Node child{n.pos, n.j, n.frame, sv, n.order + 1, n.decisions};
        multiply_by_generator_in_place(child.frame, r.generator);
        child.decisions[j - 1] = Branch::kSin;
        out.push_back(std::move(child));
      }
      if (std::abs(cv) < policy_.epsilon) {
        ++stats.pruned_coefficient;
      } else {
        n.coeff = cv;
        n.decisions[j - 1] = Branch::kCos;
        out.push_back(std::move(n));
      }
      return;
    }
    finish(std::move(n), stats, sink);
  }

 private:
  void finish(Node&& n, EnumerationStats& stats, const PathSink& sink) const {
    ++stats.completed;
    stats.add_power(n.coeff * n.coeff);
    const int ideal = expectation_on_stabilizer_input(n.frame, circuit_.input());
    if (ideal == 0) {
      ++stats.zero_expectation;
      if (!keep_zero_) return;
    }
    PauliPath p;
    p.coeff.value = n.coeff;
    p.coeff.order = n.order;
    for (std::size_t j = 1; j <= n.decisions.size(); ++j) {
      if (n.decisions[j - 1] == Branch::kSin)
        p.coeff.sin_indices.push_back(j);
      else if (n.decisions[j - 1] == Branch::kCos)
        p.coeff.cos_indices.push_back(j);
    }
    p.path_id = path_id_of(p.coeff.sin_indices);
    p.branches.decisions = std::move(n.decisions);
    p.ideal_expectation = ideal;
    p.frame = std::move(n.frame);
    ++stats.emitted;
    sink(std::move(p));
  }

  const Circuit& circuit_;
  const PauliString& observable_;
  TruncationPolicy policy_;
  bool keep_zero_;
};

bool path_less(const PauliPath& a, const PauliPath& b) {
  if (a.path_id != b.path_id) return a.path_id < b.path_id;
  return a.coeff.sin_indices < b.coeff.sin_indices;
}

}  // namespace

EnumerationStats for_each_path(const Circuit& circuit, const PauliString& observable, const TruncationPolicy& policy,
                               bool keep_zero_expectation, const PathSink& sink) {
  Walker w(circuit, observable, policy, keep_zero_expectation);
  EnumerationStats stats;
  std::vector<Node> stack;
  stack.push_back(w.root());
  while (!stack.empty()) {
    stats.max_stack = std::max(stats.max_stack, stack.size());
    Node n = std::move(stack.back());
    stack.pop_back();
    w.expand(std::move(n), stack, stats, sink);
  }
  return stats;
}

Enumeration enumerate_paths(const Circuit& circuit, const PauliString& observable, const TruncationPolicy& policy,
                            bool keep_zero_expectation, std::size_t workers) {
  Enumeration result;
  Walker w(circuit, observable, policy, keep_zero_expectation);
  auto collect = [&result](PauliPath&& p) { result.paths.push_back(std::move(p)); };
  if (workers <= 1) {
    result.stats = for_each_path(circuit, observable, policy, keep_zero_expectation, collect);
  } else {
    // Breadth-wise split into enough independent subtrees, then hand them out.
    std::deque<Node> frontier;
    frontier.push_back(w.root());
    const std::size_t want = 16 * workers;
    std::vector<Node> kids;
    while (!frontier.empty() && frontier.size() < want) {
      Node n = std::move(frontier.front());
      frontier.pop_front();
      kids.clear();
      w.expand(std::move(n), kids, result.stats, collect);
      for (auto& k : kids) frontier.push_back(std::move(k));
    }
    std::vector<Node> roots(std::make_move_iterator(frontier.begin()), std::make_move_iterator(frontier.end()));
    std::vector<std::vector<PauliPath>> sinks(workers);
    std::vector<EnumerationStats> stats(workers);
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    auto run = [&](std::size_t id) {
      try {
        auto sink = [&sinks, id](PauliPath&& p) { sinks[id].push_back(std::move(p)); };
        std::vector<Node> stack;
        for (std::size_t r = next++; r < roots.size(); r = next++) {
          stack.push_back(std::move(roots[r]));
          while (!stack.empty()) {
            stats[id].max_stack = std::max(stats[id].max_stack, stack.size());
            Node n = std::move(stack.back());
            stack.pop_back();
            w.expand(std::move(n), stack, stats[id], sink);
          }
        }
      } catch (...) {
        errors[id] = std::current_exception();
      }
    };
    std::vector<std::thread> threads;
    for (std::size_t id = 0; id < workers; ++id) threads.emplace_back(run, id);
    for (auto& t : threads) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
    for (std::size_t id = 0; id < workers; ++id) {
      result.stats.merge(stats[id]);
      for (auto& p : sinks[id]) result.paths.push_back(std::move(p));
    }
  }
  std::sort(result.paths.begin(), result.paths.end(), path_less);
  return result;
}

double classical_cpt_estimate(std::span<const PauliPath> paths) {
  std::vector<const PauliPath*> order;
  order.reserve(paths.size());
  for (const auto& p : paths) order.push_back(&p);
  std::sort(order.begin(), order.end(), [](const PauliPath* a, const PauliPath* b) { return path_less(*a, *b); });
  double total = 0.0;
  for (const auto* p : order) total += p->coeff.value * p->ideal_expectation;
  return total;
}

double coefficient_power(std::span<const PauliPath> paths) {
  double total = 0.0;
  for (const auto& p : paths) total += p.coeff.value * p.coeff.value;
  if (total > 1.0 + 1e-9) throw InternalError("coefficient power exceeds one: " + std::to_string(total));
  return total;
}

MergedCptResult merged_bfs_cpt(const Circuit& circuit, const PauliString& observable, std::size_t max_terms,
                               double epsilon) {
  if (observable.num_qubits() != circuit.num_qubits()) throw DimensionError("observable size does not match circuit");
  if (max_terms == 0) throw PreconditionError("max_terms must be at least 1");
  if (epsilon < 0.0) throw PreconditionError("epsilon must be nonnegative");
  PauliSum sum(observable);
  MergedCptResult out;
  out.peak_terms = sum.size();
  const auto& ops = circuit.ops();
  for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
    sum.apply_op(*it);
    // Clifford conjugation is a signed permutation of terms, so only rotations
    // can change which terms survive.
    if (std::holds_alternative<Rotation>(*it)) sum.truncate(epsilon, max_terms);
    out.peak_terms = std::max(out.peak_terms, sum.size());
  }
  out.final_terms = sum.size();
  out.estimate = sum.expectation(circuit.input());
  return out;
}

BranchAssignment branches_from_sin_indices(const Circuit& circuit, const PauliString& observable,
                                           std::span<const std::size_t> sin_indices) {
  if (observable.num_qubits() != circuit.num_qubits()) throw DimensionError("observable size does not match circuit");
  const std::size_t k = circuit.rotation_count();
  std::vector<bool> is_sin(k + 1, false);
  for (auto j : sin_indices) {
    if (j == 0 || j > k) throw IndexError("rotation index " + std::to_string(j) + " out of range");
    is_sin[j] = true;
  }
  BranchAssignment b{std::vector<Branch>(k, Branch::kPassthrough)};
  PauliString frame = observable;
  std::size_t j = k;
  const auto& ops = circuit.ops();
  for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
    if (const auto* g = std::get_if<CliffordGate>(&*it)) {
      conjugate_in_place(frame, *g);
      continue;
    }
    const auto& r = std::get<Rotation>(*it);
    if (commutes(frame, r.generator)) {
      if (is_sin[j]) throw InconsistentBranchError(j);
    } else if (is_sin[j]) {
      b.decisions[j - 1] = Branch::kSin;
      multiply_by_generator_in_place(frame, r.generator);
    } else {
      b.decisions[j - 1] = Branch::kCos;
    }
    --j;
  }
  return b;
}

PauliPath make_path(const Circuit& circuit, const PauliString& observable, const BranchAssignment& branches) {
  auto back = backpropagate(circuit, observable, branches);
  if (!back.ok()) throw InconsistentBranchError(*back.inconsistent_at);
  PauliPath p;
  p.branches = branches;
  // Same multiplication order as the enumerator so the values agree bitwise.
  for (std::size_t j = branches.decisions.size(); j >= 1; --j) {
    const double angle = circuit.rotation(j).angle;
    if (branches.decisions[j - 1] == Branch::kSin) {
      p.coeff.sin_indices.push_back(j);
      p.coeff.value *= std::sin(angle);
    } else if (branches.decisions[j - 1] == Branch::kCos) {
      p.coeff.cos_indices.push_back(j);
      p.coeff.value *= std::cos(angle);
    }
  }
  std::reverse(p.coeff.sin_indices.begin(), p.coeff.sin_indices.end());
  std::reverse(p.coeff.cos_indices.begin(), p.coeff.cos_indices.end());
  p.coeff.order = p.coeff.sin_indices.size();
  p.ideal_expectation = expectation_on_stabilizer_input(back.frame, circuit.input());
  p.frame = std::move(back.frame);
  p.path_id = path_id_of(p.coeff.sin_indices);
  return p;
}

}  // namespace quepp
