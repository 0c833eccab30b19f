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

#include "quepp/pauli_sum.h"

#include <algorithm>
#include <cmath>

#include "quepp/errors.h"

namespace quepp {

std::size_t PauliHash::operator()(const PauliString& p) const noexcept {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ p.num_qubits();
  auto mix = [&h](std::uint64_t w) {
    h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h *= 0xff51afd7ed558ccdULL;
  };
  for (auto w : p.x_words()) mix(w);
  for (auto w : p.z_words()) mix(w);
  return static_cast<std::size_t>(h ^ (h >> 33));
}

PauliSum::PauliSum(const PauliString& observable) : num_qubits_(observable.num_qubits()) {
  terms_.emplace(observable.unsigned_copy(), static_cast<double>(observable.sign()));
}

void PauliSum::apply_clifford(const CliffordGate& gate) {
  std::unordered_map<PauliString, double, PauliHash> next;
  next.reserve(terms_.size());
  for (auto& [p, c] : terms_) {
    PauliString q = p;
    conjugate_in_place(q, gate);
    const double s = q.negative() ? -c : c;
    q.set_negative(false);
    next[std::move(q)] += s;
  }
  terms_ = std::move(next);
}

void PauliSum::apply_rotation(const Rotation& rotation) {
  if (rotation.generator.num_qubits() != num_qubits_) throw DimensionError("rotation size mismatch");
  const double c = std::cos(rotation.angle);
  const double s = std::sin(rotation.angle);
  std::unordered_map<PauliString, double, PauliHash> next;
  next.reserve(terms_.size() * 2);
  for (auto& [p, coeff] : terms_) {
    if (commutes(p, rotation.generator)) {
      next[p] += coeff;
      continue;
    }
    next[p] += coeff * c;
    PauliString q = multiply_by_generator(p, rotation.generator);
    const double v = q.negative() ? -coeff * s : coeff * s;
    q.set_negative(false);
    next[std::move(q)] += v;
  }
  terms_ = std::move(next);
}

void PauliSum::apply_op(const GateOp& op) {
  if (const auto* g = std::get_if<CliffordGate>(&op))
    apply_clifford(*g);
  else
    apply_rotation(std::get<Rotation>(op));
}

void PauliSum::apply_damping(const std::function<double(const PauliString&)>& fidelity) {
  for (auto& [p, c] : terms_) c *= fidelity(p);
}

void PauliSum::truncate(double epsilon, std::size_t max_terms) {
  std::erase_if(terms_, [epsilon](const auto& kv) { return kv.second == 0.0 || std::abs(kv.second) < epsilon; });
  if (terms_.size() <= max_terms) return;
  std::vector<std::pair<PauliString, double>> all(terms_.begin(), terms_.end());
  std::nth_element(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(max_terms), all.end(),
                   [](const auto& a, const auto& b) {
                     const double fa = std::abs(a.second), fb = std::abs(b.second);
                     if (fa != fb) return fa > fb;
                     return a.first < b.first;
                   });
  all.resize(max_terms);
  terms_.clear();
  for (auto& kv : all) terms_.insert(std::move(kv));
}

std::vector<std::pair<PauliString, double>> PauliSum::sorted_terms() const {
  std::vector<std::pair<PauliString, double>> all(terms_.begin(), terms_.end());
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return all;
}

double PauliSum::expectation(InputKind input) const {
  double total = 0.0;
  for (const auto& [p, c] : sorted_terms()) total += c * expectation_on_stabilizer_input(p, input);
  return total;
}

}  // namespace quepp
