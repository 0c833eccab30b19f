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

#include "quepp/noise.h"

#include <string>

#include "quepp/errors.h"

namespace quepp {

char local_letter(unsigned code) { return "IXYZ"[code & 3U]; }

NoiseModel NoiseModel::noiseless() { return {}; }

NoiseModel NoiseModel::depolarizing(double lambda2, double lambda1, double r) {
  NoiseModel m;
  m.two_qubit.fill(lambda2 / 15.0);
  m.single_qubit.fill(lambda1 / 3.0);
  m.readout = r;
  m.validate();
  return m;
}

namespace {

template <std::size_t N>
void check_rates(const std::array<double, N>& rates, const std::string& what) {
  double total = 0.0;
  for (double p : rates) {
    if (!(p >= 0.0) || !(p <= 1.0)) throw PreconditionError(what + " rate outside [0, 1]");
    total += p;
  }
  if (total > 1.0 + 1e-12) throw PreconditionError(what + " rates sum above one");
}

}  // namespace

void NoiseModel::validate() const {
  check_rates(two_qubit, "two-qubit");
  for (const auto& [edge, rates] : two_qubit_overrides) {
    if (edge.first >= edge.second) throw PreconditionError("two-qubit override keys must be (low, high)");
    check_rates(rates, "two-qubit override");
  }
  check_rates(single_qubit, "single-qubit");
  if (!(readout >= 0.0 && readout <= 1.0)) throw PreconditionError("readout flip outside [0, 1]");
  for (const auto& [q, r] : readout_overrides)
    if (!(r >= 0.0 && r <= 1.0)) throw PreconditionError("readout flip outside [0, 1]");
}

bool NoiseModel::is_noiseless() const {
  auto zero = [](const auto& a) {
    for (double p : a)
      if (p != 0.0) return false;
    return true;
  };
  if (!zero(two_qubit) || !zero(single_qubit) || readout != 0.0) return false;
  for (const auto& kv : two_qubit_overrides)
    if (!zero(kv.second)) return false;
  for (const auto& kv : readout_overrides)
    if (kv.second != 0.0) return false;
  return true;
}

const std::array<double, 15>& NoiseModel::two_qubit_rates(std::size_t a, std::size_t b) const {
  if (two_qubit_overrides.empty()) return two_qubit;
  auto it = two_qubit_overrides.find(std::minmax(a, b));
  return it == two_qubit_overrides.end() ? two_qubit : it->second;
}

double NoiseModel::readout_flip(std::size_t q) const {
  auto it = readout_overrides.find(q);
  return it == readout_overrides.end() ? readout : it->second;
}

std::vector<NoiseLocation> noise_locations(const Circuit& circuit, const NoiseModel& noise) {
  std::vector<NoiseLocation> out;
  double single_total = 0.0;
  for (double p : noise.single_qubit) single_total += p;
  const auto& ops = circuit.ops();
  for (std::size_t i = 0; i < ops.size(); ++i) {
    if (const auto* g = std::get_if<CliffordGate>(&ops[i])) {
      NoiseLocation loc;
      loc.op_index = i;
      loc.arity = g->arity();
      loc.qubits = {g->qubits[0], g->qubits[1]};
      if (loc.arity == 2) {
        // Rates are indexed by the gate's own qubit order.
        const auto& rates = noise.two_qubit_rates(g->qubits[0], g->qubits[1]);
        loc.rates = rates.data();
        for (double p : rates) loc.total += p;
      } else {
        loc.rates = noise.single_qubit.data();
        loc.total = single_total;
      }
      out.push_back(loc);
      continue;
    }
    for (auto q : std::get<Rotation>(ops[i]).generator.support()) {
      NoiseLocation loc;
      loc.op_index = i;
      loc.qubits = {q, 0};
      loc.rates = noise.single_qubit.data();
      loc.total = single_total;
      out.push_back(loc);
    }
  }
  return out;
}

namespace {

bool letters_anticommute(char a, char b) { return a != 'I' && b != 'I' && a != b; }

}  // namespace

bool error_anticommutes(const NoiseLocation& loc, unsigned code, const PauliString& frame) {
  bool odd = letters_anticommute(local_letter(code), frame.letter(loc.qubits[0]));
  if (loc.arity == 2) odd ^= letters_anticommute(local_letter(code >> 2), frame.letter(loc.qubits[1]));
  return odd;
}

double flip_probability(const NoiseLocation& loc, const PauliString& frame) {
  const unsigned count = loc.arity == 2 ? 15 : 3;
  double q = 0.0;
  for (unsigned c = 1; c <= count; ++c)
    if (error_anticommutes(loc, c, frame)) q += loc.rates[c - 1];
  return q;
}

}  // namespace quepp
