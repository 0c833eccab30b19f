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

#include "quepp/circuit.h"

#include <cmath>
#include <numbers>

#include "quepp/errors.h"

namespace quepp {

namespace {

std::string rotation_mnemonic(const Rotation& r) {
  if (r.generator.weight() == 1) {
    const auto q = r.generator.support().front();
    switch (r.generator.letter(q)) {
      case 'X': return "rx";
      case 'Y': return "ry";
      case 'Z': return "rz";
      default: break;
    }
  }
  return "rot";
}

GateKind pauli_gate(char letter) {
  switch (letter) {
    case 'X': return GateKind::kX;
    case 'Y': return GateKind::kY;
    default: return GateKind::kZ;
  }
}

}  // namespace

Circuit::Circuit(std::size_t num_qubits, InputKind input) : num_qubits_(num_qubits), input_(input) {
  if (num_qubits == 0) throw DimensionError("circuit needs at least one qubit");
}

void Circuit::append(const CliffordGate& gate) {
  for (std::size_t i = 0; i < gate.arity(); ++i)
    if (gate.qubits[i] >= num_qubits_)
      throw IndexError("gate qubit " + std::to_string(gate.qubits[i]) + " out of range for " +
                       std::to_string(num_qubits_) + " qubits");
  if (gate.arity() == 2 && gate.qubits[0] == gate.qubits[1])
    throw IndexError("two-qubit gate on a repeated qubit " + std::to_string(gate.qubits[0]));
  CliffordGate g = gate;
  if (g.arity() == 1) g.qubits[1] = 0;
  ops_.emplace_back(g);
}

void Circuit::append(GateKind kind, std::size_t q0, std::size_t q1) {
  append(CliffordGate{kind, {static_cast<std::uint32_t>(q0), static_cast<std::uint32_t>(q1)}});
}

void Circuit::append(Rotation rotation) {
  if (rotation.generator.num_qubits() != num_qubits_)
    throw DimensionError("rotation generator size does not match circuit");
  if (rotation.generator.is_identity()) throw PreconditionError("rotation generator is the identity");
  if (rotation.generator.negative()) throw PreconditionError("rotation generator must have sign +1");
  if (!std::isfinite(rotation.angle)) throw PreconditionError("rotation angle is not finite");
  rotation_positions_.push_back(ops_.size());
  ops_.emplace_back(std::move(rotation));
}

void Circuit::append_rotation(const PauliString& generator, double angle) { append(Rotation{generator, angle}); }

void Circuit::append(const GateOp& op) {
  std::visit([this](const auto& o) { append(o); }, op);
}

void Circuit::append(const Circuit& other) {
  if (other.num_qubits_ != num_qubits_) throw DimensionError("cannot append circuits of different width");
  for (const auto& op : other.ops_) append(op);
}

const Rotation& Circuit::rotation(std::size_t j) const {
  if (j == 0 || j > rotation_positions_.size()) throw IndexError("rotation index " + std::to_string(j));
  return std::get<Rotation>(ops_[rotation_positions_[j - 1]]);
}

std::map<std::string, std::size_t> Circuit::census() const {
  std::map<std::string, std::size_t> out;
  for (const auto& op : ops_) {
    if (const auto* g = std::get_if<CliffordGate>(&op))
      ++out[std::string(gate_mnemonic(g->kind))];
    else
      ++out[rotation_mnemonic(std::get<Rotation>(op))];
  }
  return out;
}

Circuit Circuit::inverse() const {
  Circuit out(num_qubits_, input_);
  for (auto it = ops_.rbegin(); it != ops_.rend(); ++it) {
    if (const auto* g = std::get_if<CliffordGate>(&*it)) {
      out.append(CliffordGate{gate_inverse(g->kind), g->qubits});
    } else {
      const auto& r = std::get<Rotation>(*it);
      out.append(Rotation{r.generator, -r.angle});
    }
  }
  return out;
}

bool Circuit::operator==(const Circuit& other) const {
  return num_qubits_ == other.num_qubits_ && input_ == other.input_ && ops_ == other.ops_;
}

int quarter_turns(double angle) {
  const double turns = angle / (std::numbers::pi / 2);
  const double m = std::nearbyint(turns);
  if (std::abs(angle - m * (std::numbers::pi / 2)) > kCliffordAngleTolerance) return -1;
  const auto mi = static_cast<long long>(m);
  return static_cast<int>(((mi % 4) + 4) % 4);
}

std::vector<CliffordGate> quarter_turn_gates(const PauliString& generator, int turns) {
  turns = ((turns % 4) + 4) % 4;
  std::vector<CliffordGate> out;
  if (turns == 0) return out;
  const auto support = generator.support();
  if (support.empty()) throw PreconditionError("quarter turn about the identity");
  auto gate = [](GateKind k, std::size_t a, std::size_t b = 0) {
    return CliffordGate{k, {static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b)}};
  };
  if (turns == 2) {
    for (auto q : support) out.push_back(gate(pauli_gate(generator.letter(q)), q));
    return out;
  }
  const bool forward = turns == 1;
  if (support.size() == 1) {
    const auto q = support.front();
    switch (generator.letter(q)) {
      case 'X':
        out.push_back(gate(forward ? GateKind::kSX : GateKind::kSXdg, q));
        break;
      case 'Z':
        out.push_back(gate(forward ? GateKind::kS : GateKind::kSdg, q));
        break;
      default:
        // R_Y(pi/2) = H Z and R_Y(-pi/2) = Z H, up to phase.
        if (forward) {
          out.push_back(gate(GateKind::kZ, q));
          out.push_back(gate(GateKind::kH, q));
        } else {
          out.push_back(gate(GateKind::kH, q));
          out.push_back(gate(GateKind::kZ, q));
        }
        break;
    }
    return out;
  }
  // Basis change to Z on every support qubit, parity ladder onto the last
  // one, a Z quarter turn there, then undo.
  std::vector<CliffordGate> basis;
  std::vector<CliffordGate> unbasis;
  for (auto q : support) {
    const char l = generator.letter(q);
    if (l == 'X') {
      basis.push_back(gate(GateKind::kH, q));
      unbasis.push_back(gate(GateKind::kH, q));
    } else if (l == 'Y') {
      basis.push_back(gate(GateKind::kSX, q));
      unbasis.push_back(gate(GateKind::kSXdg, q));
    }
  }
  const auto last = support.back();
  out.insert(out.end(), basis.begin(), basis.end());
  for (std::size_t i = 0; i + 1 < support.size(); ++i) out.push_back(gate(GateKind::kCX, support[i], last));
  out.push_back(gate(forward ? GateKind::kS : GateKind::kSdg, last));
  for (std::size_t i = support.size() - 1; i-- > 0;) out.push_back(gate(GateKind::kCX, support[i], last));
  out.insert(out.end(), unbasis.begin(), unbasis.end());
  return out;
}

Circuit normalize_rotations(const Circuit& circuit) {
  Circuit out(circuit.num_qubits(), circuit.input());
  for (const auto& op : circuit.ops()) {
    if (const auto* g = std::get_if<CliffordGate>(&op)) {
      out.append(*g);
      continue;
    }
    const auto& r = std::get<Rotation>(op);
    const double m = std::nearbyint(r.angle / (std::numbers::pi / 2));
    double residual = r.angle - m * (std::numbers::pi / 2);
    const auto mi = static_cast<long long>(m);
    for (const auto& g : quarter_turn_gates(r.generator, static_cast<int>(((mi % 4) + 4) % 4))) out.append(g);
    if (std::abs(residual) > kCliffordAngleTolerance) out.append(Rotation{r.generator, residual});
  }
  return out;
}

bool is_clifford(const Circuit& circuit) {
  for (auto pos : circuit.rotation_positions())
    if (quarter_turns(std::get<Rotation>(circuit.ops()[pos]).angle) < 0) return false;
  return true;
}

}  // namespace quepp
