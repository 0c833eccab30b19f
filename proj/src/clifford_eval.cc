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

#include "quepp/clifford_eval.h"

#include <numbers>

#include "quepp/errors.h"

namespace quepp {

BackpropResult backpropagate(const Circuit& circuit, const PauliString& observable, const BranchAssignment& branches) {
  if (observable.num_qubits() != circuit.num_qubits()) throw DimensionError("observable size does not match circuit");
  if (branches.decisions.size() != circuit.rotation_count())
    throw DimensionError("branch assignment has " + std::to_string(branches.decisions.size()) +
                         " decisions for " + std::to_string(circuit.rotation_count()) + " rotations");
  BackpropResult result{observable, std::nullopt};
  PauliString& frame = result.frame;
  std::size_t j = circuit.rotation_count();
  const auto& ops = circuit.ops();
  for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
    if (const auto* g = std::get_if<CliffordGate>(&*it)) {
      conjugate_in_place(frame, *g);
      continue;
    }
    const auto& r = std::get<Rotation>(*it);
    const Branch b = branches.decisions[j - 1];
    if (commutes(frame, r.generator)) {
      if (b != Branch::kPassthrough) {
        result.inconsistent_at = j;
        return result;
      }
    } else if (b == Branch::kSin) {
      multiply_by_generator_in_place(frame, r.generator);
    } else if (b != Branch::kCos) {
      result.inconsistent_at = j;
      return result;
    }
    --j;
  }
  return result;
}

int ideal_path_expectation(const Circuit& circuit, const PauliString& observable, const BranchAssignment& branches) {
  auto r = backpropagate(circuit, observable, branches);
  if (!r.ok()) throw InconsistentBranchError(*r.inconsistent_at);
  return expectation_on_stabilizer_input(r.frame, circuit.input());
}

void apply_quarter_turns(PauliString& frame, const PauliString& generator, int turns) {
  turns = ((turns % 4) + 4) % 4;
  if (turns == 0 || commutes(frame, generator)) return;
  if (turns == 2) {
    frame.flip_sign();
    return;
  }
  multiply_by_generator_in_place(frame, generator);
  if (turns == 3) frame.flip_sign();
}

PauliString clifford_frame(const Circuit& circuit, const PauliString& observable) {
  if (observable.num_qubits() != circuit.num_qubits()) throw DimensionError("observable size does not match circuit");
  PauliString frame = observable;
  const auto& ops = circuit.ops();
  for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
    if (const auto* g = std::get_if<CliffordGate>(&*it)) {
      conjugate_in_place(frame, *g);
      continue;
    }
    const auto& r = std::get<Rotation>(*it);
    const int turns = quarter_turns(r.angle);
    if (turns < 0) throw PreconditionError("circuit contains a non-Clifford rotation");
    apply_quarter_turns(frame, r.generator, turns);
  }
  return frame;
}

int clifford_expectation(const Circuit& circuit, const PauliString& observable) {
  return expectation_on_stabilizer_input(clifford_frame(circuit, observable), circuit.input());
}

Circuit materialize_path_circuit(const Circuit& circuit, const BranchAssignment& branches) {
  if (branches.decisions.size() != circuit.rotation_count()) throw DimensionError("branch assignment size mismatch");
  Circuit out(circuit.num_qubits(), circuit.input());
  std::size_t j = 0;
  for (const auto& op : circuit.ops()) {
    if (const auto* g = std::get_if<CliffordGate>(&op)) {
      out.append(*g);
      continue;
    }
    const auto& r = std::get<Rotation>(op);
    const bool sin_branch = branches.decisions[j++] == Branch::kSin;
    out.append(Rotation{r.generator, sin_branch ? std::numbers::pi / 2 : 0.0});
  }
  return out;
}

}  // namespace quepp
