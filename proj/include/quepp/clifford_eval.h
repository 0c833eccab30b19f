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

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "quepp/circuit.h"

namespace quepp {

/// What a Pauli path does at one rotation. kPassthrough is the only legal
/// choice where the frame commutes with the generator; kCos or kSin where it
/// anticommutes.
enum class Branch : std::uint8_t { kPassthrough = 0, kCos = 1, kSin = 2 };

/// One decision per rotation; decisions[j-1] belongs to rotation j.
struct BranchAssignment {
  std::vector<Branch> decisions;

  bool operator==(const BranchAssignment&) const = default;
};

struct BackpropResult {
  PauliString frame;
  /// Rotation index j whose decision contradicted the commutation actually
  /// met at evaluation time.
  std::optional<std::size_t> inconsistent_at;

  bool ok() const { return !inconsistent_at.has_value(); }
};

class InconsistentBranchError : public std::runtime_error {
 public:
  explicit InconsistentBranchError(std::size_t j)
      : std::runtime_error("branch decision inconsistent at rotation " + std::to_string(j)), rotation_(j) {}
  std::size_t rotation() const { return rotation_; }

 private:
  std::size_t rotation_;
};

/// Walks `circuit` in reverse, conjugating `observable` by every Clifford and
/// applying the branch decision at every rotation.
BackpropResult backpropagate(const Circuit& circuit, const PauliString& observable, const BranchAssignment& branches);

/// Tr[rho C^dagger(O)] for the Clifford circuit selected by `branches`.
/// Throws InconsistentBranchError.
int ideal_path_expectation(const Circuit& circuit, const PauliString& observable, const BranchAssignment& branches);

/// Heisenberg image of `observable` under a circuit whose rotations all have
/// Clifford angles. Throws PreconditionError otherwise.
PauliString clifford_frame(const Circuit& circuit, const PauliString& observable);

/// Exact expectation of a Clifford circuit on its input state.
int clifford_expectation(const Circuit& circuit, const PauliString& observable);

/// Conjugates `frame` by a rotation whose angle is `turns` quarter turns.
void apply_quarter_turns(PauliString& frame, const PauliString& generator, int turns);

/// The Clifford circuit of a path: every rotation keeps its slot, with angle 0
/// for cos/passthrough and pi/2 for sin.
Circuit materialize_path_circuit(const Circuit& circuit, const BranchAssignment& branches);

}  // namespace quepp
