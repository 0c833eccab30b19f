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
#include <functional>
#include <unordered_map>
#include <vector>

#include "quepp/circuit.h"

namespace quepp {

struct PauliHash {
  std::size_t operator()(const PauliString& p) const noexcept;
};

/// A Heisenberg-picture observable as a sum of signed-coefficient Paulis with
/// identical Paulis merged. Keys always carry sign +1.
class PauliSum {
 public:
  explicit PauliSum(const PauliString& observable);

  void apply_clifford(const CliffordGate& gate);
  /// O -> R^dagger O R for R = exp(-i angle G / 2).
  void apply_rotation(const Rotation& rotation);
  void apply_op(const GateOp& op);
  /// Multiplies every term by fidelity(term). Used for Pauli channels, which
  /// are diagonal in the Pauli basis.
  void apply_damping(const std::function<double(const PauliString&)>& fidelity);
  /// Drops terms with |c| < epsilon (and exact zeros), then keeps the
  /// max_terms largest by (|c| desc, Pauli asc).
  void truncate(double epsilon, std::size_t max_terms);

  std::size_t size() const { return terms_.size(); }
  /// Sum of c * <input|P|input>, accumulated in canonical Pauli order.
  double expectation(InputKind input) const;
  /// Terms in canonical Pauli order.
  std::vector<std::pair<PauliString, double>> sorted_terms() const;

 private:
  std::size_t num_qubits_;
  std::unordered_map<PauliString, double, PauliHash> terms_;
};

}  // namespace quepp
