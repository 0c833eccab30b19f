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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "quepp/circuit.h"

namespace quepp {

/// Dense n-qubit state. Basis index bit q holds qubit q.
class StateVector {
 public:
  explicit StateVector(std::size_t num_qubits, InputKind input = InputKind::kAllZero);

  std::size_t num_qubits() const { return num_qubits_; }
  const std::vector<std::complex<double>>& amplitudes() const { return amp_; }

  void apply(const GateOp& op);
  void apply_clifford(const CliffordGate& gate);
  void apply_rotation(const Rotation& rotation);
  /// Applies the (signed) Pauli operator.
  void apply_pauli(const PauliString& p);
  /// Applies the single-qubit Pauli letter ('X', 'Y' or 'Z') to qubit q.
  void apply_letter(std::size_t q, char letter);

  double expectation(const PauliString& p) const;
  double norm_squared() const;

 private:
  void apply_1q(std::size_t q, const std::complex<double> (&m)[2][2]);

  std::size_t num_qubits_;
  std::vector<std::complex<double>> amp_;
};

/// Noise-free expectation by dense simulation.
double statevector_expectation(const Circuit& circuit, const PauliString& observable);

}  // namespace quepp
