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

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "quepp/circuit.h"

namespace quepp {

/// Local Pauli codes. One qubit: 1=X, 2=Y, 3=Z. Two qubits (a, b): code =
/// la + 4 lb with letters 0=I, 1=X, 2=Y, 3=Z, so codes 1..15.
char local_letter(unsigned code);

struct NoiseModel {
  /// Probability of each non-identity two-qubit Pauli after a two-qubit gate.
  std::array<double, 15> two_qubit{};
  /// Per-edge overrides keyed by (min qubit, max qubit).
  std::map<std::pair<std::size_t, std::size_t>, std::array<double, 15>> two_qubit_overrides;
  /// Probability of X, Y, Z after a single-qubit gate or on each qubit a
  /// rotation acts on.
  std::array<double, 3> single_qubit{};
  double readout = 0.0;
  /// Per-qubit readout flip probabilities; entries override `readout`.
  std::map<std::size_t, double> readout_overrides;

  static NoiseModel noiseless();
  /// Uniform depolarizing: lambda2 split evenly over the 15 two-qubit Paulis,
  /// lambda1 over X, Y, Z, and readout flip r.
  static NoiseModel depolarizing(double lambda2 = 5e-3, double lambda1 = 2e-4, double r = 1e-2);

  void validate() const;
  bool is_noiseless() const;
  const std::array<double, 15>& two_qubit_rates(std::size_t a, std::size_t b) const;
  double readout_flip(std::size_t q) const;
};

/// A place where the simulator injects a Pauli error: right after op
/// `op_index`, on one or two qubits.
struct NoiseLocation {
  std::size_t op_index = 0;
  std::array<std::size_t, 2> qubits{0, 0};
  std::size_t arity = 1;
  /// Points into the model's rate table (3 or 15 entries).
  const double* rates = nullptr;
  double total = 0.0;
};

/// Locations in time order. Rotations contribute one single-qubit location
/// per support qubit.
std::vector<NoiseLocation> noise_locations(const Circuit& circuit, const NoiseModel& noise);

/// True when the local error `code` anticommutes with the Pauli restricted to
/// the location's qubits.
bool error_anticommutes(const NoiseLocation& loc, unsigned code, const PauliString& frame);

/// Probability that the error at `loc` anticommutes with `frame`.
double flip_probability(const NoiseLocation& loc, const PauliString& frame);

}  // namespace quepp
