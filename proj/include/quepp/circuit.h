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
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "quepp/pauli.h"

namespace quepp {

/// exp(-i * angle * generator / 2).
struct Rotation {
  PauliString generator;
  double angle = 0.0;

  bool operator==(const Rotation&) const = default;
};

using GateOp = std::variant<CliffordGate, Rotation>;

/// An ordered list of Clifford gates and Pauli rotations acting on a fixed
/// product-state input. Rotations are numbered 1..K in circuit order.
class Circuit {
 public:
  Circuit() = default;
  explicit Circuit(std::size_t num_qubits, InputKind input = InputKind::kAllZero);

  std::size_t num_qubits() const { return num_qubits_; }
  InputKind input() const { return input_; }
  void set_input(InputKind input) { input_ = input; }

  const std::vector<GateOp>& ops() const { return ops_; }
  std::size_t size() const { return ops_.size(); }

  void append(const CliffordGate& gate);
  void append(GateKind kind, std::size_t q0, std::size_t q1 = 0);
  /// `generator` must be non-identity; its sign must be +1.
  void append(Rotation rotation);
  void append_rotation(const PauliString& generator, double angle);
  void append(const GateOp& op);
  void append(const Circuit& other);

  /// K, the number of rotation ops.
  std::size_t rotation_count() const { return rotation_positions_.size(); }
  /// positions()[j-1] is the op index of rotation j.
  const std::vector<std::size_t>& rotation_positions() const { return rotation_positions_; }
  const Rotation& rotation(std::size_t j) const;

  /// Counts per mnemonic ("h", "cz", ..., "rot").
  std::map<std::string, std::size_t> census() const;

  /// The exact inverse: reversed op order, each op inverted.
  Circuit inverse() const;

  bool operator==(const Circuit& other) const;

 private:
  std::size_t num_qubits_ = 0;
  InputKind input_ = InputKind::kAllZero;
  std::vector<GateOp> ops_;
  std::vector<std::size_t> rotation_positions_;
};

/// Angles within this distance of a multiple of pi/2 are treated as exact.
inline constexpr double kCliffordAngleTolerance = 1e-12;

/// m in 0..3 with angle == m * pi/2 (mod 2*pi), or -1 when not a Clifford angle.
int quarter_turns(double angle);

/// Gates equal (up to global phase) to exp(-i * turns * pi/4 * generator),
/// i.e. `turns` quarter turns about the generator.
std::vector<CliffordGate> quarter_turn_gates(const PauliString& generator, int turns);

/// Rewrites every rotation into Clifford quarter turns followed by a residual
/// rotation with |angle| <= pi/4. Residuals that vanish are dropped.
Circuit normalize_rotations(const Circuit& circuit);

/// True when every rotation has a Clifford angle.
bool is_clifford(const Circuit& circuit);

}  // namespace quepp
