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
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "quepp/circuit.h"

namespace quepp {

/// Undirected qubit connectivity used to place CZ gates.
struct CouplingGraph {
  std::size_t num_qubits = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;

  /// 0-1-2-...-(n-1).
  static CouplingGraph chain(std::size_t n);
  /// Rows of ceil(sqrt(n)) qubits; horizontal edges everywhere, vertical edges
  /// only on alternating columns so every qubit has degree <= 3 (a brick-wall,
  /// heavy-hex-like lattice).
  static CouplingGraph hex_like(std::size_t n);
  /// Whitespace separated "a b" pairs, one per line, '#' comments.
  static CouplingGraph from_edge_list(std::size_t n, std::string_view text);
};

enum class Family : std::uint8_t { kMirror2D, kMirror1D, kTrotter };

std::string_view family_name(Family f);
Family parse_family(std::string_view name);

/// Exact forward-half gate counts for mirror circuits. When set, the generator
/// places exactly this many gates of each class instead of sampling per slot.
struct ForwardCensus {
  std::size_t cz = 0;
  std::size_t single = 0;
  std::size_t rx = 0;
};

struct ExperimentSpec {
  Family family = Family::kMirror2D;
  std::size_t num_qubits = 10;
  /// Forward layers for mirrors; Trotter steps for trotter.
  std::size_t layers = 16;
  double theta = 0.6283185307179586;
  std::uint64_t seed = 1;
  /// Default: Z on spread-out qubits for mirrors, X on every qubit for trotter.
  std::optional<PauliString> observable;
  std::vector<double> sweep;

  // Mirror layer law: every qubit gets a single-qubit Clifford with
  // probability p_single, each edge of a random maximal matching gets a CZ with
  // probability p_cz, and every qubit gets RX(theta) with probability p_rx.
  double p_single = 0.5;
  double p_cz = 1.0;
  double p_rx = 0.05;
  std::optional<ForwardCensus> census;
  /// "chain", "hex", or "file:<path>" for an edge list.
  std::string coupling;
};

/// The observable the generators use when the spec does not set one.
PauliString default_observable(const ExperimentSpec& spec);

/// Forward random circuit F followed by F^-1.
Circuit generate_mirror(const ExperimentSpec& spec);
Circuit generate_mirror(const ExperimentSpec& spec, const CouplingGraph& graph);

/// Brickwork Trotter circuit: an H layer, then `layers` repetitions of
/// CZ_even SX_odd CZ_even RX(theta)^n CZ_odd SX_odd>=3 CZ_odd.
Circuit generate_trotter(const ExperimentSpec& spec);

/// Dispatches on spec.family; the result is not normalized.
Circuit generate_circuit(const ExperimentSpec& spec);

}  // namespace quepp
