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
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "quepp/circuit.h"
#include "quepp/clifford_eval.h"

namespace quepp {

struct PathCoefficient {
  double value = 1.0;
  std::size_t order = 0;
  /// 1-based rotation indices, ascending.
  std::vector<std::size_t> sin_indices;
  std::vector<std::size_t> cos_indices;
};

struct PauliPath {
  BranchAssignment branches;
  PathCoefficient coeff;
  /// <input| frame |input> including the frame sign.
  int ideal_expectation = 0;
  PauliString frame;
  std::uint64_t path_id = 0;

  std::string id_string() const;
};

/// FNV-1a over the sin-taken rotation indices. Together with the circuit the
/// sin set determines every other decision.
std::uint64_t path_id_of(std::span<const std::size_t> sin_indices);
std::string format_path_id(std::uint64_t id);

struct TruncationPolicy {
  enum class Mode : std::uint8_t { kOrder, kCoefficient, kHybrid, kUnbounded };

  Mode mode = Mode::kUnbounded;
  std::size_t max_order = std::numeric_limits<std::size_t>::max();
  double epsilon = 0.0;

  static TruncationPolicy order(std::size_t k_t);
  static TruncationPolicy coefficient(double epsilon);
  static TruncationPolicy hybrid(std::size_t k_t, double epsilon);
  static TruncationPolicy unbounded();

  bool has_order_limit() const { return mode == Mode::kOrder || mode == Mode::kHybrid; }
};

std::string truncation_mode_name(TruncationPolicy::Mode mode);

struct EnumerationStats {
  /// Paths that reached the circuit start, whether emitted or not.
  std::size_t completed = 0;
  std::size_t emitted = 0;
  std::size_t zero_expectation = 0;
  std::size_t pruned_order = 0;
  std::size_t pruned_coefficient = 0;
  /// Sum of g^2 over every completed path, including zero-expectation ones.
  double coefficient_power = 0.0;
  std::size_t max_stack = 0;
  /// Fixed-point accumulator behind coefficient_power, so the total does not
  /// depend on the order in which workers finish.
  unsigned __int128 power_units = 0;

  void add_power(double g2);
  void merge(const EnumerationStats& other);
};

inline constexpr double kPowerScale = 1152921504606846976.0;  // 2^60

using PathSink = std::function<void(PauliPath&&)>;

/// Depth-first, cos child before sin child, streaming each completed path to
/// `sink`. Memory is bounded by the circuit depth.
EnumerationStats for_each_path(const Circuit& circuit, const PauliString& observable, const TruncationPolicy& policy,
                               bool keep_zero_expectation, const PathSink& sink);

struct Enumeration {
  std::vector<PauliPath> paths;
  EnumerationStats stats;
};

/// Materialized enumeration sorted by (path_id, sin_indices). Output does not
/// depend on `workers`.
Enumeration enumerate_paths(const Circuit& circuit, const PauliString& observable, const TruncationPolicy& policy,
                            bool keep_zero_expectation, std::size_t workers = 1);

/// Sum of g * ideal expectation, accumulated in (path_id, sin_indices) order.
double classical_cpt_estimate(std::span<const PauliPath> paths);

/// Sum of g^2. Throws InternalError when it exceeds one.
double coefficient_power(std::span<const PauliPath> paths);

struct MergedCptResult {
  double estimate = 0.0;
  std::size_t peak_terms = 0;
  std::size_t final_terms = 0;
};

MergedCptResult merged_bfs_cpt(const Circuit& circuit, const PauliString& observable, std::size_t max_terms,
                               double epsilon);

/// Branch decisions for a sin-index set, derived by walking the circuit.
/// Throws InconsistentBranchError when an index lands on a commuting rotation.
BranchAssignment branches_from_sin_indices(const Circuit& circuit, const PauliString& observable,
                                           std::span<const std::size_t> sin_indices);

/// Builds the full record of a path from its branch decisions.
PauliPath make_path(const Circuit& circuit, const PauliString& observable, const BranchAssignment& branches);

}  // namespace quepp
