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
#include <span>
#include <string>
#include <vector>

#include "quepp/circuit.h"
#include "quepp/noise.h"

namespace quepp {

struct ExecutionPlan {
  std::size_t num_twirls = 100;
  std::size_t shots_per_twirl = 200;
  std::uint64_t seed = 1;
  bool interleave = true;
  /// Return exact noisy expectations with no shot noise.
  bool infinite_shots = false;

  void validate() const;
};

struct NoisyEstimate {
  double mean = 0.0;
  /// Sample standard error of the per-shot +-1 outcomes (0 for infinite shots).
  double std_error = 0.0;
  std::size_t total_shots = 0;
};

struct Job {
  Circuit circuit;
  PauliString observable;
};

enum class JobErrorKind : std::uint8_t { kNone, kCapability, kInvalid, kInternal };

struct JobResult {
  std::optional<NoisyEstimate> estimate;
  JobErrorKind error_kind = JobErrorKind::kNone;
  std::string error;

  bool ok() const { return estimate.has_value(); }
};

/// The seam between the estimator and whatever runs circuits. Implementations
/// must return one result per job, in submission order, and must be safe to
/// call from several threads.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual std::string name() const = 0;
  virtual std::vector<JobResult> submit_batch(std::span<const Job> jobs, const ExecutionPlan& plan) const = 0;
};

struct SimulatorOptions {
  /// Largest register the dense trajectory engine accepts.
  std::size_t dense_qubit_cap = 14;
  /// Upper bound on merged Pauli terms in infinite-shot non-Clifford mode.
  std::size_t exact_term_cap = std::size_t{1} << 22;
  std::size_t workers = 1;
  /// Run every dense trajectory from scratch with its twirl Paulis applied,
  /// instead of sharing one trajectory per error pattern.
  bool literal_twirls = false;
};

/// Pauli-twirled, Pauli-stochastic trajectory simulator with shot noise.
/// Clifford circuits run on a Pauli-frame engine with no size limit; other
/// circuits run as dense statevector trajectories.
class SimulatorBackend : public Backend {
 public:
  explicit SimulatorBackend(NoiseModel noise, SimulatorOptions options = {});

  std::string name() const override { return "simulator"; }
  std::vector<JobResult> submit_batch(std::span<const Job> jobs, const ExecutionPlan& plan) const override;

  /// One circuit; `stream` selects the RNG streams (the batch position).
  NoisyEstimate estimate(const Circuit& circuit, const PauliString& observable, const ExecutionPlan& plan,
                         std::uint64_t stream = 0) const;

  const NoiseModel& noise() const { return noise_; }
  const SimulatorOptions& options() const { return options_; }

 private:
  NoiseModel noise_;
  SimulatorOptions options_;
};

/// Convenience wrapper around SimulatorBackend::estimate.
NoisyEstimate estimate_noisy_expectation(const Circuit& circuit, const PauliString& observable,
                                         const NoiseModel& noise, const ExecutionPlan& plan);

/// Exact noisy expectation of a Clifford circuit: the ideal value times the
/// product of (1 - 2 q) over noise locations and readout.
double clifford_noisy_expectation(const Circuit& circuit, const PauliString& observable, const NoiseModel& noise);

}  // namespace quepp
