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
#include <random>
#include <string>
#include <vector>

#include "quepp/cpt.h"

namespace quepp {

enum class SamplingDistribution : std::uint8_t { kDTilde, kDPostselected };

std::string distribution_name(SamplingDistribution d);
SamplingDistribution parse_distribution(const std::string& name);

struct SamplerConfig {
  std::size_t target_unique_paths = 1;
  std::size_t max_attempts = 1;
  SamplingDistribution distribution = SamplingDistribution::kDTilde;
  std::uint64_t rng_seed = 0;
  std::size_t workers = 1;

  void validate() const;
};

struct SampleOutcome {
  /// Filled in only when the walk reached the circuit start.
  PauliPath path;
  bool completed = false;
  bool accepted = false;
};

/// One stochastic walk from the observable back to the input.
SampleOutcome sample_path(const Circuit& circuit, const PauliString& observable, SamplingDistribution distribution,
                          std::mt19937_64& rng);

struct SamplingReport {
  std::size_t attempts = 0;
  std::size_t accepted = 0;
  std::size_t unique = 0;
  std::size_t aborted = 0;
  std::size_t zero_expectation = 0;
  /// max_attempts ran out before target_unique_paths was reached.
  bool saturated = false;
};

struct SampledEnsemble {
  /// Unique accepted paths in first-seen order (single worker) or sorted by
  /// path id (several workers).
  std::vector<PauliPath> paths;
  SamplingReport report;
};

SampledEnsemble build_ensemble(const Circuit& circuit, const PauliString& observable, const SamplerConfig& config);

/// Probability that a walk under `distribution` completes with this path.
/// For d_tilde it is the product of branch probabilities; for d_postselected
/// it also includes the continuation probability at commuting rotations.
double walk_probability(const Circuit& circuit, const PauliString& observable, const PauliPath& path,
                        SamplingDistribution distribution);

struct DistributionCheck {
  double chi_square = 0.0;
  std::size_t dof = 0;
  double p_value = 1.0;
  std::size_t draws = 0;
  /// Draws that reached the circuit start (the compared population).
  std::size_t completed = 0;
  std::size_t paths = 0;
};

/// Compares empirical path frequencies with the target law: products of
/// branch probabilities for d_tilde, |g| normalized over all paths for
/// d_postselected. Cells with expected count below 5 are pooled.
DistributionCheck empirical_distribution_check(const Circuit& circuit, const PauliString& observable,
                                               SamplingDistribution distribution, std::size_t num_draws,
                                               std::uint64_t seed, std::size_t max_paths = 1U << 16);

}  // namespace quepp
