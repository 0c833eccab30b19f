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
#include <vector>

#include <nlohmann/json.hpp>

#include "quepp/backend.h"
#include "quepp/cpt.h"
#include "quepp/generators.h"
#include "quepp/pipeline.h"
#include "quepp/sampler.h"

namespace quepp::cli {

inline constexpr int kSchemaVersion = 1;

/// Thrown for anything wrong with a configuration file or flag.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct NoiseConfig {
  /// "depolarizing", "noiseless" or "custom".
  std::string model = "depolarizing";
  double lambda2 = 5e-3;
  double lambda1 = 2e-4;
  double readout = 1e-2;
  /// Only for "custom".
  NoiseModel custom;

  NoiseModel build() const;
};

struct CptSeries {
  /// Largest order in the (K_T, estimate) series.
  std::size_t max_order = 4;
  /// Term caps for the merged breadth-first series.
  std::vector<std::size_t> max_terms = {1, 4, 16, 64, 256, 1024, 4096};
  double epsilon = 0.0;
};

struct RunConfig {
  std::uint64_t seed = 1;
  std::size_t workers = 1;
  /// Either a generated experiment or a circuit file plus observable.
  std::optional<ExperimentSpec> experiment;
  std::string circuit_file;
  std::optional<PauliString> observable;

  /// Exactly one of these selects the ensemble.
  std::optional<TruncationPolicy> truncation;
  std::optional<SamplerConfig> sampler;

  NoiseConfig noise;
  ExecutionPlan plan;
  EtaMethod eta_method = EtaMethod::kMedian;
  std::size_t dense_qubit_cap = 14;
  CptSeries cpt;
  /// Ensemble sizes for the convergence series; empty means every size.
  std::vector<std::size_t> series_sizes;
  bool allow_partial = false;
  std::string output_dir;

  void validate() const;
};

/// Reads a config; fields left out take the defaults above. Sub-seeds that are
/// not given explicitly are derived from `seed`.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);
/// Every field, so the result reproduces the run on its own.
nlohmann::json to_json(const RunConfig& c);

/// Applies --seed: the top-level seed and every sub-seed derived from it.
void reseed(RunConfig& c, std::uint64_t seed);

std::string version_string();

}  // namespace quepp::cli
