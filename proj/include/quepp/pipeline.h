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

#include "quepp/backend.h"
#include "quepp/cpt.h"

namespace quepp {

enum class EtaMethod : std::uint8_t { kMedian, kWeightedAverage, kBalance };

std::string eta_method_name(EtaMethod m);
EtaMethod parse_eta_method(const std::string& name);

/// One executed ensemble circuit.
struct EnsembleRecord {
  PauliPath path;
  int ideal = 0;
  NoisyEstimate noisy;
  double eta = 1.0;
  /// |eta| > 1, which only shot noise can produce.
  bool out_of_range = false;
};

/// Throws PreconditionError when the path has zero ideal expectation or the
/// noisy mean is not finite.
EnsembleRecord make_record(PauliPath path, const NoisyEstimate& noisy);

/// Throws std::invalid_argument on an empty sample.
double eta_median(std::span<const EnsembleRecord> records);
/// sum g * noisy / sum g * ideal. Throws DegenerateError when the denominator
/// vanishes.
double eta_weighted_average(std::span<const EnsembleRecord> records);
/// The sample point minimizing sum_i |1 - eta_i / eta|; ties go to the larger
/// point. Throws std::invalid_argument on an empty sample.
double eta_balance(std::span<const EnsembleRecord> records);

struct EtaChoice {
  EtaMethod method = EtaMethod::kMedian;
  double value = 1.0;
  /// Weighted average was requested but degenerate, so the median was used.
  bool fell_back = false;
  /// No records: value is 1 and nothing was rescaled.
  bool empty = false;
};

EtaChoice choose_eta(std::span<const EnsembleRecord> records, EtaMethod method);

/// Every estimator and the extremes used by the bias bounds.
struct EtaSummary {
  std::size_t count = 0;
  std::optional<double> median;
  std::optional<double> weighted_average;
  std::optional<double> balance;
  std::optional<double> mean;
  std::optional<double> min;
  std::optional<double> max;
  std::size_t out_of_range = 0;
};

EtaSummary summarize_etas(std::span<const EnsembleRecord> records);

/// Maximizer of |1 - eta_i / eta| over the records.
double eta_star(std::span<const EnsembleRecord> records, double eta);
/// Maximizer of |1 - eta / eta_i| over the records; 0 when some eta_i is 0.
double eta_prime(std::span<const EnsembleRecord> records, double eta);

/// The classical half of the estimator together with the ids it covers.
struct ClassicalPart {
  double value = 0.0;
  /// Ids of the nonzero-expectation paths, sorted.
  std::vector<std::uint64_t> path_ids;
  /// Sum of g^2 over the paths handed in.
  double power = 0.0;
};

ClassicalPart make_classical_part(std::span<const PauliPath> paths);

struct VarianceBound {
  double gamma = 1.0;
  double p_kt = 0.0;
  std::size_t shots = 0;
  /// gamma * p_kt / shots.
  double bound = 0.0;
  /// sum |g|^2 (1 - eta_i^2) / (eta^2 shots).
  double exact = 0.0;
};

/// `shots` is the per-circuit shot count; 0 means infinite shots and gives 0.
VarianceBound variance_bound(std::span<const EnsembleRecord> records, double eta, std::size_t shots,
                             std::optional<double> p_kt = std::nullopt);

struct CombinatorialBias {
  double exact_sum = 0.0;
  /// Present only when sin(theta*) <= (K_T + 1) / K.
  std::optional<double> closed_form;
};

CombinatorialBias bias_bound_combinatorial(std::size_t k, std::size_t k_t, double theta_star, double eta,
                                           double eta_star);

struct EtaBias {
  /// Before capping at zero.
  double worst_raw = 0.0;
  double average_raw = 0.0;
  double worst_case = 0.0;
  double average_case = 0.0;
  /// The same-sign assumption is consistent with the measured correction
  /// (neither raw value went negative).
  bool valid = true;
};

/// Heuristic bounds; throws DegenerateError when eta_prime or eta_bar is 0.
EtaBias bias_bound_eta(double mitigated_value, double eta, double eta_prime, double eta_bar, double delta_kt_m);

/// M + sum g (ideal - mitigated). Throws std::invalid_argument on length
/// mismatch.
double bem_combine(double mitigated_target, std::span<const double> ensemble_ideal,
                   std::span<const double> ensemble_mitigated, std::span<const double> coefficients);

struct QueppOptions {
  EtaMethod eta_method = EtaMethod::kMedian;
  /// K, the number of rotations of the target circuit.
  std::size_t num_rotations = 0;
  /// Largest |angle| among the rotations.
  double theta_star = 0.0;
  /// Order truncation of the ensemble; the combinatorial bound needs it.
  std::optional<std::size_t> k_t;
  /// Overrides the ensemble's own sum of g^2 in the variance bound.
  std::optional<double> p_kt;
};

struct QueppResult {
  double classical_part = 0.0;
  double noisy_target = 0.0;
  double noisy_target_std_error = 0.0;
  double noisy_ensemble_part = 0.0;
  double residual = 0.0;
  EtaChoice eta;
  EtaSummary etas;
  double boosted = 0.0;
  /// Shot noise of the target, of the ensemble, and of eta, propagated
  /// linearly.
  double std_error = 0.0;
  /// T / eta, the rescaled target.
  double mitigated_target = 0.0;
  /// classical_part - noisy_ensemble_part / eta.
  double delta_m = 0.0;
  VarianceBound variance;
  std::optional<CombinatorialBias> bias_combinatorial;
  std::optional<EtaBias> bias_eta;
  std::size_t ensemble_size = 0;
};

/// Throws ConsistencyError when the records and the classical part cover
/// different path sets.
QueppResult quepp_estimate(std::span<const EnsembleRecord> records, const NoisyEstimate& target_noisy,
                           const ClassicalPart& classical, const EtaChoice& eta, const QueppOptions& options = {});
QueppResult quepp_estimate(std::span<const EnsembleRecord> records, const NoisyEstimate& target_noisy,
                           const ClassicalPart& classical, const QueppOptions& options = {});

struct PrefixPoint {
  std::size_t size = 0;
  double classical = 0.0;
  double eta = 1.0;
  double estimate = 0.0;
  double std_error = 0.0;
};

/// Boosted estimate over the first m records for each m in `sizes` (every m
/// when empty), in record order.
std::vector<PrefixPoint> prefix_series(std::span<const EnsembleRecord> records, const NoisyEstimate& target_noisy,
                                       EtaMethod method, std::span<const std::size_t> sizes = {});

struct ProtocolRun {
  QueppResult result;
  std::vector<EnsembleRecord> records;
  NoisyEstimate target;
  /// Ensemble paths the backend could not run (with allow_partial).
  std::vector<std::uint64_t> skipped;
  std::vector<std::string> skipped_reasons;
};

/// Runs the target and every nonzero-expectation path circuit on `backend` in
/// one batch (target first) and combines the results. Without allow_partial a
/// failed job throws CapabilityError; with it, failed paths are dropped from
/// both halves of the estimator.
ProtocolRun run_quepp(const Circuit& circuit, const PauliString& observable, std::span<const PauliPath> ensemble,
                      const Backend& backend, const ExecutionPlan& plan, const QueppOptions& options,
                      bool allow_partial = false);

/// Largest |angle| over the rotations of `circuit`.
double max_rotation_angle(const Circuit& circuit);

}  // namespace quepp
