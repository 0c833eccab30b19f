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


#include "quepp/pipeline.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "quepp/clifford_eval.h"
#include "quepp/errors.h"

namespace quepp {

namespace {

std::vector<double> sorted_etas(std::span<const EnsembleRecord> records) {
  std::vector<double> v;
  v.reserve(records.size());
  for (const auto& r : records) v.push_back(r.eta);
  std::sort(v.begin(), v.end());
  return v;
}

double eta_variance(const EnsembleRecord& r) {
  const double s = r.noisy.std_error / r.ideal;
  return s * s;
}

// Variance of the chosen eta. The records are treated as a sample from the
// ensemble's eta distribution, so the spread of the eta_i (shot noise and
// genuine circuit-to-circuit variation together) sets the uncertainty. A
// single record only has its own shot noise.
double choice_variance(std::span<const EnsembleRecord> records, const EtaChoice& choice) {
  if (choice.empty || records.empty()) return 0.0;
  const std::size_t m = records.size();
  if (choice.method == EtaMethod::kWeightedAverage && !choice.fell_back) {
    double den = 0.0;
    for (const auto& r : records) den += r.path.coeff.value * r.ideal;
    double v = 0.0;
    for (const auto& r : records) {
      const double w = r.path.coeff.value * r.ideal;
      const double dev = r.eta - choice.value;
      v += w * w * (dev * dev + eta_variance(r));
    }
    return v / (den * den);
  }
  if (m == 1) return eta_variance(records[0]);
  double mean = 0.0;
  for (const auto& r : records) mean += r.eta;
  mean /= static_cast<double>(m);
  double ss = 0.0;
  for (const auto& r : records) ss += (r.eta - mean) * (r.eta - mean);
  const double s2 = ss / static_cast<double>(m - 1);
  // Asymptotic variance of a sample median.
  return std::numbers::pi / 2.0 * s2 / static_cast<double>(m);
}

double log_binomial(std::size_t n, std::size_t k) {
  return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

}  // namespace

std::string eta_method_name(EtaMethod m) {
  switch (m) {
    case EtaMethod::kMedian: return "median";
    case EtaMethod::kWeightedAverage: return "weighted_average";
    case EtaMethod::kBalance: return "balance";
  }
  return "unknown";
}

EtaMethod parse_eta_method(const std::string& name) {
  if (name == "median") return EtaMethod::kMedian;
  if (name == "weighted_average") return EtaMethod::kWeightedAverage;
  if (name == "balance") return EtaMethod::kBalance;
  throw std::invalid_argument("unknown eta method '" + name + "'");
}

EnsembleRecord make_record(PauliPath path, const NoisyEstimate& noisy) {
  if (path.ideal_expectation == 0) throw PreconditionError("ensemble record with zero ideal expectation");
  if (!std::isfinite(noisy.mean)) throw PreconditionError("non-finite noisy expectation");
  EnsembleRecord r;
  r.ideal = path.ideal_expectation;
  r.path = std::move(path);
  r.noisy = noisy;
  r.eta = noisy.mean / r.ideal;
  r.out_of_range = std::abs(r.eta) > 1.0;
  return r;
}

double eta_median(std::span<const EnsembleRecord> records) {
  if (records.empty()) throw std::invalid_argument("eta_median of an empty sample");
  const auto v = sorted_etas(records);
  const std::size_t m = v.size();
  if (m % 2 == 1) return v[m / 2];
  return 0.5 * (v[m / 2 - 1] + v[m / 2]);
}

double eta_weighted_average(std::span<const EnsembleRecord> records) {
  if (records.empty()) throw DegenerateError("weighted average of an empty sample");
  double num = 0.0, den = 0.0, scale = 0.0;
  for (const auto& r : records) {
    const double g = r.path.coeff.value;
    num += g * r.noisy.mean;
    den += g * r.ideal;
    scale += std::abs(g);
  }
  if (std::abs(den) <= 1e-12 * scale) throw DegenerateError("weighted average denominator vanishes");
  const double eta = num / den;
  if (!std::isfinite(eta) || eta == 0.0) throw DegenerateError("weighted average is zero or not finite");
  return eta;
}

double eta_balance(std::span<const EnsembleRecord> records) {
  if (records.empty()) throw std::invalid_argument("eta_balance of an empty sample");
  const auto v = sorted_etas(records);
  const std::size_t m = v.size();
  std::vector<double> prefix(m + 1, 0.0);
  for (std::size_t i = 0; i < m; ++i) prefix[i + 1] = prefix[i] + v[i];

  // f(c) = sum |c - eta_i| / |c|. On each gap between sample points f is
  // monotone, so its minimum over c != 0 sits on a sample point.
  double best = std::numeric_limits<double>::infinity();
  double best_c = 0.0;
  bool found = false;
  for (std::size_t i = 0; i < m; ++i) {
    const double c = v[i];
    if (c == 0.0) continue;
    const auto lo = static_cast<std::size_t>(std::lower_bound(v.begin(), v.end(), c) - v.begin());
    const auto hi = static_cast<std::size_t>(std::upper_bound(v.begin(), v.end(), c) - v.begin());
    const double below = c * static_cast<double>(lo) - prefix[lo];
    const double above = (prefix[m] - prefix[hi]) - c * static_cast<double>(m - hi);
    const double f = (below + above) / std::abs(c);
    const double tol = 1e-12 * std::max(1.0, std::abs(f));
    if (!found || f < best - tol || (f <= best + tol && c > best_c)) {
      best = std::min(best, f);
      best_c = c;
      found = true;
    }
  }
  if (!found) throw DegenerateError("every eta sample is zero");
  return best_c;
}

EtaChoice choose_eta(std::span<const EnsembleRecord> records, EtaMethod method) {
  EtaChoice c;
  c.method = method;
  if (records.empty()) {
    c.empty = true;
    c.value = 1.0;
    return c;
  }
  switch (method) {
    case EtaMethod::kMedian: c.value = eta_median(records); break;
    case EtaMethod::kBalance: c.value = eta_balance(records); break;
    case EtaMethod::kWeightedAverage:
      try {
        c.value = eta_weighted_average(records);
      } catch (const DegenerateError&) {
        c.value = eta_median(records);
        c.fell_back = true;
      }
      break;
  }
  if (c.value == 0.0 || !std::isfinite(c.value)) throw DegenerateError("chosen eta is zero or not finite");
  return c;
}

EtaSummary summarize_etas(std::span<const EnsembleRecord> records) {
  EtaSummary s;
  s.count = records.size();
  if (records.empty()) return s;
  s.median = eta_median(records);
  try {
    s.weighted_average = eta_weighted_average(records);
  } catch (const DegenerateError&) {
  }
  try {
    s.balance = eta_balance(records);
  } catch (const DegenerateError&) {
  }
  const auto v = sorted_etas(records);
  s.min = v.front();
  s.max = v.back();
  double sum = 0.0;
  for (const auto& r : records) {
    sum += r.eta;
    if (r.out_of_range) ++s.out_of_range;
  }
  s.mean = sum / static_cast<double>(records.size());
  return s;
}

double eta_star(std::span<const EnsembleRecord> records, double eta) {
  if (records.empty()) return eta;
  double best = -1.0, arg = eta;
  for (const auto& r : records) {
    const double d = std::abs(1.0 - r.eta / eta);
    if (d > best) {
      best = d;
      arg = r.eta;
    }
  }
  return arg;
}

double eta_prime(std::span<const EnsembleRecord> records, double eta) {
  if (records.empty()) return eta;
  double best = -1.0, arg = eta;
  for (const auto& r : records) {
    if (r.eta == 0.0) return 0.0;
    const double d = std::abs(1.0 - eta / r.eta);
    if (d > best) {
      best = d;
      arg = r.eta;
    }
  }
  return arg;
}

ClassicalPart make_classical_part(std::span<const PauliPath> paths) {
  ClassicalPart c;
  c.value = classical_cpt_estimate(paths);
  c.power = coefficient_power(paths);
  for (const auto& p : paths)
    if (p.ideal_expectation != 0) c.path_ids.push_back(p.path_id);
  std::sort(c.path_ids.begin(), c.path_ids.end());
  return c;
}

VarianceBound variance_bound(std::span<const EnsembleRecord> records, double eta, std::size_t shots,
                             std::optional<double> p_kt) {
  if (eta == 0.0) throw PreconditionError("variance bound needs eta != 0");
  VarianceBound v;
  v.gamma = 1.0 / (eta * eta);
  v.shots = shots;
  if (p_kt) {
    v.p_kt = *p_kt;
  } else {
    for (const auto& r : records) v.p_kt += r.path.coeff.value * r.path.coeff.value;
  }
  if (shots == 0) return v;
  const double n = static_cast<double>(shots);
  v.bound = v.gamma * v.p_kt / n;
  double exact = 0.0;
  for (const auto& r : records) {
    const double g = r.path.coeff.value;
    exact += g * g * (1.0 - r.eta * r.eta);
  }
  v.exact = exact / (eta * eta * n);
  return v;
}

CombinatorialBias bias_bound_combinatorial(std::size_t k, std::size_t k_t, double theta_star, double eta,
                                           double eta_star) {
  if (eta == 0.0) throw PreconditionError("bias bound needs eta != 0");
  CombinatorialBias b;
  const double factor = std::abs(1.0 - eta_star / eta);
  const double s = std::abs(std::sin(theta_star));
  if (k_t < k && s > 0.0) {
    // Terms in log space; K of a few hundred overflows C(K, k) otherwise.
    std::vector<double> logs;
    for (std::size_t j = k_t + 1; j <= k; ++j) logs.push_back(log_binomial(k, j) + static_cast<double>(j) * std::log(s));
    const double top = *std::max_element(logs.begin(), logs.end());
    double acc = 0.0;
    for (double l : logs) acc += std::exp(l - top);
    b.exact_sum = factor * std::exp(top) * acc;
  }
  const double m = static_cast<double>(k_t + 1);
  if (k == 0 || s <= m / static_cast<double>(k)) {
    b.closed_form = factor * std::pow(std::exp(1.0) * static_cast<double>(k) * s / m, m);
    if (*b.closed_form < b.exact_sum * (1.0 - 1e-12))
      throw InternalError("closed-form bias bound below the binomial sum");
  }
  return b;
}

EtaBias bias_bound_eta(double mitigated_value, double eta, double eta_prime, double eta_bar, double delta_kt_m) {
  if (eta_prime == 0.0) throw DegenerateError("eta' is zero");
  if (eta_bar == 0.0) throw DegenerateError("mean eta is zero");
  EtaBias b;
  const double m = std::abs(mitigated_value);
  const double d = std::abs(delta_kt_m);
  b.worst_raw = std::abs(eta / eta_prime - 1.0) * m - d;
  b.average_raw = std::abs(eta / eta_bar - 1.0) * m - d;
  b.worst_case = std::max(0.0, b.worst_raw);
  b.average_case = std::max(0.0, b.average_raw);
  b.valid = b.worst_raw >= 0.0 && b.average_raw >= 0.0;
  return b;
}

double bem_combine(double mitigated_target, std::span<const double> ensemble_ideal,
                   std::span<const double> ensemble_mitigated, std::span<const double> coefficients) {
  if (ensemble_ideal.size() != ensemble_mitigated.size() || ensemble_ideal.size() != coefficients.size())
    throw std::invalid_argument("bem_combine: list lengths differ");
  double corr = 0.0;
  for (std::size_t i = 0; i < coefficients.size(); ++i)
    corr += coefficients[i] * (ensemble_ideal[i] - ensemble_mitigated[i]);
  return mitigated_target + corr;
}

QueppResult quepp_estimate(std::span<const EnsembleRecord> records, const NoisyEstimate& target_noisy,
                           const ClassicalPart& classical, const EtaChoice& eta, const QueppOptions& options) {
  if (eta.value == 0.0 || !std::isfinite(eta.value)) throw PreconditionError("eta must be finite and nonzero");
  {
    std::vector<std::uint64_t> ids;
    ids.reserve(records.size());
    for (const auto& r : records) ids.push_back(r.path.path_id);
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
      throw ConsistencyError("ensemble contains a path twice");
    if (ids != classical.path_ids) throw ConsistencyError("classical and noisy ensembles cover different paths");
  }

  QueppResult res;
  res.ensemble_size = records.size();
  res.classical_part = classical.value;
  res.noisy_target = target_noisy.mean;
  res.noisy_target_std_error = target_noisy.std_error;
  res.eta = eta;
  res.etas = summarize_etas(records);

  double ens = 0.0, ens_var = 0.0;
  for (const auto& r : records) {
    const double g = r.path.coeff.value;
    ens += g * r.noisy.mean;
    ens_var += g * g * r.noisy.std_error * r.noisy.std_error;
  }
  const double h = eta.value;
  res.noisy_ensemble_part = ens;
  res.residual = target_noisy.mean - ens;
  res.boosted = res.classical_part + res.residual / h;
  res.mitigated_target = target_noisy.mean / h;
  res.delta_m = res.classical_part - ens / h;

  const double var_eta = choice_variance(records, eta);
  const double lin = res.residual / (h * h);
  res.std_error = std::sqrt((target_noisy.std_error * target_noisy.std_error + ens_var) / (h * h) + lin * lin * var_eta);

  // Rescaling mitigation is one instance of the generic combine.
  {
    std::vector<double> ideal, mitigated, coeffs;
    double direct = 0.0;
    for (const auto& r : records) {
      ideal.push_back(r.ideal);
      mitigated.push_back(r.noisy.mean / h);
      coeffs.push_back(r.path.coeff.value);
      direct += r.path.coeff.value * r.ideal;
    }
    const double bem = bem_combine(res.mitigated_target, ideal, mitigated, coeffs);
    const double expect = direct + res.residual / h;
    if (std::abs(bem - expect) > 1e-9 * (1.0 + std::abs(expect)))
      throw InternalError("boosted value disagrees with the generic combine");
  }

  const std::size_t shots = target_noisy.total_shots;
  res.variance = variance_bound(records, h, shots, options.p_kt ? options.p_kt : std::optional<double>(classical.power));

  if (options.k_t && !records.empty()) {
    const double es = eta_star(records, h);
    res.bias_combinatorial = bias_bound_combinatorial(options.num_rotations, *options.k_t, options.theta_star, h, es);
  }
  if (!records.empty() && res.etas.mean) {
    try {
      res.bias_eta = bias_bound_eta(res.mitigated_target, h, eta_prime(records, h), *res.etas.mean, res.delta_m);
    } catch (const DegenerateError&) {
    }
  }
  return res;
}

QueppResult quepp_estimate(std::span<const EnsembleRecord> records, const NoisyEstimate& target_noisy,
                           const ClassicalPart& classical, const QueppOptions& options) {
  return quepp_estimate(records, target_noisy, classical, choose_eta(records, options.eta_method), options);
}

std::vector<PrefixPoint> prefix_series(std::span<const EnsembleRecord> records, const NoisyEstimate& target_noisy,
                                       EtaMethod method, std::span<const std::size_t> sizes) {
  std::vector<std::size_t> ms(sizes.begin(), sizes.end());
  if (ms.empty()) {
    ms.resize(records.size());
    std::iota(ms.begin(), ms.end(), std::size_t{1});
  }
  std::vector<PrefixPoint> out;
  for (std::size_t m : ms) {
    if (m > records.size()) throw std::invalid_argument("prefix size exceeds the ensemble");
    const auto head = records.first(m);
    const EtaChoice eta = choose_eta(head, method);
    double cl = 0.0, ens = 0.0, ens_var = 0.0;
    for (const auto& r : head) {
      const double g = r.path.coeff.value;
      cl += g * r.ideal;
      ens += g * r.noisy.mean;
      ens_var += g * g * r.noisy.std_error * r.noisy.std_error;
    }
    PrefixPoint p;
    p.size = m;
    p.classical = cl;
    p.eta = eta.value;
    const double residual = target_noisy.mean - ens;
    p.estimate = cl + residual / eta.value;
    const double lin = residual / (eta.value * eta.value);
    p.std_error = std::sqrt((target_noisy.std_error * target_noisy.std_error + ens_var) / (eta.value * eta.value) +
                            lin * lin * choice_variance(head, eta));
    out.push_back(p);
  }
  return out;
}

ProtocolRun run_quepp(const Circuit& circuit, const PauliString& observable, std::span<const PauliPath> ensemble,
                      const Backend& backend, const ExecutionPlan& plan, const QueppOptions& options,
                      bool allow_partial) {
  std::vector<const PauliPath*> live;
  for (const auto& p : ensemble)
    if (p.ideal_expectation != 0) live.push_back(&p);

  std::vector<Job> jobs;
  jobs.reserve(live.size() + 1);
  jobs.push_back({circuit, observable});
  for (const auto* p : live) jobs.push_back({materialize_path_circuit(circuit, p->branches), observable});
  const auto results = backend.submit_batch(jobs, plan);
  if (results.size() != jobs.size()) throw InternalError("backend returned the wrong number of results");

  ProtocolRun run;
  if (!results[0].ok()) throw CapabilityError("target circuit: " + results[0].error);
  run.target = *results[0].estimate;

  std::vector<PauliPath> kept;
  for (std::size_t i = 0; i < live.size(); ++i) {
    const auto& r = results[i + 1];
    if (!r.ok()) {
      if (!allow_partial) throw CapabilityError("path " + live[i]->id_string() + ": " + r.error);
      run.skipped.push_back(live[i]->path_id);
      run.skipped_reasons.push_back(r.error);
      continue;
    }
    run.records.push_back(make_record(*live[i], *r.estimate));
    kept.push_back(*live[i]);
  }
  ClassicalPart classical = make_classical_part(kept);
  QueppOptions opts = options;
  if (opts.num_rotations == 0) opts.num_rotations = circuit.rotation_count();
  if (opts.theta_star == 0.0) opts.theta_star = max_rotation_angle(circuit);
  run.result = quepp_estimate(run.records, run.target, classical, opts);
  return run;
}

double max_rotation_angle(const Circuit& circuit) {
  double t = 0.0;
  for (std::size_t j = 1; j <= circuit.rotation_count(); ++j) t = std::max(t, std::abs(circuit.rotation(j).angle));
  return t;
}

}  // namespace quepp
