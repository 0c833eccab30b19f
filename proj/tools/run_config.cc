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


#include "run_config.h"

#include <fstream>
#include <sstream>

#include "quepp/errors.h"

#ifndef QUEPP_GIT_DESCRIBE
#define QUEPP_GIT_DESCRIBE "unknown"
#endif

namespace quepp::cli {

using nlohmann::json;

namespace {

std::uint64_t derive(std::uint64_t seed, std::uint64_t tag) { return seed + tag; }

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("field '") + key + "': " + e.what());
  }
}

void check_keys(const json& j, const char* where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(std::string(where) + " must be an object");
  for (const auto& [k, v] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || k == a;
    if (!ok) throw ConfigError(std::string("unknown field '") + k + "' in " + where);
  }
}

PauliString parse_pauli(const std::string& s) {
  try {
    return PauliString::parse(s);
  } catch (const std::exception& e) {
    throw ConfigError("bad Pauli '" + s + "': " + e.what());
  }
}

ExperimentSpec parse_experiment(const json& j, std::uint64_t seed) {
  check_keys(j, "experiment",
             {"family", "num_qubits", "layers", "theta", "seed", "observable", "sweep", "p_single", "p_cz", "p_rx",
              "census", "coupling"});
  ExperimentSpec s;
  try {
    s.family = parse_family(get_or<std::string>(j, "family", "mirror2d"));
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  s.num_qubits = get_or<std::size_t>(j, "num_qubits", s.num_qubits);
  s.layers = get_or<std::size_t>(j, "layers", s.layers);
  s.theta = get_or<double>(j, "theta", s.theta);
  s.seed = get_or<std::uint64_t>(j, "seed", derive(seed, 0));
  if (j.contains("observable")) s.observable = parse_pauli(j.at("observable").get<std::string>());
  s.sweep = get_or<std::vector<double>>(j, "sweep", {});
  s.p_single = get_or<double>(j, "p_single", s.p_single);
  s.p_cz = get_or<double>(j, "p_cz", s.p_cz);
  s.p_rx = get_or<double>(j, "p_rx", s.p_rx);
  if (j.contains("census")) {
    const auto& c = j.at("census");
    check_keys(c, "census", {"cz", "single", "rx"});
    s.census = ForwardCensus{get_or<std::size_t>(c, "cz", 0), get_or<std::size_t>(c, "single", 0),
                             get_or<std::size_t>(c, "rx", 0)};
  }
  s.coupling = get_or<std::string>(j, "coupling", "");
  return s;
}

json experiment_json(const ExperimentSpec& s) {
  json j = {{"family", std::string(family_name(s.family))},
            {"num_qubits", s.num_qubits},
            {"layers", s.layers},
            {"theta", s.theta},
            {"seed", s.seed},
            {"sweep", s.sweep},
            {"p_single", s.p_single},
            {"p_cz", s.p_cz},
            {"p_rx", s.p_rx},
            {"coupling", s.coupling}};
  if (s.observable) j["observable"] = s.observable->str();
  if (s.census) j["census"] = {{"cz", s.census->cz}, {"single", s.census->single}, {"rx", s.census->rx}};
  return j;
}

template <std::size_t N>
std::array<double, N> rate_array(const json& j, const char* what) {
  auto v = j.get<std::vector<double>>();
  if (v.size() != N) throw ConfigError(std::string(what) + " needs " + std::to_string(N) + " rates");
  std::array<double, N> a{};
  std::copy(v.begin(), v.end(), a.begin());
  return a;
}

NoiseConfig parse_noise(const json& j) {
  check_keys(j, "noise",
             {"model", "lambda2", "lambda1", "readout", "two_qubit", "single_qubit", "two_qubit_overrides",
              "readout_overrides"});
  NoiseConfig n;
  n.model = get_or<std::string>(j, "model", n.model);
  n.lambda2 = get_or<double>(j, "lambda2", n.lambda2);
  n.lambda1 = get_or<double>(j, "lambda1", n.lambda1);
  n.readout = get_or<double>(j, "readout", n.readout);
  if (n.model == "custom") {
    auto& m = n.custom;
    if (j.contains("two_qubit")) m.two_qubit = rate_array<15>(j.at("two_qubit"), "two_qubit");
    if (j.contains("single_qubit")) m.single_qubit = rate_array<3>(j.at("single_qubit"), "single_qubit");
    m.readout = n.readout;
    if (j.contains("two_qubit_overrides")) {
      for (const auto& e : j.at("two_qubit_overrides")) {
        const auto a = e.at("qubits").at(0).get<std::size_t>(), b = e.at("qubits").at(1).get<std::size_t>();
        m.two_qubit_overrides[{std::min(a, b), std::max(a, b)}] = rate_array<15>(e.at("rates"), "two_qubit_overrides");
      }
    }
    if (j.contains("readout_overrides"))
      for (const auto& e : j.at("readout_overrides"))
        m.readout_overrides[e.at("qubit").get<std::size_t>()] = e.at("rate").get<double>();
  } else if (n.model != "depolarizing" && n.model != "noiseless") {
    throw ConfigError("unknown noise model '" + n.model + "'");
  }
  return n;
}

json noise_json(const NoiseConfig& n) {
  json j = {{"model", n.model}, {"lambda2", n.lambda2}, {"lambda1", n.lambda1}, {"readout", n.readout}};
  if (n.model == "custom") {
    j["two_qubit"] = n.custom.two_qubit;
    j["single_qubit"] = n.custom.single_qubit;
    json ov = json::array();
    for (const auto& [k, v] : n.custom.two_qubit_overrides) ov.push_back({{"qubits", {k.first, k.second}}, {"rates", v}});
    j["two_qubit_overrides"] = ov;
    json ro = json::array();
    for (const auto& [q, r] : n.custom.readout_overrides) ro.push_back({{"qubit", q}, {"rate", r}});
    j["readout_overrides"] = ro;
  }
  return j;
}

}  // namespace

NoiseModel NoiseConfig::build() const {
  if (model == "noiseless") return NoiseModel::noiseless();
  if (model == "custom") return custom;
  return NoiseModel::depolarizing(lambda2, lambda1, readout);
}

void RunConfig::validate() const {
  if (!experiment && circuit_file.empty()) throw ConfigError("config needs an experiment or a circuit_file");
  if (experiment && !circuit_file.empty()) throw ConfigError("experiment and circuit_file are exclusive");
  if (!circuit_file.empty() && !observable) throw ConfigError("circuit_file needs an observable");
  if (truncation && sampler) throw ConfigError("truncation and sampler are exclusive");
  if (workers == 0) throw ConfigError("workers must be >= 1");
  try {
    if (sampler) sampler->validate();
    plan.validate();
    noise.build().validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
}

RunConfig parse_config(const json& j) {
  check_keys(j, "config",
             {"schema_version", "seed", "workers", "experiment", "circuit_file", "observable", "truncation", "sampler",
              "noise", "plan", "eta_method", "dense_qubit_cap", "cpt", "series_sizes", "allow_partial", "output_dir",
              "version"});
  const int version = get_or<int>(j, "schema_version", kSchemaVersion);
  if (version != kSchemaVersion)
    throw ConfigError("schema_version " + std::to_string(version) + " is not supported (expected " +
                      std::to_string(kSchemaVersion) + ")");
  RunConfig c;
  c.seed = get_or<std::uint64_t>(j, "seed", c.seed);
  c.workers = get_or<std::size_t>(j, "workers", c.workers);
  if (j.contains("experiment")) c.experiment = parse_experiment(j.at("experiment"), c.seed);
  c.circuit_file = get_or<std::string>(j, "circuit_file", "");
  if (j.contains("observable")) c.observable = parse_pauli(j.at("observable").get<std::string>());

  if (j.contains("truncation")) {
    const auto& t = j.at("truncation");
    check_keys(t, "truncation", {"mode", "max_order", "epsilon"});
    const auto mode = get_or<std::string>(t, "mode", "order");
    const auto k = get_or<std::size_t>(t, "max_order", 2);
    const double eps = get_or<double>(t, "epsilon", 0.0);
    try {
      if (mode == "order") c.truncation = TruncationPolicy::order(k);
      else if (mode == "coefficient") c.truncation = TruncationPolicy::coefficient(eps);
      else if (mode == "hybrid") c.truncation = TruncationPolicy::hybrid(k, eps);
      else if (mode == "unbounded") c.truncation = TruncationPolicy::unbounded();
      else throw ConfigError("unknown truncation mode '" + mode + "'");
    } catch (const PreconditionError& e) {
      throw ConfigError(e.what());
    }
  }
  if (j.contains("sampler")) {
    const auto& s = j.at("sampler");
    check_keys(s, "sampler", {"target_unique_paths", "max_attempts", "distribution", "rng_seed"});
    SamplerConfig sc;
    sc.target_unique_paths = get_or<std::size_t>(s, "target_unique_paths", 100);
    sc.max_attempts = get_or<std::size_t>(s, "max_attempts", 100 * sc.target_unique_paths);
    try {
      sc.distribution = parse_distribution(get_or<std::string>(s, "distribution", "d_tilde"));
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
    sc.rng_seed = get_or<std::uint64_t>(s, "rng_seed", derive(c.seed, 1));
    c.sampler = sc;
  }
  if (!c.truncation && !c.sampler) c.truncation = TruncationPolicy::order(2);

  if (j.contains("noise")) c.noise = parse_noise(j.at("noise"));
  if (j.contains("plan")) {
    const auto& p = j.at("plan");
    check_keys(p, "plan", {"num_twirls", "shots_per_twirl", "seed", "interleave", "infinite_shots"});
    c.plan.num_twirls = get_or<std::size_t>(p, "num_twirls", c.plan.num_twirls);
    c.plan.shots_per_twirl = get_or<std::size_t>(p, "shots_per_twirl", c.plan.shots_per_twirl);
    c.plan.seed = get_or<std::uint64_t>(p, "seed", derive(c.seed, 2));
    c.plan.interleave = get_or<bool>(p, "interleave", c.plan.interleave);
    c.plan.infinite_shots = get_or<bool>(p, "infinite_shots", c.plan.infinite_shots);
  } else {
    c.plan.seed = derive(c.seed, 2);
  }
  try {
    c.eta_method = parse_eta_method(get_or<std::string>(j, "eta_method", "median"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  c.dense_qubit_cap = get_or<std::size_t>(j, "dense_qubit_cap", c.dense_qubit_cap);
  if (j.contains("cpt")) {
    const auto& s = j.at("cpt");
    check_keys(s, "cpt", {"max_order", "max_terms", "epsilon"});
    c.cpt.max_order = get_or<std::size_t>(s, "max_order", c.cpt.max_order);
    c.cpt.max_terms = get_or<std::vector<std::size_t>>(s, "max_terms", c.cpt.max_terms);
    c.cpt.epsilon = get_or<double>(s, "epsilon", c.cpt.epsilon);
  }
  c.series_sizes = get_or<std::vector<std::size_t>>(j, "series_sizes", {});
  c.allow_partial = get_or<bool>(j, "allow_partial", false);
  c.output_dir = get_or<std::string>(j, "output_dir", "");
  c.validate();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + path + "': " + e.what());
  }
  // Result files embed their config; accept them directly.
  if (j.contains("config") && j.at("config").is_object()) j = j.at("config");
  return parse_config(j);
}

json to_json(const RunConfig& c) {
  json j = {{"schema_version", kSchemaVersion}, {"seed", c.seed}, {"workers", c.workers}};
  if (c.experiment) j["experiment"] = experiment_json(*c.experiment);
  if (!c.circuit_file.empty()) j["circuit_file"] = c.circuit_file;
  if (c.observable) j["observable"] = c.observable->str();
  if (c.truncation) {
    j["truncation"] = {{"mode", truncation_mode_name(c.truncation->mode)}, {"epsilon", c.truncation->epsilon}};
    if (c.truncation->has_order_limit()) j["truncation"]["max_order"] = c.truncation->max_order;
  }
  if (c.sampler)
    j["sampler"] = {{"target_unique_paths", c.sampler->target_unique_paths},
                    {"max_attempts", c.sampler->max_attempts},
                    {"distribution", distribution_name(c.sampler->distribution)},
                    {"rng_seed", c.sampler->rng_seed}};
  j["noise"] = noise_json(c.noise);
  j["plan"] = {{"num_twirls", c.plan.num_twirls},
               {"shots_per_twirl", c.plan.shots_per_twirl},
               {"seed", c.plan.seed},
               {"interleave", c.plan.interleave},
               {"infinite_shots", c.plan.infinite_shots}};
  j["eta_method"] = eta_method_name(c.eta_method);
  j["dense_qubit_cap"] = c.dense_qubit_cap;
  j["cpt"] = {{"max_order", c.cpt.max_order}, {"max_terms", c.cpt.max_terms}, {"epsilon", c.cpt.epsilon}};
  j["series_sizes"] = c.series_sizes;
  j["allow_partial"] = c.allow_partial;
  j["output_dir"] = c.output_dir;
  return j;
}

void reseed(RunConfig& c, std::uint64_t seed) {
  c.seed = seed;
  if (c.experiment) c.experiment->seed = derive(seed, 0);
  if (c.sampler) c.sampler->rng_seed = derive(seed, 1);
  c.plan.seed = derive(seed, 2);
}

std::string version_string() { return QUEPP_GIT_DESCRIBE; }

}  // namespace quepp::cli
