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


#include "commands.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include "quepp/circuit_text.h"
#include "quepp/errors.h"
#include "quepp/statevector.h"

namespace quepp::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// Dense ideal values are reported up to this size.
constexpr std::size_t kIdealQubitCap = 20;

struct Instance {
  std::optional<double> theta;
  Circuit raw;
  Circuit circuit;
  PauliString observable;
};

std::vector<Instance> instances(const RunConfig& c) {
  std::vector<Instance> out;
  if (c.experiment) {
    auto spec = *c.experiment;
    const auto obs = c.observable ? *c.observable : default_observable(spec);
    std::vector<std::optional<double>> thetas;
    if (spec.sweep.empty()) thetas.push_back(std::nullopt);
    for (double t : spec.sweep) thetas.push_back(t);
    for (const auto& t : thetas) {
      if (t) spec.theta = *t;
      Instance in{t, generate_circuit(spec), {}, obs};
      in.circuit = normalize_rotations(in.raw);
      out.push_back(std::move(in));
    }
    return out;
  }
  std::ifstream f(c.circuit_file);
  if (!f) throw ConfigError("cannot open circuit file '" + c.circuit_file + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  Instance in{std::nullopt, parse_circuit(ss.str()), {}, *c.observable};
  if (in.observable.num_qubits() != in.raw.num_qubits()) throw ConfigError("observable size differs from the circuit");
  in.circuit = normalize_rotations(in.raw);
  out.push_back(std::move(in));
  return out;
}

std::optional<double> ideal_of(const Instance& in) {
  if (in.circuit.num_qubits() > kIdealQubitCap) return std::nullopt;
  return statevector_expectation(in.circuit, in.observable);
}

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json envelope(const Context& ctx, const char* command) {
  return {{"schema_version", kSchemaVersion},
          {"command", command},
          {"version", version_string()},
          {"config", to_json(ctx.config)}};
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + p.string() + "'");
  f << text;
}

void write_json(const fs::path& p, const json& j) { write_text(p, j.dump(2) + "\n"); }

std::string csv_header(const Context& ctx) {
  return "# version: " + version_string() + "\n# config: " + to_json(ctx.config).dump() + "\n";
}

std::string num(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

std::string num(const std::optional<double>& v) { return v ? num(*v) : std::string("nan"); }

json census_json(const Circuit& c) {
  json j = json::object();
  for (const auto& [k, v] : c.census()) j[k] = v;
  return j;
}

json path_json(const PauliPath& p) {
  return {{"path_id", p.id_string()},
          {"order", p.coeff.order},
          {"coefficient", p.coeff.value},
          {"sin_indices", p.coeff.sin_indices},
          {"frame", p.frame.str()},
          {"ideal_expectation", p.ideal_expectation}};
}

struct Ensemble {
  std::vector<PauliPath> paths;
  std::optional<std::size_t> k_t;
  double power = 0.0;
  json report;
};

Ensemble build(const RunConfig& c, const Instance& in) {
  Ensemble e;
  if (c.sampler) {
    auto sc = *c.sampler;
    sc.workers = c.workers;
    auto s = build_ensemble(in.circuit, in.observable, sc);
    e.paths = std::move(s.paths);
    e.power = coefficient_power(e.paths);
    e.report = {{"kind", "sampler"},
                {"attempts", s.report.attempts},
                {"accepted", s.report.accepted},
                {"unique", s.report.unique},
                {"aborted", s.report.aborted},
                {"zero_expectation", s.report.zero_expectation},
                {"saturated", s.report.saturated}};
    return e;
  }
  const auto& t = *c.truncation;
  auto en = enumerate_paths(in.circuit, in.observable, t, false, c.workers);
  // Lower orders first so prefixes of the series are meaningful.
  std::stable_sort(en.paths.begin(), en.paths.end(),
                   [](const PauliPath& a, const PauliPath& b) { return a.coeff.order < b.coeff.order; });
  e.paths = std::move(en.paths);
  if (t.mode == TruncationPolicy::Mode::kOrder) e.k_t = std::min(t.max_order, in.circuit.rotation_count());
  e.power = en.stats.coefficient_power;
  e.report = {{"kind", "enumeration"},
              {"mode", truncation_mode_name(t.mode)},
              {"completed", en.stats.completed},
              {"emitted", en.stats.emitted},
              {"zero_expectation", en.stats.zero_expectation},
              {"pruned_order", en.stats.pruned_order},
              {"pruned_coefficient", en.stats.pruned_coefficient},
              {"coefficient_power", en.stats.coefficient_power}};
  return e;
}

}  // namespace

json result_json(const QueppResult& r) {
  json j = {{"classical_part", r.classical_part},
            {"noisy_target", r.noisy_target},
            {"noisy_target_std_error", r.noisy_target_std_error},
            {"noisy_ensemble_part", r.noisy_ensemble_part},
            {"residual", r.residual},
            {"boosted", r.boosted},
            {"std_error", r.std_error},
            {"mitigated_target", r.mitigated_target},
            {"delta_m", r.delta_m},
            {"ensemble_size", r.ensemble_size}};
  j["eta"] = {{"method", eta_method_name(r.eta.method)},
              {"value", r.eta.value},
              {"fell_back", r.eta.fell_back},
              {"empty", r.eta.empty},
              {"median", opt(r.etas.median)},
              {"weighted_average", opt(r.etas.weighted_average)},
              {"balance", opt(r.etas.balance)},
              {"mean", opt(r.etas.mean)},
              {"min", opt(r.etas.min)},
              {"max", opt(r.etas.max)},
              {"out_of_range", r.etas.out_of_range}};
  j["variance"] = {{"gamma", r.variance.gamma},
                   {"p_kt", r.variance.p_kt},
                   {"shots", r.variance.shots},
                   {"bound", r.variance.bound},
                   {"exact", r.variance.exact}};
  if (r.bias_combinatorial)
    j["bias_combinatorial"] = {{"exact_sum", r.bias_combinatorial->exact_sum},
                               {"closed_form", opt(r.bias_combinatorial->closed_form)}};
  else
    j["bias_combinatorial"] = nullptr;
  if (r.bias_eta)
    j["bias_eta"] = {{"worst_case", r.bias_eta->worst_case},
                     {"average_case", r.bias_eta->average_case},
                     {"worst_raw", r.bias_eta->worst_raw},
                     {"average_raw", r.bias_eta->average_raw},
                     {"valid", r.bias_eta->valid}};
  else
    j["bias_eta"] = nullptr;
  return j;
}

void cmd_generate(const Context& ctx) {
  fs::create_directories(ctx.out);
  json manifest = envelope(ctx, "generate");
  json circuits = json::array();
  const auto all = instances(ctx.config);
  for (std::size_t i = 0; i < all.size(); ++i) {
    const auto& in = all[i];
    const std::string name = all.size() == 1 ? "circuit.txt" : "circuit_" + std::to_string(i) + ".txt";
    write_text(ctx.out / name, csv_header(ctx) + serialize_circuit(in.raw));
    std::vector<double> thetas;
    for (std::size_t j = 1; j <= in.raw.rotation_count(); ++j) thetas.push_back(in.raw.rotation(j).angle);
    circuits.push_back({{"file", name},
                        {"theta", opt(in.theta)},
                        {"num_qubits", in.raw.num_qubits()},
                        {"num_ops", in.raw.size()},
                        {"census", census_json(in.raw)},
                        {"K", in.raw.rotation_count()},
                        {"K_normalized", in.circuit.rotation_count()},
                        {"thetas", thetas},
                        {"observable", in.observable.str()}});
  }
  manifest["circuits"] = circuits;
  write_json(ctx.out / "manifest.json", manifest);
}

void cmd_cpt(const Context& ctx) {
  fs::create_directories(ctx.out);
  const auto& c = ctx.config;
  json doc = envelope(ctx, "cpt");
  json runs = json::array();
  std::string orders_csv = csv_header(ctx) + "theta,K_T,paths,p_kt,estimate,ideal\n";
  std::string terms_csv = csv_header(ctx) + "theta,max_terms,peak_terms,final_terms,estimate,ideal,status\n";
  for (const auto& in : instances(c)) {
    const auto ideal = ideal_of(in);
    const std::size_t k = in.circuit.rotation_count();
    const std::size_t top = std::min(c.cpt.max_order, k);
    auto en = enumerate_paths(in.circuit, in.observable, TruncationPolicy::order(top), true, c.workers);
    json orders = json::array();
    for (std::size_t kt = 0; kt <= top; ++kt) {
      std::vector<PauliPath> sub;
      for (const auto& p : en.paths)
        if (p.coeff.order <= kt) sub.push_back(p);
      const double est = classical_cpt_estimate(sub);
      const double pw = coefficient_power(sub);
      orders.push_back({{"K_T", kt}, {"paths", sub.size()}, {"p_kt", pw}, {"estimate", est}});
      orders_csv += num(in.theta) + "," + std::to_string(kt) + "," + std::to_string(sub.size()) + "," + num(pw) + "," +
                    num(est) + "," + num(ideal) + "\n";
    }
    json terms = json::array();
    for (std::size_t cap : c.cpt.max_terms) {
      try {
        const auto m = merged_bfs_cpt(in.circuit, in.observable, cap, c.cpt.epsilon);
        terms.push_back({{"max_terms", cap},
                         {"peak_terms", m.peak_terms},
                         {"final_terms", m.final_terms},
                         {"estimate", m.estimate},
                         {"status", "ok"}});
        terms_csv += num(in.theta) + "," + std::to_string(cap) + "," + std::to_string(m.peak_terms) + "," +
                     std::to_string(m.final_terms) + "," + num(m.estimate) + "," + num(ideal) + ",ok\n";
      } catch (const std::bad_alloc&) {
        terms.push_back({{"max_terms", cap}, {"status", "capped"}});
        terms_csv += num(in.theta) + "," + std::to_string(cap) + ",,,,," + num(ideal) + ",capped\n";
      }
    }
    runs.push_back({{"theta", opt(in.theta)},
                    {"K", k},
                    {"ideal", opt(ideal)},
                    {"observable", in.observable.str()},
                    {"orders", orders},
                    {"terms", terms}});
  }
  doc["runs"] = runs;
  write_json(ctx.out / "cpt.json", doc);
  write_text(ctx.out / "cpt_orders.csv", orders_csv);
  write_text(ctx.out / "cpt_terms.csv", terms_csv);
}

void cmd_sample(const Context& ctx) {
  fs::create_directories(ctx.out);
  const auto all = instances(ctx.config);
  json doc = envelope(ctx, "sample");
  json reports = json::array();
  for (std::size_t i = 0; i < all.size(); ++i) {
    const auto e = build(ctx.config, all[i]);
    const std::string name = all.size() == 1 ? "ensemble.jsonl" : "ensemble_" + std::to_string(i) + ".jsonl";
    json head = envelope(ctx, "sample");
    head["record"] = "header";
    head["theta"] = opt(all[i].theta);
    head["report"] = e.report;
    std::string text = head.dump() + "\n";
    for (const auto& p : e.paths) text += path_json(p).dump() + "\n";
    write_text(ctx.out / name, text);
    json r = e.report;
    r["file"] = name;
    r["theta"] = opt(all[i].theta);
    r["paths"] = e.paths.size();
    r["coefficient_power"] = e.power;
    r["classical_estimate"] = classical_cpt_estimate(e.paths);
    reports.push_back(r);
  }
  doc["ensembles"] = reports;
  write_json(ctx.out / "sample.json", doc);
}

void cmd_quepp(const Context& ctx) {
  fs::create_directories(ctx.out);
  const auto& c = ctx.config;
  SimulatorOptions so;
  so.dense_qubit_cap = c.dense_qubit_cap;
  so.workers = c.workers;
  SimulatorBackend backend(c.noise.build(), so);

  json doc = envelope(ctx, "quepp");
  doc["backend"] = backend.name();
  json runs = json::array();
  std::string series_csv = csv_header(ctx) + "theta,ensemble_size,classical,eta,estimate,std_error\n";
  std::string sweep_csv = csv_header(ctx) + "theta,ideal,cpt,unmitigated,quepp,std_error\n";
  const auto all = instances(c);
  for (std::size_t i = 0; i < all.size(); ++i) {
    const auto& in = all[i];
    const auto e = build(c, in);
    ExecutionPlan plan = c.plan;
    plan.seed = c.plan.seed + i;
    QueppOptions qo;
    qo.eta_method = c.eta_method;
    qo.k_t = e.k_t;
    qo.p_kt = e.power;
    const auto run = run_quepp(in.circuit, in.observable, e.paths, backend, plan, qo, c.allow_partial);
    const auto& r = run.result;
    const auto ideal = ideal_of(in);

    const auto series = prefix_series(run.records, run.target, c.eta_method, c.series_sizes);
    json sj = json::array();
    for (const auto& p : series) {
      sj.push_back({{"size", p.size},
                    {"classical", p.classical},
                    {"eta", p.eta},
                    {"estimate", p.estimate},
                    {"std_error", p.std_error}});
      series_csv += num(in.theta) + "," + std::to_string(p.size) + "," + num(p.classical) + "," + num(p.eta) + "," +
                    num(p.estimate) + "," + num(p.std_error) + "\n";
    }
    json records = json::array();
    for (const auto& rec : run.records) {
      json pj = path_json(rec.path);
      pj["noisy"] = rec.noisy.mean;
      pj["noisy_std_error"] = rec.noisy.std_error;
      pj["shots"] = rec.noisy.total_shots;
      pj["eta"] = rec.eta;
      pj["out_of_range"] = rec.out_of_range;
      records.push_back(pj);
    }
    json skipped = json::array();
    for (std::size_t s = 0; s < run.skipped.size(); ++s)
      skipped.push_back({{"path_id", format_path_id(run.skipped[s])}, {"reason", run.skipped_reasons[s]}});

    json rj = {{"theta", opt(in.theta)},
               {"observable", in.observable.str()},
               {"K", in.circuit.rotation_count()},
               {"K_T", e.k_t ? json(*e.k_t) : json(nullptr)},
               {"ideal", opt(ideal)},
               {"ensemble", e.report},
               {"result", result_json(r)},
               {"records", records},
               {"skipped", skipped},
               {"series", sj}};
    if (ideal && backend.noise().is_noiseless())
      rj["noiseless_check"] = std::abs(r.boosted - *ideal) <= std::max(3.0 * r.std_error, 1e-9) ? "PASS" : "FAIL";
    runs.push_back(rj);
    sweep_csv += num(in.theta) + "," + num(ideal) + "," + num(r.classical_part) + "," + num(r.noisy_target) + "," +
                 num(r.boosted) + "," + num(r.std_error) + "\n";
  }
  doc["runs"] = runs;
  write_json(ctx.out / "quepp.json", doc);
  write_text(ctx.out / "series.csv", series_csv);
  write_text(ctx.out / "sweep.csv", sweep_csv);
}

void cmd_report(const Context& ctx) {
  if (ctx.inputs.empty()) throw ConfigError("report needs at least one result file");
  std::vector<json> docs;
  for (const auto& path : ctx.inputs) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open '" + path + "'");
    json j;
    try {
      j = json::parse(f);
    } catch (const json::parse_error& e) {
      throw ConfigError("'" + path + "': " + e.what());
    }
    if (!j.contains("schema_version") || j.at("schema_version") != kSchemaVersion)
      throw ConfigError("'" + path + "': schema_version mismatch (expected " + std::to_string(kSchemaVersion) + ")");
    if (j.value("command", "") != "quepp") throw ConfigError("'" + path + "' is not a quepp result");
    docs.push_back(std::move(j));
  }
  std::vector<std::uint64_t> seeds;
  for (const auto& d : docs) seeds.push_back(d.at("config").at("seed").get<std::uint64_t>());
  if (std::adjacent_find(seeds.begin(), seeds.end(), std::not_equal_to<>()) != seeds.end() && !ctx.force)
    throw ConfigError("result files come from different seeds; pass --force to merge anyway");

  fs::create_directories(ctx.out);
  std::string csv = "# version: " + version_string() + "\n";
  csv += "file,theta,K_T,ensemble_size,ideal,cpt,unmitigated,quepp,std_error,bias_cpt,bias_unmitigated,bias_quepp\n";
  json merged = {{"schema_version", kSchemaVersion}, {"command", "report"}, {"version", version_string()}};
  json sources = json::array();
  for (std::size_t i = 0; i < docs.size(); ++i) {
    sources.push_back({{"file", ctx.inputs[i]}, {"config", docs[i].at("config")}, {"version", docs[i].at("version")}});
    for (const auto& run : docs[i].at("runs")) {
      const auto& r = run.at("result");
      const auto field = [](const json& v) { return v.is_null() ? std::string("nan") : num(v.get<double>()); };
      const auto bias = [&](const char* key) {
        if (run.at("ideal").is_null()) return std::string("nan");
        return num(std::abs(r.at(key).get<double>() - run.at("ideal").get<double>()));
      };
      csv += ctx.inputs[i] + "," + field(run.at("theta")) + "," +
             (run.at("K_T").is_null() ? std::string("") : std::to_string(run.at("K_T").get<std::size_t>())) + "," +
             std::to_string(r.at("ensemble_size").get<std::size_t>()) + "," + field(run.at("ideal")) + "," +
             num(r.at("classical_part").get<double>()) + "," + num(r.at("noisy_target").get<double>()) + "," +
             num(r.at("boosted").get<double>()) + "," + num(r.at("std_error").get<double>()) + "," +
             bias("classical_part") + "," + bias("noisy_target") + "," + bias("boosted") + "\n";
    }
  }
  merged["sources"] = sources;
  write_text(ctx.out / "report.csv", csv);
  write_json(ctx.out / "report.json", merged);
  write_text(ctx.out / "report.gp",
             "# gnuplot -persist report.gp\n"
             "set datafile separator ','\n"
             "set key autotitle columnhead\n"
             "set xlabel 'K_T'\nset ylabel '|estimate - ideal|'\nset logscale y\n"
             "plot 'report.csv' using 3:10 with linespoints title 'CPT', \\\n"
             "     '' using 3:11 with linespoints title 'unmitigated', \\\n"
             "     '' using 3:12:9 with yerrorbars title 'QuEPP'\n");
}

}  // namespace quepp::cli
