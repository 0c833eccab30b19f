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

#include "quepp/generators.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "quepp/errors.h"

namespace quepp {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open edge list '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CouplingGraph resolve_coupling(const ExperimentSpec& spec) {
  std::string name = spec.coupling;
  if (name.empty()) name = spec.family == Family::kMirror1D ? "chain" : "hex";
  if (name == "chain") return CouplingGraph::chain(spec.num_qubits);
  if (name == "hex") return CouplingGraph::hex_like(spec.num_qubits);
  if (name.rfind("file:", 0) == 0) return CouplingGraph::from_edge_list(spec.num_qubits, read_file(name.substr(5)));
  throw std::invalid_argument("unknown coupling '" + name + "'");
}

// A maximal matching built from a random edge order.
std::vector<std::pair<std::size_t, std::size_t>> random_matching(const CouplingGraph& g, std::mt19937_64& rng) {
  auto edges = g.edges;
  std::shuffle(edges.begin(), edges.end(), rng);
  std::vector<bool> used(g.num_qubits, false);
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (auto [a, b] : edges) {
    if (used[a] || used[b]) continue;
    used[a] = used[b] = true;
    out.emplace_back(a, b);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Marks exactly `count` of `total` slots, uniformly at random.
std::vector<bool> choose_exact(std::size_t total, std::size_t count, std::mt19937_64& rng, const char* what) {
  if (count > total)
    throw PreconditionError(std::string("census asks for ") + std::to_string(count) + " " + what + " but only " +
                            std::to_string(total) + " slots exist");
  std::vector<std::size_t> idx(total);
  for (std::size_t i = 0; i < total; ++i) idx[i] = i;
  std::shuffle(idx.begin(), idx.end(), rng);
  std::vector<bool> chosen(total, false);
  for (std::size_t i = 0; i < count; ++i) chosen[idx[i]] = true;
  return chosen;
}

}  // namespace

CouplingGraph CouplingGraph::chain(std::size_t n) {
  CouplingGraph g{n, {}};
  for (std::size_t q = 0; q + 1 < n; ++q) g.edges.emplace_back(q, q + 1);
  return g;
}

CouplingGraph CouplingGraph::hex_like(std::size_t n) {
  CouplingGraph g{n, {}};
  const auto cols = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
  for (std::size_t q = 0; q < n; ++q) {
    const std::size_t r = q / cols, c = q % cols;
    if (c + 1 < cols && q + 1 < n) g.edges.emplace_back(q, q + 1);
    if ((r + c) % 2 == 0 && q + cols < n) g.edges.emplace_back(q, q + cols);
  }
  return g;
}

CouplingGraph CouplingGraph::from_edge_list(std::size_t n, std::string_view text) {
  CouplingGraph g{n, {}};
  std::set<std::pair<std::size_t, std::size_t>> seen;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    std::istringstream ls(line);
    std::size_t a = 0, b = 0;
    if (!(ls >> a)) continue;
    if (!(ls >> b)) throw ParseError(line_no, "edge needs two endpoints");
    if (a >= n || b >= n || a == b) throw ParseError(line_no, "bad edge");
    auto e = std::minmax(a, b);
    if (seen.insert(e).second) g.edges.emplace_back(e.first, e.second);
  }
  return g;
}

std::string_view family_name(Family f) {
  switch (f) {
    case Family::kMirror2D: return "mirror2d";
    case Family::kMirror1D: return "mirror1d";
    case Family::kTrotter: return "trotter";
  }
  return "?";
}

Family parse_family(std::string_view name) {
  if (name == "mirror2d") return Family::kMirror2D;
  if (name == "mirror1d") return Family::kMirror1D;
  if (name == "trotter") return Family::kTrotter;
  throw std::invalid_argument("unknown experiment family '" + std::string(name) + "'");
}

PauliString default_observable(const ExperimentSpec& spec) {
  const std::size_t n = spec.num_qubits;
  PauliString o(n);
  if (spec.family == Family::kTrotter) {
    for (std::size_t q = 0; q < n; ++q) o.set_letter(q, 'X');
    return o;
  }
  for (std::size_t q : {std::size_t{0}, n / 4, n / 2, (3 * n) / 4, n - 1}) o.set_letter(q, 'Z');
  return o;
}

Circuit generate_mirror(const ExperimentSpec& spec) {
  if (spec.family == Family::kTrotter) throw PreconditionError("generate_mirror needs a mirror family");
  return generate_mirror(spec, resolve_coupling(spec));
}

Circuit generate_mirror(const ExperimentSpec& spec, const CouplingGraph& graph) {
  const std::size_t n = spec.num_qubits;
  if (graph.num_qubits != n) throw DimensionError("coupling graph size does not match num_qubits");
  std::seed_seq seq{spec.seed, static_cast<std::uint64_t>(spec.family), std::uint64_t{0x6d69727221}};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const std::vector<GateKind> single_set = spec.family == Family::kMirror2D
                                               ? std::vector<GateKind>{GateKind::kH}
                                               : std::vector<GateKind>{GateKind::kH, GateKind::kS, GateKind::kSdg};
  std::uniform_int_distribution<std::size_t> pick_single(0, single_set.size() - 1);

  const std::size_t layers = spec.layers;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> matchings(layers);
  for (auto& m : matchings) m = random_matching(graph, rng);

  std::vector<bool> use_single, use_cz, use_rx;
  std::size_t cz_slots = 0;
  for (const auto& m : matchings) cz_slots += m.size();
  if (spec.census) {
    use_single = choose_exact(layers * n, spec.census->single, rng, "single-qubit gates");
    use_cz = choose_exact(cz_slots, spec.census->cz, rng, "CZ gates");
    use_rx = choose_exact(layers * n, spec.census->rx, rng, "RX rotations");
  } else {
    use_single.resize(layers * n);
    use_cz.resize(cz_slots);
    use_rx.resize(layers * n);
    for (std::size_t i = 0; i < layers * n; ++i) use_single[i] = unit(rng) < spec.p_single;
    for (std::size_t i = 0; i < cz_slots; ++i) use_cz[i] = unit(rng) < spec.p_cz;
    for (std::size_t i = 0; i < layers * n; ++i) use_rx[i] = unit(rng) < spec.p_rx;
  }

  Circuit forward(n, InputKind::kAllZero);
  std::size_t cz_index = 0;
  for (std::size_t l = 0; l < layers; ++l) {
    for (std::size_t q = 0; q < n; ++q) {
      // Draw unconditionally so the gate choice does not shift the stream.
      const GateKind kind = single_set[pick_single(rng)];
      if (use_single[l * n + q]) forward.append(kind, q);
    }
    for (auto [a, b] : matchings[l])
      if (use_cz[cz_index++]) forward.append(GateKind::kCZ, a, b);
    for (std::size_t q = 0; q < n; ++q)
      if (use_rx[l * n + q]) forward.append_rotation(PauliString::single(n, q, 'X'), spec.theta);
  }
  Circuit out = forward;
  out.append(forward.inverse());
  return out;
}

Circuit generate_trotter(const ExperimentSpec& spec) {
  if (spec.family != Family::kTrotter) throw PreconditionError("generate_trotter needs the trotter family");
  const std::size_t n = spec.num_qubits;
  if (n < 2) throw PreconditionError("trotter circuits need at least two qubits");
  Circuit c(n, InputKind::kAllZero);
  for (std::size_t q = 0; q < n; ++q) c.append(GateKind::kH, q);
  auto cz_even = [&] {
    for (std::size_t i = 0; i + 1 < n; i += 2) c.append(GateKind::kCZ, i, i + 1);
  };
  auto cz_odd = [&] {
    for (std::size_t i = 1; i + 2 <= n; i += 2) c.append(GateKind::kCZ, i, i + 1);
  };
  for (std::size_t step = 0; step < spec.layers; ++step) {
    cz_even();
    for (std::size_t i = 1; i < n; i += 2) c.append(GateKind::kSX, i);
    cz_even();
    for (std::size_t q = 0; q < n; ++q) c.append_rotation(PauliString::single(n, q, 'X'), spec.theta);
    cz_odd();
    for (std::size_t i = 3; i < n; i += 2) c.append(GateKind::kSX, i);
    cz_odd();
  }
  return c;
}

Circuit generate_circuit(const ExperimentSpec& spec) {
  return spec.family == Family::kTrotter ? generate_trotter(spec) : generate_mirror(spec);
}

}  // namespace quepp
