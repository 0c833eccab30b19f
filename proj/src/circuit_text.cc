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

#include "quepp/circuit_text.h"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <vector>

#include "quepp/errors.h"

namespace quepp {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::size_t parse_index(std::string_view tok, std::size_t line_no) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError(line_no, "bad integer '" + std::string(tok) + "'");
  return v;
}

double parse_angle(std::string_view tok, std::size_t line_no) {
  // strtod accepts the full decimal/scientific grammar; from_chars for double
  // is not available on every toolchain we target.
  std::string s(tok);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || s.empty() || !std::isfinite(v))
    throw ParseError(line_no, "malformed angle '" + s + "'");
  return v;
}

std::optional<GateKind> clifford_kind(std::string_view m) {
  for (auto k : kAllGateKinds)
    if (gate_mnemonic(k) == m) return k;
  return std::nullopt;
}

std::string format_angle(double a) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", a);
  return buf;
}

}  // namespace

Circuit parse_circuit(std::string_view text) {
  std::optional<Circuit> circuit;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto toks = split_ws(line);
    if (toks.empty()) continue;
    const auto m = toks[0];

    auto need = [&](std::size_t count) {
      if (toks.size() != count)
        throw ParseError(line_no, "'" + std::string(m) + "' expects " + std::to_string(count - 1) + " argument(s)");
    };

    if (m == "qubits") {
      if (circuit) throw ParseError(line_no, "duplicate 'qubits' header");
      need(2);
      const auto n = parse_index(toks[1], line_no);
      if (n == 0) throw ParseError(line_no, "qubit count must be positive");
      circuit.emplace(n);
      continue;
    }
    if (!circuit) throw ParseError(line_no, "expected 'qubits <n>' header first");
    const std::size_t n = circuit->num_qubits();
    auto qubit = [&](std::string_view tok) {
      const auto q = parse_index(tok, line_no);
      if (q >= n) throw ParseError(line_no, "qubit " + std::to_string(q) + " out of range");
      return q;
    };

    try {
      if (m == "input") {
        need(2);
        if (toks[1] == "zero")
          circuit->set_input(InputKind::kAllZero);
        else if (toks[1] == "plus")
          circuit->set_input(InputKind::kAllPlus);
        else
          throw ParseError(line_no, "input must be 'zero' or 'plus'");
      } else if (auto kind = clifford_kind(m)) {
        if (gate_arity(*kind) == 1) {
          need(2);
          circuit->append(*kind, qubit(toks[1]));
        } else {
          need(3);
          const auto a = qubit(toks[1]);
          const auto b = qubit(toks[2]);
          if (a == b) throw ParseError(line_no, "two-qubit gate on a repeated qubit");
          circuit->append(*kind, a, b);
        }
      } else if (m == "rx" || m == "ry" || m == "rz") {
        need(3);
        const char letter = static_cast<char>(std::toupper(static_cast<unsigned char>(m[1])));
        circuit->append_rotation(PauliString::single(n, qubit(toks[1]), letter), parse_angle(toks[2], line_no));
      } else if (m == "rot") {
        need(3);
        PauliString gen;
        try {
          gen = PauliString::parse(toks[1]);
        } catch (const std::invalid_argument& e) {
          throw ParseError(line_no, e.what());
        }
        if (gen.num_qubits() != n)
          throw ParseError(line_no, "generator has " + std::to_string(gen.num_qubits()) + " letters, expected " +
                                        std::to_string(n));
        if (gen.negative()) throw ParseError(line_no, "generator sign must be +");
        if (gen.is_identity()) throw ParseError(line_no, "generator is the identity");
        circuit->append_rotation(gen, parse_angle(toks[2], line_no));
      } else {
        throw ParseError(line_no, "unknown mnemonic '" + std::string(m) + "'");
      }
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception& e) {
      throw ParseError(line_no, e.what());
    }
  }
  if (!circuit) throw ParseError(line_no, "missing 'qubits <n>' header");
  return std::move(*circuit);
}

std::string serialize_circuit(const Circuit& circuit) {
  std::ostringstream out;
  out << "qubits " << circuit.num_qubits() << "\n";
  if (circuit.input() == InputKind::kAllPlus) out << "input plus\n";
  for (const auto& op : circuit.ops()) {
    if (const auto* g = std::get_if<CliffordGate>(&op)) {
      out << gate_mnemonic(g->kind) << ' ' << g->qubits[0];
      if (g->arity() == 2) out << ' ' << g->qubits[1];
      out << '\n';
      continue;
    }
    const auto& r = std::get<Rotation>(op);
    if (r.generator.weight() == 1) {
      const auto q = r.generator.support().front();
      const char l = r.generator.letter(q);
      out << 'r' << static_cast<char>(std::tolower(l)) << ' ' << q << ' ' << format_angle(r.angle) << '\n';
    } else {
      out << "rot " << r.generator.str().substr(1) << ' ' << format_angle(r.angle) << '\n';
    }
  }
  return out.str();
}

}  // namespace quepp
