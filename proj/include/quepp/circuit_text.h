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

#include <string>
#include <string_view>

#include "quepp/circuit.h"

namespace quepp {

/// Parses the line-oriented circuit format:
///
///   qubits <n>
///   input zero|plus            (optional, default zero)
///   h q | s q | sdg q | x q | y q | z q | sx q | sxdg q
///   cx c t | cz a b
///   rot <pauli-letters> <theta>
///   rx q <theta> | ry q <theta> | rz q <theta>
///
/// '#' starts a comment. Angles are decimal radians. Throws ParseError with
/// the offending line number.
Circuit parse_circuit(std::string_view text);

/// Inverse of parse_circuit. Angles are written with 17 significant digits so
/// that parse(serialize(c)) == c.
std::string serialize_circuit(const Circuit& circuit);

}  // namespace quepp
