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
#include <random>
#include <string>

#include "quepp/pauli.h"

namespace testutil {

/// Pauli number `code` in base 4 (0=I, 1=X, 2=Y, 3=Z), qubit 0 least significant.
inline quepp::PauliString pauli_from_code(std::size_t n, std::size_t code, bool negative = false) {
  static constexpr char kLetters[] = "IXYZ";
  quepp::PauliString p(n);
  for (std::size_t q = 0; q < n; ++q) {
    p.set_letter(q, kLetters[code % 4]);
    code /= 4;
  }
  p.set_negative(negative);
  return p;
}

inline quepp::PauliString random_pauli(std::size_t n, std::mt19937_64& rng, bool allow_identity = true) {
  std::uniform_int_distribution<std::size_t> d(0, 3);
  static constexpr char kLetters[] = "IXYZ";
  while (true) {
    quepp::PauliString p(n);
    for (std::size_t q = 0; q < n; ++q) p.set_letter(q, kLetters[d(rng)]);
    if (allow_identity || !p.is_identity()) return p;
  }
}

}  // namespace testutil
