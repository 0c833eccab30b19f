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

#include <algorithm>
#include <cstddef>
#include <numbers>
#include <random>

#include "quepp/circuit.h"
#include "testutil.h"

namespace testutil {

/// Random circuit over the full gate alphabet with `k` rotations about random
/// generators of weight <= max_weight and angles in (-pi, pi).
inline quepp::Circuit random_circuit(std::size_t n, std::size_t cliffords, std::size_t k, std::mt19937_64& rng,
                                     quepp::InputKind input = quepp::InputKind::kAllZero, std::size_t max_weight = 2) {
  quepp::Circuit c(n, input);
  std::uniform_int_distribution<std::size_t> qd(0, n - 1);
  std::uniform_int_distribution<std::size_t> kd(0, quepp::kAllGateKinds.size() - 1);
  std::uniform_real_distribution<double> ad(-std::numbers::pi, std::numbers::pi);
  std::vector<bool> is_rot(cliffords + k, false);
  for (std::size_t i = 0; i < k; ++i) is_rot[i] = true;
  std::shuffle(is_rot.begin(), is_rot.end(), rng);
  for (bool rot : is_rot) {
    if (rot) {
      quepp::PauliString g(n);
      const std::size_t w = 1 + std::uniform_int_distribution<std::size_t>(0, std::min(max_weight, n) - 1)(rng);
      for (std::size_t i = 0; i < w; ++i) g.set_letter(qd(rng), "XYZ"[std::uniform_int_distribution<int>(0, 2)(rng)]);
      if (g.is_identity()) g.set_letter(qd(rng), 'X');
      c.append_rotation(g, ad(rng));
      continue;
    }
    auto kind = quepp::kAllGateKinds[kd(rng)];
    if (quepp::gate_arity(kind) == 2 && n < 2) kind = quepp::GateKind::kH;
    const auto a = qd(rng);
    auto b = qd(rng);
    while (quepp::gate_arity(kind) == 2 && b == a) b = qd(rng);
    c.append(kind, a, quepp::gate_arity(kind) == 2 ? b : 0);
  }
  return c;
}

}  // namespace testutil
