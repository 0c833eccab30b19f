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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracle/dense.h"
#include "quepp/circuit.h"
#include "quepp/errors.h"
#include "random_circuit.h"

using quepp::Circuit;
using quepp::GateKind;
using quepp::PauliString;
using std::numbers::pi;

TEST(Circuit, AppendValidates) {
  Circuit c(2);
  EXPECT_THROW(c.append(GateKind::kH, 2), quepp::IndexError);
  EXPECT_THROW(c.append(GateKind::kCZ, 1, 1), quepp::IndexError);
  EXPECT_THROW(c.append_rotation(PauliString(2), 0.1), quepp::PreconditionError);
  EXPECT_THROW(c.append_rotation(PauliString::parse("-XI"), 0.1), quepp::PreconditionError);
  EXPECT_THROW(c.append_rotation(PauliString::parse("X"), 0.1), quepp::DimensionError);
  EXPECT_THROW(Circuit(0), quepp::DimensionError);
}

TEST(Circuit, RotationIndicesAreOneBased) {
  Circuit c(2);
  c.append(GateKind::kH, 0);
  c.append_rotation(PauliString::parse("XI"), 0.1);
  c.append(GateKind::kCZ, 0, 1);
  c.append_rotation(PauliString::parse("ZZ"), 0.2);
  EXPECT_EQ(c.rotation_count(), 2u);
  EXPECT_DOUBLE_EQ(c.rotation(1).angle, 0.1);
  EXPECT_DOUBLE_EQ(c.rotation(2).angle, 0.2);
  EXPECT_EQ(c.rotation_positions(), (std::vector<std::size_t>{1, 3}));
  EXPECT_THROW(c.rotation(0), quepp::IndexError);
  EXPECT_THROW(c.rotation(3), quepp::IndexError);
  auto census = c.census();
  EXPECT_EQ(census["h"], 1u);
  EXPECT_EQ(census["cz"], 1u);
  EXPECT_EQ(census["rx"], 1u);
}

TEST(Circuit, InverseUndoesCircuit) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    auto c = testutil::random_circuit(3, 12, 4, rng);
    Circuit both = c;
    both.append(c.inverse());
    const auto u = oracle::circuit_unitary(both);
    EXPECT_LT((u - oracle::Mat::Identity(8, 8)).norm(), 1e-12);
  }
}

TEST(QuarterTurns, Classification) {
  EXPECT_EQ(quepp::quarter_turns(0.0), 0);
  EXPECT_EQ(quepp::quarter_turns(pi / 2), 1);
  EXPECT_EQ(quepp::quarter_turns(pi), 2);
  EXPECT_EQ(quepp::quarter_turns(-pi / 2), 3);
  EXPECT_EQ(quepp::quarter_turns(5 * pi / 2), 1);
  EXPECT_EQ(quepp::quarter_turns(pi / 5), -1);
}

TEST(QuarterTurns, GatesMatchRotationUpToPhase) {
  for (std::size_t code = 1; code < 64; ++code) {
    auto gen = testutil::pauli_from_code(3, code);
    for (int turns = 1; turns < 4; ++turns) {
      Circuit c(3);
      for (const auto& g : quepp::quarter_turn_gates(gen, turns)) c.append(g);
      const auto expected = oracle::rotation_matrix({gen, turns * pi / 2});
      EXPECT_TRUE(oracle::equal_up_to_phase(oracle::circuit_unitary(c), expected, 1e-12))
          << gen.str() << " turns " << turns;
    }
  }
}

TEST(Normalize, Examples) {
  Circuit c(1);
  c.append_rotation(PauliString::parse("X"), pi / 2);
  auto n = quepp::normalize_rotations(c);
  ASSERT_EQ(n.size(), 1u);
  EXPECT_EQ(std::get<quepp::CliffordGate>(n.ops()[0]).kind, GateKind::kSX);

  Circuit d(1);
  d.append_rotation(PauliString::parse("X"), pi / 5);
  EXPECT_EQ(quepp::normalize_rotations(d), d);

  Circuit e(1);
  e.append_rotation(PauliString::parse("X"), 3 * pi / 5);
  auto ne = quepp::normalize_rotations(e);
  ASSERT_EQ(ne.size(), 2u);
  EXPECT_EQ(std::get<quepp::CliffordGate>(ne.ops()[0]).kind, GateKind::kSX);
  EXPECT_NEAR(std::get<quepp::Rotation>(ne.ops()[1]).angle, pi / 10, 1e-15);
  EXPECT_TRUE(oracle::equal_up_to_phase(oracle::circuit_unitary(ne), oracle::circuit_unitary(e), 1e-12));
}

TEST(Normalize, PreservesUnitaryAndBoundsAngles) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + t % 3;
    auto c = testutil::random_circuit(n, 6, 4, rng, quepp::InputKind::kAllZero, 3);
    // Mix in exact Clifford angles and larger multiples.
    c.append_rotation(testutil::random_pauli(n, rng, false), (t % 7 - 3) * pi / 2);
    c.append_rotation(testutil::random_pauli(n, rng, false), 2.9 * pi);
    auto norm = quepp::normalize_rotations(c);
    for (std::size_t j = 1; j <= norm.rotation_count(); ++j) {
      EXPECT_LE(std::abs(norm.rotation(j).angle), pi / 4 + 1e-15);
      EXPECT_NE(std::sin(norm.rotation(j).angle), 0.0);
    }
    EXPECT_TRUE(oracle::equal_up_to_phase(oracle::circuit_unitary(norm), oracle::circuit_unitary(c), 1e-12));
  }
}

TEST(Normalize, CliffordDetection) {
  Circuit c(2);
  c.append(GateKind::kH, 0);
  c.append_rotation(PauliString::parse("XZ"), pi);
  EXPECT_TRUE(quepp::is_clifford(c));
  c.append_rotation(PauliString::parse("XZ"), 0.3);
  EXPECT_FALSE(quepp::is_clifford(c));
  EXPECT_TRUE(quepp::is_clifford(Circuit(3)));
}
