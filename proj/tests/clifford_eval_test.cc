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
#include <functional>
#include <numbers>
#include <random>

#include "oracle/dense.h"
#include "quepp/clifford_eval.h"
#include "quepp/errors.h"
#include "random_circuit.h"

using quepp::Branch;
using quepp::BranchAssignment;
using quepp::Circuit;
using quepp::GateKind;
using quepp::InputKind;
using quepp::PauliString;

namespace {

Circuit h_then_rx(double theta, InputKind input) {
  Circuit c(1, input);
  c.append(GateKind::kH, 0);
  c.append_rotation(PauliString::parse("X"), theta);
  return c;
}

// Every assignment in {passthrough, cos, sin}^K, consistent or not.
void for_each_assignment(std::size_t k, const std::function<void(const BranchAssignment&)>& fn) {
  BranchAssignment b{std::vector<Branch>(k, Branch::kPassthrough)};
  std::size_t total = 1;
  for (std::size_t i = 0; i < k; ++i) total *= 3;
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    for (std::size_t i = 0; i < k; ++i) {
      b.decisions[i] = static_cast<Branch>(c % 3);
      c /= 3;
    }
    fn(b);
  }
}

}  // namespace

TEST(Backpropagate, WorkedExample) {
  const double theta = 0.7;
  auto c = h_then_rx(theta, InputKind::kAllZero);
  auto cos_path = quepp::backpropagate(c, PauliString::parse("Z"), {{Branch::kCos}});
  ASSERT_TRUE(cos_path.ok());
  EXPECT_EQ(cos_path.frame.str(), "+X");
  auto sin_path = quepp::backpropagate(c, PauliString::parse("Z"), {{Branch::kSin}});
  ASSERT_TRUE(sin_path.ok());
  EXPECT_EQ(sin_path.frame.str(), "-Y");
  auto bad = quepp::backpropagate(c, PauliString::parse("Z"), {{Branch::kPassthrough}});
  ASSERT_FALSE(bad.ok());
  EXPECT_EQ(*bad.inconsistent_at, 1u);
  // The rotation commutes with X, so only passthrough is consistent there.
  auto commuting = quepp::backpropagate(c, PauliString::parse("X"), {{Branch::kSin}});
  EXPECT_FALSE(commuting.ok());
  EXPECT_THROW(quepp::ideal_path_expectation(c, PauliString::parse("X"), {{Branch::kCos}}),
               quepp::InconsistentBranchError);
  EXPECT_THROW(quepp::backpropagate(c, PauliString::parse("Z"), {{}}), quepp::DimensionError);
}

TEST(IdealPathExpectation, WorkedExample) {
  auto zero = h_then_rx(0.4, InputKind::kAllZero);
  auto plus = h_then_rx(0.4, InputKind::kAllPlus);
  EXPECT_EQ(quepp::ideal_path_expectation(zero, PauliString::parse("Z"), {{Branch::kCos}}), 0);
  EXPECT_EQ(quepp::ideal_path_expectation(plus, PauliString::parse("Z"), {{Branch::kCos}}), 1);
  EXPECT_EQ(quepp::ideal_path_expectation(plus, PauliString::parse("Z"), {{Branch::kSin}}), 0);
}

TEST(Backpropagate, CliffordOnlyMatchesConjugation) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 50; ++t) {
    auto c = testutil::random_circuit(4, 30, 0, rng);
    auto o = testutil::random_pauli(4, rng);
    auto r = quepp::backpropagate(c, o, {});
    ASSERT_TRUE(r.ok());
    PauliString expected = o;
    for (auto it = c.ops().rbegin(); it != c.ops().rend(); ++it)
      quepp::conjugate_in_place(expected, std::get<quepp::CliffordGate>(*it));
    EXPECT_EQ(r.frame, expected);
    EXPECT_EQ(quepp::clifford_frame(c, o), expected);
  }
}

TEST(Backpropagate, CircuitThenInverseRoundTrips) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 50; ++t) {
    auto c = testutil::random_circuit(5, 40, 0, rng);
    Circuit both = c;
    both.append(c.inverse());
    auto o = testutil::random_pauli(5, rng);
    o.set_negative(t % 2);
    EXPECT_EQ(quepp::clifford_frame(both, o), o);
  }
}

TEST(CliffordExpectation, MatchesDenseOracleWithCliffordAngles) {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + t % 4;
    Circuit c(n, t % 2 ? InputKind::kAllPlus : InputKind::kAllZero);
    auto base = testutil::random_circuit(n, 15, 0, rng);
    for (const auto& op : base.ops()) {
      c.append(op);
      if (rng() % 3 == 0)
        c.append_rotation(testutil::random_pauli(n, rng, false), static_cast<double>(rng() % 9) * std::numbers::pi / 2 - 2 * std::numbers::pi);
    }
    auto o = testutil::random_pauli(n, rng);
    EXPECT_NEAR(quepp::clifford_expectation(c, o), oracle::expectation(c, o), 1e-10);
  }
  Circuit bad(1);
  bad.append_rotation(PauliString::parse("X"), 0.3);
  EXPECT_THROW(quepp::clifford_frame(bad, PauliString::parse("Z")), quepp::PreconditionError);
}

// The CPT identity checked by brute force over every branch assignment.
TEST(IdealPathExpectation, SumOverPathsMatchesStatevector) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 60; ++t) {
    const std::size_t n = 1 + t % 5;
    const std::size_t k = 1 + t % 6;
    const auto input = t % 3 == 0 ? InputKind::kAllPlus : InputKind::kAllZero;
    auto c = testutil::random_circuit(n, 12, k, rng, input, 3);
    auto o = testutil::random_pauli(n, rng, false);
    double total = 0.0;
    std::size_t consistent = 0;
    for_each_assignment(k, [&](const BranchAssignment& b) {
      auto r = quepp::backpropagate(c, o, b);
      if (!r.ok()) return;
      ++consistent;
      double g = 1.0;
      for (std::size_t j = 1; j <= k; ++j) {
        if (b.decisions[j - 1] == Branch::kCos) g *= std::cos(c.rotation(j).angle);
        if (b.decisions[j - 1] == Branch::kSin) g *= std::sin(c.rotation(j).angle);
      }
      total += g * quepp::ideal_path_expectation(c, o, b);
    });
    EXPECT_GE(consistent, 1u);
    EXPECT_NEAR(total, oracle::expectation(c, o), 1e-10) << "trial " << t;
  }
}

// A path's Clifford circuit, built by substituting angles 0 and pi/2, has the
// path frame's expectation.
TEST(MaterializePathCircuit, MatchesFrameExpectation) {
  std::mt19937_64 rng(34);
  for (int t = 0; t < 40; ++t) {
    const std::size_t n = 2 + t % 3;
    auto c = testutil::random_circuit(n, 10, 3, rng, InputKind::kAllZero, 2);
    auto o = testutil::random_pauli(n, rng, false);
    for_each_assignment(3, [&](const BranchAssignment& b) {
      auto r = quepp::backpropagate(c, o, b);
      if (!r.ok()) return;
      auto pc = quepp::materialize_path_circuit(c, b);
      EXPECT_EQ(pc.rotation_count(), c.rotation_count());
      EXPECT_TRUE(quepp::is_clifford(pc));
      EXPECT_EQ(quepp::clifford_frame(pc, o), r.frame);
      EXPECT_NEAR(oracle::expectation(pc, o), quepp::expectation_on_stabilizer_input(r.frame, c.input()), 1e-10);
    });
  }
}
