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

#include <numbers>
#include <random>

#include "oracle/dense.h"
#include "quepp/clifford_eval.h"
#include "quepp/errors.h"
#include "quepp/generators.h"
#include "testutil.h"

using quepp::ExperimentSpec;
using quepp::Family;
using quepp::PauliString;
using std::numbers::pi;

TEST(Coupling, GraphsAreSimpleAndLowDegree) {
  for (std::size_t n : {2u, 5u, 10u, 49u}) {
    for (const auto& g : {quepp::CouplingGraph::chain(n), quepp::CouplingGraph::hex_like(n)}) {
      std::vector<int> degree(n, 0);
      for (auto [a, b] : g.edges) {
        ASSERT_LT(a, n);
        ASSERT_LT(b, n);
        ASSERT_NE(a, b);
        ++degree[a];
        ++degree[b];
      }
      for (int d : degree) EXPECT_LE(d, 3);
    }
  }
  EXPECT_EQ(quepp::CouplingGraph::chain(5).edges.size(), 4u);
}

TEST(Coupling, EdgeListParsing) {
  auto g = quepp::CouplingGraph::from_edge_list(4, "0 1\n# comment\n2 1\n1 0\n\n3 2 # tail\n");
  EXPECT_EQ(g.edges.size(), 3u);
  EXPECT_THROW(quepp::CouplingGraph::from_edge_list(4, "0 4\n"), quepp::ParseError);
  EXPECT_THROW(quepp::CouplingGraph::from_edge_list(4, "0\n"), quepp::ParseError);
}

TEST(Family, NamesRoundTrip) {
  for (auto f : {Family::kMirror2D, Family::kMirror1D, Family::kTrotter})
    EXPECT_EQ(quepp::parse_family(quepp::family_name(f)), f);
  EXPECT_THROW(quepp::parse_family("ghz"), std::invalid_argument);
}

TEST(Mirror, IdealZExpectationIsOne) {
  std::mt19937_64 rng(99);
  for (auto family : {Family::kMirror2D, Family::kMirror1D}) {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
      ExperimentSpec spec;
      spec.family = family;
      spec.num_qubits = 4 + seed;
      spec.layers = 6;
      spec.p_rx = 0.2;
      spec.seed = seed;
      const auto c = quepp::generate_mirror(spec);
      EXPECT_GT(c.rotation_count(), 0u);
      const auto psi = oracle::run(c);
      // Default observable and a random Z-type string.
      EXPECT_NEAR(oracle::expectation(psi, quepp::default_observable(spec)), 1.0, 1e-10);
      PauliString z(spec.num_qubits);
      for (std::size_t q = 0; q < spec.num_qubits; ++q)
        if (rng() & 1U) z.set_letter(q, 'Z');
      z.set_letter(0, 'Z');
      EXPECT_NEAR(oracle::expectation(psi, z), 1.0, 1e-10);
    }
  }
}

TEST(Mirror, DeterministicAndSeedSensitive) {
  ExperimentSpec spec;
  spec.num_qubits = 12;
  spec.layers = 8;
  spec.p_rx = 0.1;
  const auto a = quepp::generate_mirror(spec);
  EXPECT_EQ(a, quepp::generate_mirror(spec));
  spec.seed = 2;
  EXPECT_FALSE(a == quepp::generate_mirror(spec));
}

TEST(Mirror, DepthZeroIsIdentity) {
  ExperimentSpec spec;
  spec.layers = 0;
  EXPECT_EQ(quepp::generate_mirror(spec).size(), 0u);
}

TEST(Mirror, ExactCensus) {
  ExperimentSpec spec;
  spec.num_qubits = 49;
  spec.layers = 16;
  spec.theta = pi / 5;
  spec.census = quepp::ForwardCensus{216, 171, 25};
  const auto c = quepp::generate_mirror(spec);
  auto census = c.census();
  EXPECT_EQ(census["cz"], 432u);
  EXPECT_EQ(census["h"], 342u);
  EXPECT_EQ(census["rx"] + census["rot"], 50u);
  EXPECT_EQ(c.rotation_count(), 50u);
  spec.census = quepp::ForwardCensus{100000, 0, 0};
  EXPECT_THROW(quepp::generate_mirror(spec), quepp::PreconditionError);
}

TEST(Mirror, OneDimensionalUsesChainAlphabet) {
  ExperimentSpec spec;
  spec.family = Family::kMirror1D;
  spec.num_qubits = 8;
  spec.layers = 10;
  const auto c = quepp::generate_mirror(spec);
  for (const auto& op : c.ops()) {
    if (const auto* g = std::get_if<quepp::CliffordGate>(&op)) {
      if (g->kind == quepp::GateKind::kCZ) EXPECT_EQ(std::max(g->qubits[0], g->qubits[1]) - std::min(g->qubits[0], g->qubits[1]), 1u);
    }
  }
  auto census = c.census();
  EXPECT_GT(census["s"] + census["sdg"], 0u);
}

TEST(Trotter, StructureAndCliffordPoints) {
  ExperimentSpec spec;
  spec.family = Family::kTrotter;
  spec.num_qubits = 10;
  spec.layers = 10;
  spec.theta = 0.0;
  const auto c0 = quepp::generate_trotter(spec);
  EXPECT_EQ(c0.rotation_count(), 100u);
  auto census = c0.census();
  EXPECT_EQ(census["h"], 10u);
  EXPECT_EQ(census["cz"], 10u * (5 + 5 + 4 + 4));
  EXPECT_EQ(census["sx"], 10u * (5 + 4));
  EXPECT_TRUE(quepp::is_clifford(c0));
  const auto x = quepp::default_observable(spec);
  EXPECT_EQ(x.str(), "+XXXXXXXXXX");
  EXPECT_NEAR(quepp::clifford_expectation(c0, x), oracle::expectation(c0, x), 1e-10);

  spec.theta = pi / 2;
  const auto c1 = quepp::normalize_rotations(quepp::generate_trotter(spec));
  EXPECT_EQ(c1.rotation_count(), 0u);
  EXPECT_NEAR(quepp::clifford_expectation(c1, x), oracle::expectation(c1, x), 1e-10);

  spec.num_qubits = 1;
  EXPECT_THROW(quepp::generate_trotter(spec), quepp::PreconditionError);
}
