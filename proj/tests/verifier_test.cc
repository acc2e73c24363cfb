// Copyright 2026 The qtrack Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qtrack/verifier.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "branch_oracle.h"
#include "qtrack/compiler.h"

namespace qtrack {
namespace {

TEST(Verifier, AgreesWithDenseSimulationOnAllBranches) {
  std::mt19937_64 rng(2026);
  size_t branches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const size_t n = 1 + rng() % 10;
    AnnotatedCircuit c = oracle::random_circuit(rng, n, 5);
    std::string error;
    branches += oracle::check_all_branches(c, n, &error);
    ASSERT_EQ(error, "") << "trial " << trial << "\n" << emit_text(c);
  }
  EXPECT_GT(branches, 1000u);
}

TEST(Verifier, GhzRoundMatchesBruteForceBranches) {
  AnnotatedCircuit c = parse_text(
      "H 0\nCX 0 1 1 2\nM 0 1 2\nDETECTOR rec[-1] rec[-2]\nDETECTOR rec[-2] rec[-3]\n");
  for (uint8_t b : {0, 1}) {
    SimResult r = simulate(c, SimOptions{0, {b}});
    EXPECT_EQ(r.tape, (std::vector<uint8_t>{b, b, b}));
    EXPECT_EQ(r.random, (std::vector<uint8_t>{1, 0, 0}));
    EXPECT_EQ(r.detectors, (std::vector<uint8_t>{0, 0}));
  }
}

TEST(Verifier, FlagsRandomDetector) {
  AnnotatedCircuit c = parse_text("R 0\nMX 0\nDETECTOR rec[-1]\n");
  DeterminismReport rep = check_determinism(c, 64, 2);
  ASSERT_EQ(rep.violations.size(), 1u);
  EXPECT_FALSE(rep.violations[0].observable);
  EXPECT_GT(rep.violations[0].failing_seeds, 0u);
  EXPECT_LT(rep.violations[0].failing_seeds, 64u);
  EXPECT_NE(rep.describe().find("detector 0"), std::string::npos);
}

TEST(Verifier, ExpectedParityIsHonoured) {
  AnnotatedCircuit c = parse_text("R 0\nX 0\nM 0\n# expected_parity 1\nDETECTOR rec[-1]\n");
  EXPECT_TRUE(check_determinism(c, 4, 1).ok());
  c.instructions.back().expected_parity = 0;
  EXPECT_FALSE(check_determinism(c, 4, 1).ok());
}

TEST(Verifier, RejectsSingleSeed) {
  AnnotatedCircuit c = parse_text("M 0\n");
  EXPECT_THROW(check_determinism(c, 1), SimError);
}

CompileResult memory(Family f, int d, Basis b) {
  ProtocolCompiler c;
  size_t p = c.add_patch(build_patch(f, d));
  c.initialize({{p, b}});
  c.syndrome_extraction(d);
  c.data_readout({{p, b}});
  return c.finish();
}

TEST(Verifier, CompiledMemoryIsDeterministic) {
  for (Family f : {Family::Repetition, Family::RotatedSurface, Family::UnrotatedSurface,
                   Family::Toric}) {
    for (Basis b : {Basis::Z, Basis::X}) {
      if (f == Family::Repetition && b == Basis::X) continue;
      CompileResult r = memory(f, 3, b);
      AnnotatedCircuit parsed = parse_text(emit_text(r.circuit));
      DeterminismReport rep = check_determinism(parsed, 32);
      EXPECT_TRUE(rep.ok()) << family_name(f) << "\n" << rep.describe();
      EXPECT_EQ(rep.detectors, r.stats.detectors);
    }
  }
}

TEST(Verifier, MutatedRecordIsCaught) {
  CompileResult r = memory(Family::RotatedSurface, 3, Basis::Z);
  AnnotatedCircuit c = r.circuit;
  // Perturb the first readout detector by one record.
  for (auto& i : c.instructions) {
    if (i.op == Op::DETECTOR && i.targets.size() > 2) {
      i.targets[0] += 1;
      break;
    }
  }
  EXPECT_FALSE(check_determinism(c, 32).ok());
}

}  // namespace
}  // namespace qtrack
