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

#include <gtest/gtest.h>

#include <filesystem>
#include <set>

#include "qtrack/config.h"
#include "qtrack/verifier.h"
#include "structure_oracle.h"

namespace qtrack {
namespace {

const char* kDistance3[] = {
    "rep_memory_d3", "memory_d3",  "memory_x_d3", "unrotated_memory_d3", "toric_memory_d3",
    "tg_h_d3",       "tg_s_d3",    "tg_cnot_d3",  "ls_zz_d3",            "ls_xx_d3",
    "ls_cnot_d3",    "bell_tg_d3", "bell_ls_d3",
};

std::string config(const std::string& name) { return bundled_config_dir() + "/" + name + ".json"; }

CompiledProtocol compile(const std::string& name, ConfigOverrides ov = {}) {
  return compile_config_file(config(name), ov);
}

TEST(Protocols, EveryDistanceThreeConfigIsBundled) {
  std::set<std::string> bundled;
  for (const auto& p : bundled_configs()) bundled.insert(std::filesystem::path(p).stem().string());
  for (const char* n : kDistance3) EXPECT_TRUE(bundled.count(n)) << n;
}

class ProtocolTest : public ::testing::TestWithParam<const char*> {};

TEST_P(ProtocolTest, DeterministicOverHundredSeeds) {
  CompiledProtocol p = compile(GetParam());
  AnnotatedCircuit parsed = parse_text(emit_text(p.result.circuit));
  DeterminismReport rep = check_determinism(parsed, 100);
  EXPECT_TRUE(rep.ok()) << rep.describe();
  EXPECT_EQ(rep.detectors, p.result.stats.detectors);
  EXPECT_EQ(rep.observables, p.result.stats.observables);
  EXPECT_GT(rep.observables, 0u);
}

TEST_P(ProtocolTest, RepeatMatchesForcedRoundsAtFiveRounds) {
  ConfigOverrides folded;
  folded.params["r"] = 5;
  ConfigOverrides forced = folded;
  forced.use_repeat = false;
  AnnotatedCircuit a = compile(GetParam(), folded).result.circuit;
  AnnotatedCircuit b = compile(GetParam(), forced).result.circuit;
  EXPECT_EQ(flatten(a.instructions), flatten(b.instructions));
  EXPECT_EQ(a.qubit_coords, b.qubit_coords);
  for (const auto& i : b.instructions) EXPECT_NE(i.op, Op::REPEAT);
}

INSTANTIATE_TEST_SUITE_P(Bundled, ProtocolTest, ::testing::ValuesIn(kDistance3),
                         [](const auto& info) { return std::string(info.param); });

TEST(Protocols, TransversalCnotCorrelatesBothPatches) {
  AnnotatedCircuit c = compile("tg_cnot_d3").result.circuit;
  EXPECT_GE(oracle::cross_group_detectors(c), 1u);
  // Before the gate the patches are independent.
  AnnotatedCircuit memory = compile("unrotated_memory_d3").result.circuit;
  EXPECT_EQ(oracle::cross_group_detectors(memory), 0u);
}

TEST(Protocols, SurgeryBellObservableIsFedForward) {
  CompiledProtocol p = compile("bell_ls_d3");
  EXPECT_EQ(p.result.stats.observables, 1u);
  oracle::ObservableMix m = oracle::observable_mix(p.result.circuit, 0);
  EXPECT_GT(m.data_records, 0u);
  EXPECT_GT(m.merge_records, 0u);
  // Golden value, frozen after the first verifier-clean run.
  EXPECT_EQ(m.weight, 6u);
  EXPECT_EQ(m.data_records, 3u);
  EXPECT_EQ(m.merge_records, 3u);
  EXPECT_TRUE(check_determinism(p.result.circuit, 100).ok());
}

TEST(Protocols, ToricSurplusEqualsNullityPerBoundary) {
  CompiledProtocol p = compile("toric_memory_d3");
  oracle::MemoryCount want = oracle::z_memory_count(build_patch(Family::Toric, 3), 3);
  EXPECT_GT(p.result.stats.detectors, want.pairwise_only);
  EXPECT_EQ(p.result.stats.detectors - want.pairwise_only, want.nullity * 4);
  EXPECT_EQ(p.result.stats.detectors, 56u);
}

TEST(Protocols, RrefWorkDoesNotGrowWithRounds) {
  ConfigOverrides r10, r100;
  r10.params["r"] = 10;
  r100.params["r"] = 100;
  uint64_t s10 = compile("memory_d3", r10).result.stats.rref_solves;
  uint64_t s100 = compile("memory_d3", r100).result.stats.rref_solves;
  EXPECT_GT(s10, 0u);
  EXPECT_LE(s100, 3 * s10);
}

TEST(Protocols, RotatedMemoryCountsAndAnnotations) {
  const std::tuple<const char*, uint64_t, uint64_t> expected[] = {
      {"memory_d3", 24, 25}, {"memory_d5", 120, 121}, {"memory_d7", 336, 337},
      {"memory_d11", 1320, 1321},
  };
  for (const auto& [name, det, ann] : expected) {
    CompileStats s = compile(name).result.stats;
    EXPECT_EQ(s.detectors, det) << name;
    EXPECT_EQ(s.observables, 1u) << name;
    EXPECT_EQ(s.annotations, ann) << name;
    EXPECT_EQ(count(compile(name).result.circuit).annotations(), ann) << name;
  }
}

}  // namespace
}  // namespace qtrack
