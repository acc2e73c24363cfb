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

#include "qtrack/compiler.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "structure_oracle.h"

namespace qtrack {
namespace {

CompileResult memory(Family f, int d, Basis b, int rounds, CompileOptions opt = {}) {
  ProtocolCompiler c(opt);
  size_t p = c.add_patch(build_patch(f, d));
  c.initialize({{p, b}});
  c.syndrome_extraction(rounds);
  c.data_readout({{p, b}});
  return c.finish();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

using CoordTuple = std::vector<std::pair<double, double>>;

struct CoordView {
  const AnnotatedCircuit& c;
  std::pair<double, double> at(uint32_t q) const {
    const auto& v = c.qubit_coords.at(q);
    return {v.at(0), v.at(1)};
  }
  CoordTuple list(const std::vector<uint32_t>& qs) const {
    CoordTuple out;
    for (uint32_t q : qs) out.push_back(at(q));
    return out;
  }
};

std::string describe(const Instruction& i) { return op_name(i.op); }

// Compares two instruction lists up to qubit relabelling through coordinates.
// Reset lines compare as sets, gate lines as multisets of gate tuples and
// runs of detectors as multisets.
void expect_same(const CoordView& a, const std::vector<Instruction>& la, const CoordView& b,
                 const std::vector<Instruction>& lb, const std::string& where) {
  size_t i = 0, j = 0;
  while (i < la.size() && j < lb.size()) {
    const Instruction& x = la[i];
    const Instruction& y = lb[j];
    ASSERT_EQ(x.op, y.op) << where << " at " << i << ": " << describe(x) << " vs " << describe(y);
    if (x.op == Op::DETECTOR) {
      std::vector<std::pair<std::vector<double>, std::vector<uint32_t>>> da, db;
      for (; i < la.size() && la[i].op == Op::DETECTOR; ++i) {
        auto t = la[i].targets;
        std::sort(t.begin(), t.end());
        da.emplace_back(la[i].args, t);
      }
      for (; j < lb.size() && lb[j].op == Op::DETECTOR; ++j) {
        auto t = lb[j].targets;
        std::sort(t.begin(), t.end());
        db.emplace_back(lb[j].args, t);
      }
      std::sort(da.begin(), da.end());
      std::sort(db.begin(), db.end());
      EXPECT_EQ(da, db) << where;
      continue;
    }
    if (x.op == Op::REPEAT) {
      EXPECT_EQ(x.repeat_count, y.repeat_count) << where;
      expect_same(a, x.body, b, y.body, where + "/repeat");
    } else if (is_reset_op(x.op) && !is_measurement_op(x.op)) {
      auto sa = a.list(x.targets), sb = b.list(y.targets);
      std::sort(sa.begin(), sa.end());
      std::sort(sb.begin(), sb.end());
      EXPECT_EQ(sa, sb) << where << " reset " << i;
    } else if (is_unitary_op(x.op)) {
      const size_t w = is_two_qubit_op(x.op) ? 2 : 1;
      std::vector<CoordTuple> ga, gb;
      for (size_t k = 0; k < x.targets.size(); k += w) {
        ga.push_back(a.list({x.targets.begin() + k, x.targets.begin() + k + w}));
      }
      for (size_t k = 0; k < y.targets.size(); k += w) {
        gb.push_back(b.list({y.targets.begin() + k, y.targets.begin() + k + w}));
      }
      std::sort(ga.begin(), ga.end());
      std::sort(gb.begin(), gb.end());
      EXPECT_EQ(ga, gb) << where << " gate line " << i;
    } else if (is_measurement_op(x.op)) {
      EXPECT_EQ(a.list(x.targets), b.list(y.targets)) << where << " measure " << i;
    } else {
      EXPECT_EQ(x.args, y.args) << where << " " << describe(x);
      EXPECT_EQ(x.targets, y.targets) << where << " " << describe(x);
    }
    ++i;
    ++j;
  }
  EXPECT_EQ(i, la.size()) << where;
  EXPECT_EQ(j, lb.size()) << where;
}

class GoldenTest : public ::testing::TestWithParam<std::tuple<int, char>> {};

TEST_P(GoldenTest, RotatedMemoryMatchesReferenceInCoordinateSpace) {
  auto [d, basis] = GetParam();
  std::string path = std::string(QTRACK_GOLDEN_DIR) + "/rotated_memory_" +
                     static_cast<char>(basis) + "_d" + std::to_string(d) + ".stim";
  AnnotatedCircuit ref = parse_text(read_file(path));
  ASSERT_FALSE(ref.instructions.empty()) << path;
  CompileResult ours =
      memory(Family::RotatedSurface, d, basis == 'z' ? Basis::Z : Basis::X, d);
  expect_same(CoordView{ours.circuit}, ours.circuit.instructions, CoordView{ref},
              ref.instructions, "d=" + std::to_string(d));
  EXPECT_EQ(count(ours.circuit).detectors, count(ref).detectors);
  EXPECT_EQ(count(ours.circuit).measurements, count(ref).measurements);
}

INSTANTIATE_TEST_SUITE_P(Distances, GoldenTest,
                         ::testing::Combine(::testing::Values(3, 5, 7),
                                            ::testing::Values('z', 'x')));

TEST(Compiler, RotatedDetectorCounts) {
  EXPECT_EQ(memory(Family::RotatedSurface, 3, Basis::Z, 3).stats.detectors, 24u);
  EXPECT_EQ(memory(Family::RotatedSurface, 5, Basis::Z, 5).stats.detectors, 120u);
  EXPECT_EQ(memory(Family::RotatedSurface, 7, Basis::Z, 7).stats.detectors, 336u);
}

TEST(Compiler, RepeatMatchesForcedExplicitRounds) {
  for (Family f : {Family::Repetition, Family::RotatedSurface, Family::UnrotatedSurface,
                   Family::Toric}) {
    for (Basis b : {Basis::Z, Basis::X}) {
      if (f == Family::Repetition && b == Basis::X) continue;
      CompileOptions forced;
      forced.use_repeat = false;
      CompileResult r = memory(f, 3, b, 6);
      CompileResult e = memory(f, 3, b, 6, forced);
      EXPECT_EQ(flatten(r.circuit.instructions), flatten(e.circuit.instructions))
          << family_name(f);
      bool has_repeat = std::any_of(r.circuit.instructions.begin(), r.circuit.instructions.end(),
                                    [](const Instruction& i) { return i.op == Op::REPEAT; });
      EXPECT_TRUE(has_repeat) << family_name(f);
      EXPECT_LT(r.circuit.instructions.size(), e.circuit.instructions.size());
    }
  }
}

TEST(Compiler, SingleRoundHasNoRepeat) {
  CompileResult r = memory(Family::RotatedSurface, 3, Basis::Z, 2);
  for (const auto& i : r.circuit.instructions) EXPECT_NE(i.op, Op::REPEAT);
}

TEST(Compiler, DetectorCountsFollowCheckRanks) {
  for (Family f : {Family::Repetition, Family::RotatedSurface, Family::UnrotatedSurface,
                   Family::Toric}) {
    for (int d : {3, 4, 5}) {
      QecPatch p = build_patch(f, d);
      oracle::MemoryCount want = oracle::z_memory_count(p, d);
      CompileResult res = memory(f, d, Basis::Z, d);
      EXPECT_EQ(res.stats.detectors, want.expected) << family_name(f) << d;
      EXPECT_EQ(res.stats.observables, p.num_logical());
      if (f == Family::Toric) {
        EXPECT_EQ(want.nullity, 2u);
        EXPECT_GT(res.stats.detectors, want.pairwise_only);
      }
    }
  }
}

TEST(Compiler, RrefWorkIsIndependentOfRoundCount) {
  uint64_t s10 = memory(Family::RotatedSurface, 5, Basis::Z, 10).stats.rref_solves;
  uint64_t s100 = memory(Family::RotatedSurface, 5, Basis::Z, 100).stats.rref_solves;
  EXPECT_LE(s100, 3 * s10);
}

TEST(Compiler, TextRoundTrip) {
  CompileResult r = memory(Family::UnrotatedSurface, 3, Basis::X, 4);
  EXPECT_EQ(parse_text(emit_text(r.circuit)), r.circuit);
}

TEST(Compiler, LifecycleErrors) {
  {
    ProtocolCompiler c;
    EXPECT_THROW(c.syndrome_extraction(1), CompileError);
  }
  {
    ProtocolCompiler c;
    size_t p = c.add_patch(build_patch(Family::RotatedSurface, 3));
    EXPECT_THROW(c.data_readout({{p, Basis::Z}}), CompileError);
    c.initialize({{p, Basis::Z}});
    EXPECT_THROW(c.initialize({{p, Basis::Z}}), CompileError);
    c.syndrome_extraction(1);
    EXPECT_THROW(c.finish(), CompileError);
  }
  {
    ProtocolCompiler c;
    QecPatch a = build_patch(Family::UnrotatedSurface, 3);
    QecPatch b = build_patch(Family::UnrotatedSurface, 3,
                             coupler_partner_origin(a, CouplerBasis::ZZ, 0));
    size_t pa = c.add_patch(a), pb = c.add_patch(b);
    size_t k = c.add_coupler(pa, pb, CouplerBasis::ZZ, 0);
    EXPECT_THROW(c.toggle_coupler(k, true), LifecycleError);
    c.initialize({{pa, Basis::X}, {pb, Basis::X}});
    c.toggle_coupler(k, true);
    EXPECT_THROW(c.toggle_coupler(k, false), CompileError);
  }
}

TEST(Compiler, RandomReadoutNeedsDeclaration) {
  ProtocolCompiler c;
  size_t p = c.add_patch(build_patch(Family::RotatedSurface, 3));
  c.initialize({{p, Basis::Z}});
  c.syndrome_extraction(2);
  EXPECT_THROW(c.data_readout({{p, Basis::X}}), NonDeterministicReadout);

  ProtocolCompiler ok;
  size_t q = ok.add_patch(build_patch(Family::RotatedSurface, 3));
  ok.initialize({{q, Basis::Z}});
  ok.syndrome_extraction(2);
  ok.data_readout({{q, Basis::X, true}});
  CompileResult r = ok.finish();
  EXPECT_EQ(r.stats.observables, 0u);
}

TEST(Compiler, LatticeSurgeryMergeAndSplit) {
  ProtocolCompiler c;
  QecPatch a = build_patch(Family::UnrotatedSurface, 3);
  QecPatch b = build_patch(Family::UnrotatedSurface, 3,
                           coupler_partner_origin(a, CouplerBasis::ZZ, 0));
  size_t pa = c.add_patch(a), pb = c.add_patch(b);
  size_t k = c.add_coupler(pa, pb, CouplerBasis::ZZ, 0);
  c.initialize({{pa, Basis::X}, {pb, Basis::Z}});
  c.syndrome_extraction(3);
  EXPECT_EQ(c.tracker().logical_dof_count(), 2u);
  c.toggle_coupler(k, true);
  c.syndrome_extraction(3);
  EXPECT_EQ(c.tracker().logical_dof_count(), 1u);
  c.toggle_coupler(k, false);
  c.syndrome_extraction(3);
  c.data_readout({{pb, Basis::X, true}, {pa, Basis::Z}});
  CompileResult r = c.finish();
  ASSERT_EQ(r.stats.observables, 1u);
  EXPECT_EQ(c.tracker().check_invariants(), "");
}

TEST(Compiler, TransversalCnotBell) {
  ProtocolCompiler c;
  QecPatch a = build_patch(Family::RotatedSurface, 3);
  QecPatch b = build_patch(Family::RotatedSurface, 3, {8, 0});
  size_t pa = c.add_patch(a), pb = c.add_patch(b);
  c.initialize({{pa, Basis::X}, {pb, Basis::Z}});
  c.syndrome_extraction(3);
  c.unitary_block(transversal_block(TransversalKind::CNOT, a, &b));
  c.syndrome_extraction(1);
  c.data_readout({{pb, Basis::Z, true}});
  EXPECT_EQ(c.tracker().logical_dof_count(), 1u);
  c.syndrome_extraction(3);
  c.data_readout({{pa, Basis::Z}});
  CompileResult r = c.finish();
  EXPECT_EQ(r.stats.observables, 1u);
}

TEST(Compiler, UnitaryOnUntrackedQubitIsRejected) {
  ProtocolCompiler c;
  size_t p = c.add_patch(build_patch(Family::RotatedSurface, 3));
  c.initialize({{p, Basis::Z}});
  EXPECT_THROW(c.unitary_gates({CliffordGate::one(GateKind::H, 0)}), CompileError);
}

}  // namespace
}  // namespace qtrack
