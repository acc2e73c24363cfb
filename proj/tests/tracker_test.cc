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

#include "qtrack/tracker.h"

#include <gtest/gtest.h>

#include <map>
#include <random>

#include "dense_oracle.h"

namespace qtrack {
namespace {

using P = PauliString;

std::vector<std::pair<P, Role>> z_init(size_t n) {
  std::vector<std::pair<P, Role>> rows;
  for (size_t q = 0; q < n; ++q) rows.push_back({P::single(n, q, 'Z'), Role::Stabilizer});
  return rows;
}

TEST(Tracker, RegistersFreshRows) {
  Tracker t(3);
  t.register_rows(z_init(3));
  EXPECT_EQ(t.rows().size(), 3u);
  for (const auto& r : t.rows()) EXPECT_TRUE(r.records.empty());
  EXPECT_EQ(t.check_invariants(), "");
}

TEST(Tracker, RejectsAnticommutingOrDependentRows) {
  Tracker t(2);
  t.register_rows({{P::from_text("Z_"), Role::Stabilizer}});
  EXPECT_THROW(t.register_rows({{P::from_text("X_"), Role::Stabilizer}}), InvalidInitialization);
  EXPECT_THROW(t.register_rows({{P::from_text("-Z_"), Role::Stabilizer}}), InvalidInitialization);
  EXPECT_THROW(t.register_rows({{P::from_text("_X"), Role::Stabilizer},
                                {P::from_text("_Z"), Role::Stabilizer}}),
               InvalidInitialization);
  EXPECT_EQ(t.rows().size(), 1u);
}

TEST(Tracker, CliffordBlockConjugatesRowsOnly) {
  Tracker t(4);
  t.register_rows({{P::from_text("XX__"), Role::Stabilizer},
                   {P::from_text("ZZ__"), Role::Stabilizer},
                   {P::from_text("__ZZ"), Role::Stabilizer},
                   {P::from_text("__Z_"), Role::Logical}});
  t.apply_clifford_block({});
  EXPECT_EQ(t.rows()[0].pauli, P::from_text("XX__"));
  t.apply_clifford_block({CliffordGate::two(GateKind::CX, 0, 2), CliffordGate::two(GateKind::CX, 1, 3)});
  EXPECT_EQ(t.rows()[0].pauli, P::from_text("XXXX"));
  EXPECT_EQ(t.rows()[3].pauli, P::from_text("Z_Z_"));
  std::vector<CliffordGate> hs;
  for (uint32_t q = 0; q < 4; ++q) hs.push_back(CliffordGate::one(GateKind::H, q));
  t.apply_clifford_block(hs);
  EXPECT_EQ(t.rows()[2].pauli, P::from_text("XXXX"));
  EXPECT_EQ(t.meas_counter(), 0u);
  for (const auto& r : t.rows()) EXPECT_TRUE(r.records.empty());
}

TEST(Tracker, BackPropagation) {
  const P za = P::single(2, 1, 'Z');
  EXPECT_EQ(Tracker::back_propagate({CliffordGate::two(GateKind::CX, 0, 1)}, za),
            P::from_text("ZZ"));
  EXPECT_EQ(Tracker::back_propagate({}, za), za);
  // Four data qubits 0..3 and ancilla 4 in a Z-check gadget.
  std::vector<CliffordGate> gadget;
  for (uint32_t q = 0; q < 4; ++q) gadget.push_back(CliffordGate::two(GateKind::CX, q, 4));
  P expect = P::from_text("ZZZZZ");
  EXPECT_EQ(Tracker::back_propagate(gadget, P::single(5, 4, 'Z')), expect);
  // Same for an X check dressed with H on the ancilla.
  std::vector<CliffordGate> xg{CliffordGate::one(GateKind::H, 4)};
  for (uint32_t q = 0; q < 4; ++q) xg.push_back(CliffordGate::two(GateKind::CX, 4, q));
  xg.push_back(CliffordGate::one(GateKind::H, 4));
  EXPECT_EQ(Tracker::back_propagate(xg, P::single(5, 4, 'Z')), P::from_text("XXXXZ"));
}

TEST(Tracker, CaseAThenCaseB) {
  Tracker t(2);
  t.register_rows(z_init(2));
  EXPECT_FALSE(t.process_mid_measurement(P::from_text("XX"), 0).has_value());
  auto det = t.process_mid_measurement(P::from_text("ZZ"), 1);
  ASSERT_TRUE(det.has_value());
  EXPECT_EQ(det->records, (RecordSet{1}));
  EXPECT_EQ(det->expected_parity, 0);
  t.write_back();
  auto again = t.process_mid_measurement(P::from_text("XX"), 2);
  ASSERT_TRUE(again.has_value());
  EXPECT_EQ(again->records, (RecordSet{0, 2}));
  auto neg = t.process_mid_measurement(P::from_text("-XX"), 3);
  ASSERT_TRUE(neg.has_value());
  EXPECT_EQ(neg->expected_parity, 1);
  EXPECT_THROW(t.process_mid_measurement(P::from_text("ZZ"), 9), TrackerError);
}

TEST(Tracker, WriteBackLeavesSingleRecords) {
  Tracker t(3);
  t.register_rows({{P::from_text("Z__"), Role::Stabilizer},
                   {P::from_text("_Z_"), Role::Stabilizer},
                   {P::from_text("__Z"), Role::Stabilizer}});
  t.process_mid_measurement(P::from_text("ZZ_"), 0);
  t.process_mid_measurement(P::from_text("_ZZ"), 1);
  t.write_back();
  ASSERT_EQ(t.rows().size(), 3u);
  EXPECT_EQ(t.rows()[0].records, (RecordSet{0}));
  EXPECT_EQ(t.rows()[1].records, (RecordSet{1}));
  EXPECT_EQ(t.rows()[2].role, Role::Logical);
  EXPECT_TRUE(t.rows()[2].records.empty());
  EXPECT_EQ(t.logical_dof_count(), 1u);
  EXPECT_EQ(t.buffered(), 0u);
  EXPECT_EQ(t.check_invariants(), "");
}

TEST(Tracker, RepetitionReadout) {
  Tracker t(3);
  t.register_rows(z_init(3));
  t.process_mid_measurement(P::from_text("ZZ_"), 0);
  t.process_mid_measurement(P::from_text("_ZZ"), 1);
  t.write_back();
  auto res = t.process_data_readout({{0, 'Z'}, {1, 'Z'}, {2, 'Z'}}, 2);
  ASSERT_EQ(res.detectors.size(), 2u);
  EXPECT_EQ(res.detectors[0].records, (RecordSet{0, 2, 3}));
  EXPECT_EQ(res.detectors[1].records, (RecordSet{1, 3, 4}));
  ASSERT_EQ(res.observables.size(), 1u);
  EXPECT_EQ(res.observables[0].observable_id, 0u);
  EXPECT_EQ(res.observables[0].records, (RecordSet{2}));
  EXPECT_TRUE(t.rows().empty());
  EXPECT_EQ(t.logical_dof_count(), 0u);
}

TEST(Tracker, RandomLogicalReadoutNeedsFlag) {
  Tracker t(1);
  t.register_rows({{P::from_text("Z"), Role::Logical}});
  EXPECT_THROW(t.process_data_readout({{0, 'X'}}, 0), NonDeterministicReadout);
  Tracker u(1);
  u.register_rows({{P::from_text("Z"), Role::Logical}});
  auto res = u.process_data_readout({{0, 'X', true}}, 0);
  EXPECT_TRUE(res.detectors.empty());
  EXPECT_TRUE(res.observables.empty());
}

TEST(Tracker, ResetThenReinitLooksFresh) {
  Tracker t(2);
  t.register_rows(z_init(2));
  t.process_data_readout({{0, 'Z'}, {1, 'Z'}}, 0);
  t.reset_records({0, 1});
  t.reset_records({});
  t.register_rows(z_init(2));
  EXPECT_EQ(t.rows().size(), 2u);
  EXPECT_EQ(t.meas_counter(), 2u);
}

TEST(Tracker, FastForwardShiftsRecords) {
  Tracker t(2);
  t.register_rows(z_init(2));
  t.process_mid_measurement(P::from_text("ZZ"), 0);
  t.write_back();
  TrackerState before = t.state();
  t.process_mid_measurement(P::from_text("ZZ"), 1);
  t.write_back();
  EXPECT_TRUE(t.equals_shifted(before, 0, 1));
  t.fast_forward(1, 10);
  EXPECT_EQ(t.meas_counter(), 12u);
  EXPECT_EQ(t.rows()[0].records, (RecordSet{11}));
}

// Random Clifford circuits with interleaved Pauli measurements, simulated on a
// dense state vector; every emitted parity must hold on every sampled branch.
struct DenseRun {
  size_t n;
  std::vector<oracle::cd> psi;
  std::vector<int> outcomes;
  std::mt19937_64* rng;

  void gate(const CliffordGate& g) {
    oracle::Matrix u(1);
    switch (g.kind) {
      case GateKind::CX: u = oracle::cx(n, g.a, g.b); break;
      case GateKind::CZ: u = oracle::cz(n, g.a, g.b); break;
      case GateKind::SWAP: u = oracle::swap(n, g.a, g.b); break;
      case GateKind::S_DAG: u = oracle::embed1(n, g.a, oracle::single('s')); break;
      default: u = oracle::embed1(n, g.a, oracle::single(gate_name(g.kind)[0]));
    }
    apply(u);
  }
  void apply(const oracle::Matrix& u) {
    std::vector<oracle::cd> out(psi.size());
    for (size_t r = 0; r < psi.size(); ++r)
      for (size_t c = 0; c < psi.size(); ++c) out[r] += u.at(r, c) * psi[c];
    psi = out;
  }
  void measure(const P& p) {
    std::string ops;
    for (size_t q = 0; q < n; ++q) ops.push_back(p.pauli_at(q));
    oracle::Matrix m = oracle::pauli(ops, p.phase);
    std::vector<oracle::cd> plus(psi.size());
    for (size_t r = 0; r < psi.size(); ++r) {
      oracle::cd acc = 0;
      for (size_t c = 0; c < psi.size(); ++c) acc += m.at(r, c) * psi[c];
      plus[r] = 0.5 * (psi[r] + acc);
    }
    double p0 = 0;
    for (auto v : plus) p0 += std::norm(v);
    int bit = std::uniform_real_distribution<double>(0, 1)(*rng) < p0 ? 0 : 1;
    if (p0 > 1 - 1e-9) bit = 0;
    if (p0 < 1e-9) bit = 1;
    double norm = bit == 0 ? p0 : 1 - p0;
    for (size_t r = 0; r < psi.size(); ++r) {
      oracle::cd v = bit == 0 ? plus[r] : psi[r] - plus[r];
      psi[r] = v / std::sqrt(norm);
    }
    outcomes.push_back(bit);
  }
};

TEST(TrackerProperty, EmittedParitiesHoldOnDenseSimulation) {
  std::mt19937_64 rng(2026);
  const GateKind kinds[] = {GateKind::H, GateKind::S, GateKind::S_DAG, GateKind::X,
                            GateKind::Z, GateKind::CX, GateKind::CZ, GateKind::SWAP};
  for (int trial = 0; trial < 150; ++trial) {
    const size_t n = 2 + rng() % 4;
    // The tracker sees an identical program on every sample.
    struct Step {
      int kind;  // 0 gates, 1 measure, 2 write back
      std::vector<CliffordGate> gates;
      P pauli;
    };
    std::vector<Step> program;
    for (int s = 0; s < 14; ++s) {
      int k = rng() % 5;
      if (k <= 1) {
        Step st{0, {}, {}};
        for (int g = 0; g < 3; ++g) {
          GateKind kind = kinds[rng() % 8];
          uint32_t a = rng() % n;
          if (is_two_qubit(kind)) {
            uint32_t b = (a + 1 + rng() % (n - 1)) % n;
            st.gates.push_back(CliffordGate::two(kind, a, b));
          } else {
            st.gates.push_back(CliffordGate::one(kind, a));
          }
        }
        program.push_back(st);
      } else if (k <= 3) {
        P p(n);
        while (p.is_identity()) {
          for (size_t q = 0; q < n; ++q) p.set(q, rng() % 3 == 0, rng() % 3 == 0);
        }
        p.phase = (rng() & 1) * 2;
        program.push_back(Step{1, {}, p});
      } else {
        program.push_back(Step{2, {}, {}});
      }
    }
    Tracker t(n);
    t.register_rows(z_init(n));
    std::vector<DetectorDecl> dets;
    uint64_t idx = 0;
    for (const auto& st : program) {
      if (st.kind == 0) {
        t.apply_clifford_block(st.gates);
      } else if (st.kind == 1) {
        if (auto d = t.process_mid_measurement(st.pauli, idx)) dets.push_back(*d);
        ++idx;
      } else {
        t.write_back();
      }
      ASSERT_EQ(t.check_invariants(), "");
    }
    std::vector<ReadoutItem> items;
    for (uint32_t q = 0; q < n; ++q) items.push_back({q, rng() & 1 ? 'X' : 'Z', true});
    ReadoutResult res = t.process_data_readout(items, idx);
    for (const auto& d : res.detectors) dets.push_back(d);

    for (int sample = 0; sample < 8; ++sample) {
      DenseRun run{n, std::vector<oracle::cd>(size_t{1} << n, 0), {}, &rng};
      run.psi[0] = 1;
      for (const auto& st : program) {
        if (st.kind == 0) {
          for (const auto& g : st.gates) run.gate(g);
        } else if (st.kind == 1) {
          run.measure(st.pauli);
        }
      }
      for (const auto& it : items) run.measure(P::single(n, it.qubit, it.basis));
      for (const auto& d : dets) {
        int par = 0;
        for (uint64_t r : d.records) par ^= run.outcomes[r];
        ASSERT_EQ(par, d.expected_parity) << "trial " << trial;
      }
      for (const auto& o : res.observables) {
        int par = 0;
        for (uint64_t r : o.records) par ^= run.outcomes[r];
        ASSERT_EQ(par, o.expected_parity) << "trial " << trial;
      }
    }
  }
}

}  // namespace
}  // namespace qtrack
