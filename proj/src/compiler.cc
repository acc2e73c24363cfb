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

#include <algorithm>
#include <chrono>
#include <set>

namespace qtrack {
namespace {

Op gate_op(GateKind k) {
  switch (k) {
    case GateKind::H: return Op::H;
    case GateKind::S: return Op::S;
    case GateKind::S_DAG: return Op::S_DAG;
    case GateKind::X: return Op::X;
    case GateKind::Y: return Op::Y;
    case GateKind::Z: return Op::Z;
    case GateKind::CX: return Op::CX;
    case GateKind::CZ: return Op::CZ;
    case GateKind::SWAP: return Op::SWAP;
  }
  return Op::H;
}

Instruction simple(Op op, std::vector<uint32_t> targets = {}, std::vector<double> args = {}) {
  Instruction ins;
  ins.op = op;
  ins.targets = std::move(targets);
  ins.args = std::move(args);
  return ins;
}

// Packs gates into instruction lines, opening a new TICK layer whenever a
// gate touches a qubit already used in the current layer.
void emit_gate_lines(std::vector<Instruction>& out, const std::vector<CliffordGate>& gates,
                     bool leading_tick) {
  std::set<uint32_t> used;
  if (leading_tick) out.push_back(simple(Op::TICK));
  Instruction* line = nullptr;
  for (const CliffordGate& g : gates) {
    const bool two = is_two_qubit(g.kind);
    bool clash = used.count(g.a) || (two && used.count(g.b));
    if (clash) {
      out.push_back(simple(Op::TICK));
      used.clear();
      line = nullptr;
    }
    if (line == nullptr || line->op != gate_op(g.kind)) {
      out.push_back(simple(gate_op(g.kind)));
      line = &out.back();
    }
    line->targets.push_back(g.a);
    used.insert(g.a);
    if (two) {
      line->targets.push_back(g.b);
      used.insert(g.b);
    }
  }
}

std::vector<uint32_t> gate_qubits(const std::vector<CliffordGate>& gates) {
  std::vector<uint32_t> qs;
  for (const auto& g : gates) {
    qs.push_back(g.a);
    if (is_two_qubit(g.kind)) qs.push_back(g.b);
  }
  return qs;
}

}  // namespace

ProtocolCompiler::ProtocolCompiler(CompileOptions options) : options_(options) {}

size_t ProtocolCompiler::add_patch(const QecPatch& patch, const std::string& name) {
  if (finished_) throw CompileError("compiler already finished");
  size_t id = system_.add_patch(patch, name);
  tracker_.resize(system_.num_qubits());
  clean_.resize(system_.num_qubits(), false);
  return id;
}

size_t ProtocolCompiler::add_coupler(size_t a, size_t b, CouplerBasis basis, int r_inter) {
  size_t id = system_.add_coupler(a, b, basis, r_inter);
  coupler_rounds_.resize(system_.num_couplers(), 0);
  return id;
}

void ProtocolCompiler::mark_dirty(const std::vector<uint32_t>& qubits) {
  for (uint32_t q : qubits) clean_[q] = false;
}

void ProtocolCompiler::emit_reset(Op op, const std::vector<uint32_t>& qubits) {
  if (qubits.empty()) return;
  if (!out_.empty() && out_.back().op == op) {
    auto& t = out_.back().targets;
    t.insert(t.end(), qubits.begin(), qubits.end());
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
  } else {
    std::vector<uint32_t> t = qubits;
    std::sort(t.begin(), t.end());
    out_.push_back(simple(op, std::move(t)));
  }
  for (uint32_t q : qubits) clean_[q] = (op == Op::R);
}

void ProtocolCompiler::emit_detectors(std::vector<Instruction>& out,
                                      const std::vector<DetectorDecl>& dets) {
  const uint64_t now = tracker_.meas_counter();
  for (const auto& d : dets) {
    Instruction ins = simple(Op::DETECTOR);
    for (auto it = d.records.rbegin(); it != d.records.rend(); ++it) {
      ins.targets.push_back(static_cast<uint32_t>(now - *it));
    }
    ins.expected_parity = d.expected_parity;
    if (options_.emit_coords && d.coords) {
      ins.args = {static_cast<double>(d.coords->x), static_cast<double>(d.coords->y), current_t()};
    }
    out.push_back(std::move(ins));
  }
}

void ProtocolCompiler::emit_observables(std::vector<Instruction>& out,
                                        const std::vector<ObservableDecl>& obs) {
  const uint64_t now = tracker_.meas_counter();
  for (const auto& o : obs) {
    Instruction ins = simple(Op::OBSERVABLE_INCLUDE, {}, {static_cast<double>(o.observable_id)});
    for (auto it = o.records.rbegin(); it != o.records.rend(); ++it) {
      ins.targets.push_back(static_cast<uint32_t>(now - *it));
    }
    ins.expected_parity = o.expected_parity;
    out.push_back(std::move(ins));
  }
}

void ProtocolCompiler::initialize(const std::vector<InitTarget>& targets) {
  if (finished_) throw CompileError("compiler already finished");
  ++atomic_ops_;
  std::vector<uint32_t> z_qubits;
  std::vector<uint32_t> x_qubits;
  std::vector<std::pair<PauliString, Role>> rows;
  std::set<size_t> seen;
  for (const auto& t : targets) {
    if (!seen.insert(t.patch).second) throw CompileError("patch initialized twice in one op");
    if (t.patch >= system_.num_patches()) throw CompileError("unknown patch");
    if (system_.patch_state(t.patch) != PatchState::Added) {
      throw CompileError("patch " + system_.patch_name(t.patch) + " is not awaiting init");
    }
    const QecPatch& patch = system_.patch(t.patch);
    const auto& data = system_.patch_data(t.patch);
    const char b = t.basis == Basis::Z ? 'Z' : 'X';
    (t.basis == Basis::Z ? z_qubits : x_qubits).insert(
        (t.basis == Basis::Z ? z_qubits : x_qubits).end(), data.begin(), data.end());

    // Logicals first, then single-qubit facts that are independent of them.
    RrefBasis basis(data.size());
    std::vector<PauliString> logicals;
    for (size_t k = 0; k < patch.num_logical(); ++k) {
      logicals.push_back(patch.logical(b, k));
      basis.add(logicals.back());
    }
    for (size_t j = 0; j < data.size(); ++j) {
      PauliString s = PauliString::single(data.size(), j, b);
      if (basis.add(s)) rows.emplace_back(system_.lift(t.patch, s), Role::Stabilizer);
    }
    for (const auto& l : logicals) rows.emplace_back(system_.lift(t.patch, l), Role::Logical);
  }
  for (const auto& t : targets) system_.set_patch_state(t.patch, PatchState::Active);
  tracker_.resize(system_.num_qubits());
  tracker_.register_rows(rows);
  emit_reset(Op::R, z_qubits);
  emit_reset(Op::RX, x_qubits);
}

ProtocolCompiler::Round ProtocolCompiler::process_round() {
  SystemSnapshot snap = system_.snapshot();
  if (snap.checks.empty()) throw CompileError("syndrome extraction with no active checks");
  const size_t n = system_.num_qubits();
  tracker_.resize(n);
  clean_.resize(n, false);

  std::vector<IndexedCheck> indexed;
  for (const auto& c : snap.checks) indexed.push_back(c.indexed);
  SeSchedule sched = build_se_schedule(indexed, options_.variant);
  std::vector<CliffordGate> unitary = sched.unitary();

  Round round;
  for (uint32_t a : snap.ancillas) {
    if (!clean_[a]) round.reset.push_back(a);
  }
  std::vector<bool> is_anc(n, false);
  for (uint32_t a : snap.ancillas) is_anc[a] = true;

  for (const auto& layer : sched.ticks) {
    switch (layer.kind) {
      case SeLayer::Reset:
        break;
      case SeLayer::Hadamard:
      case SeLayer::Cnot:
        emit_gate_lines(round.body, layer.gates, true);
        break;
      case SeLayer::Measure:
        round.body.push_back(simple(Op::TICK));
        round.body.push_back(simple(Op::MR, layer.qubits));
        break;
    }
  }
  if (rounds_done_ > 0) {
    round.body.push_back(simple(Op::SHIFT_COORDS, {}, {0, 0, 1}));
    ++shifts_;
  }

  const uint64_t start = tracker_.meas_counter();
  std::vector<DetectorDecl> dets;
  for (const auto& c : snap.checks) {
    const uint32_t a = c.indexed.ancilla;
    PauliString p = Tracker::back_propagate(unitary, PauliString::single(n, a, 'Z'));
    for (size_t q : p.support()) {
      if (!is_anc[q]) continue;
      if (p.pauli_at(q) != 'Z') {
        throw CompileError("ancilla component is not Z after back-propagation");
      }
      p.set(q, false, false);
    }
    PauliString want(n);
    for (int64_t q : c.indexed.dirs) {
      if (q < 0) continue;
      if (c.check.type == CheckType::X) {
        want.set(q, true, false);
      } else {
        want.set(q, false, true);
      }
    }
    if (!p.same_bits(want)) {
      throw CompileError("schedule does not measure the check at ancilla " +
                         std::to_string(c.check.ancilla.x) + "," +
                         std::to_string(c.check.ancilla.y));
    }
    auto det = tracker_.process_mid_measurement(p, tracker_.meas_counter(), c.check.ancilla);
    if (det) dets.push_back(std::move(*det));
  }
  tracker_.write_back();
  round.measurements = tracker_.meas_counter() - start;

  if (dets.size() != round.measurements) round.pairwise = false;
  for (const auto& d : dets) {
    if (d.records.size() != 2 || d.records[0] + round.measurements != d.records[1] ||
        d.records[1] < start) {
      round.pairwise = false;
    }
  }
  emit_detectors(round.body, dets);
  for (uint32_t a : snap.ancillas) clean_[a] = true;
  mark_dirty(snap.data);
  return round;
}

void ProtocolCompiler::syndrome_extraction(int rounds) {
  if (finished_) throw CompileError("compiler already finished");
  if (rounds < 0) throw CompileError("negative round count");
  ++atomic_ops_;
  for (int k = 1; k <= rounds; ++k) {
    const uint64_t remaining = static_cast<uint64_t>(rounds - k + 1);
    const bool try_repeat = options_.use_repeat && k >= 2 && remaining >= 2 && rounds_done_ > 0;
    TrackerState before;
    if (try_repeat) before = tracker_.state();
    const uint64_t start = tracker_.meas_counter();
    Round r = process_round();
    if (try_repeat && r.pairwise && r.reset.empty() &&
        start >= r.measurements &&
        tracker_.equals_shifted(before, start - r.measurements, r.measurements)) {
      Instruction rep = simple(Op::REPEAT);
      rep.repeat_count = remaining;
      rep.body = std::move(r.body);
      out_.push_back(std::move(rep));
      tracker_.fast_forward(start, (remaining - 1) * r.measurements);
      rounds_done_ += remaining;
      shifts_ += remaining - 1;
      for (size_t c = 0; c < coupler_rounds_.size(); ++c) {
        if (system_.coupler_active(c)) coupler_rounds_[c] += remaining;
      }
      return;
    }
    emit_reset(Op::R, r.reset);
    for (auto& ins : r.body) out_.push_back(std::move(ins));
    ++rounds_done_;
    for (size_t c = 0; c < coupler_rounds_.size(); ++c) {
      if (system_.coupler_active(c)) ++coupler_rounds_[c];
    }
  }
}

void ProtocolCompiler::unitary_block(const std::vector<CoordGate>& gates) {
  std::vector<CliffordGate> g;
  g.reserve(gates.size());
  for (const auto& cg : gates) {
    if (is_two_qubit(cg.kind)) {
      g.push_back(CliffordGate::two(cg.kind, system_.index_of(cg.a), system_.index_of(cg.b)));
    } else {
      g.push_back(CliffordGate::one(cg.kind, system_.index_of(cg.a)));
    }
  }
  unitary_gates(g);
}

void ProtocolCompiler::unitary_gates(const std::vector<CliffordGate>& gates) {
  if (finished_) throw CompileError("compiler already finished");
  ++atomic_ops_;
  if (gates.empty()) return;
  std::vector<uint32_t> qs = gate_qubits(gates);
  for (uint32_t q : qs) {
    if (!tracker_.is_tracked(q)) {
      throw CompileError("unitary block touches untracked qubit " + std::to_string(q));
    }
  }
  tracker_.apply_clifford_block(gates);
  emit_gate_lines(out_, gates, true);
  mark_dirty(qs);
}

void ProtocolCompiler::readout_qubits(
    const std::vector<std::pair<std::vector<uint32_t>, ReadoutTarget>>& groups) {
  std::vector<ReadoutItem> items;
  for (const auto& [qubits, t] : groups) {
    for (uint32_t q : qubits) {
      items.push_back({q, t.basis == Basis::Z ? 'Z' : 'X', t.allow_random});
    }
  }
  if (items.empty()) return;
  if (!out_.empty() && is_unitary_op(out_.back().op)) out_.push_back(simple(Op::TICK));
  const uint64_t i0 = tracker_.meas_counter();
  ReadoutResult res = tracker_.process_data_readout(items, i0);
  for (const auto& it : items) {
    Op op = it.basis == 'Z' ? Op::M : Op::MX;
    if (out_.empty() || out_.back().op != op) out_.push_back(simple(op));
    out_.back().targets.push_back(it.qubit);
    clean_[it.qubit] = false;
  }
  emit_detectors(out_, res.detectors);
  emit_observables(out_, res.observables);
  std::vector<uint32_t> all;
  for (const auto& it : items) all.push_back(it.qubit);
  tracker_.reset_records(all);
}

void ProtocolCompiler::toggle_coupler(size_t coupler, bool on) {
  if (finished_) throw CompileError("compiler already finished");
  ++atomic_ops_;
  if (coupler >= system_.num_couplers()) throw CompileError("unknown coupler");
  const CouplerBasis basis = system_.coupler(coupler).basis;
  if (on) {
    system_.toggle_coupler(coupler, true);
    const size_t n = system_.num_qubits();
    tracker_.resize(n);
    clean_.resize(n, false);
    const auto& seam = system_.coupler_data(coupler);
    const char b = basis == CouplerBasis::ZZ ? 'X' : 'Z';
    std::vector<std::pair<PauliString, Role>> rows;
    for (uint32_t q : seam) rows.emplace_back(PauliString::single(n, q, b), Role::Stabilizer);
    tracker_.register_rows(rows);
    emit_reset(basis == CouplerBasis::ZZ ? Op::RX : Op::R, seam);
    coupler_rounds_[coupler] = 0;
  } else {
    if (!system_.coupler_active(coupler)) throw CompileError("coupler is not active");
    if (coupler_rounds_[coupler] == 0) {
      throw CompileError("coupler deactivated without an intervening syndrome round");
    }
    ReadoutTarget t{0, basis == CouplerBasis::ZZ ? Basis::X : Basis::Z, false};
    readout_qubits({{system_.coupler_data(coupler), t}});
    system_.toggle_coupler(coupler, false);
  }
}

void ProtocolCompiler::data_readout(const std::vector<ReadoutTarget>& targets) {
  if (finished_) throw CompileError("compiler already finished");
  ++atomic_ops_;
  std::vector<std::pair<std::vector<uint32_t>, ReadoutTarget>> groups;
  std::set<size_t> seen;
  for (const auto& t : targets) {
    if (t.patch >= system_.num_patches()) throw CompileError("unknown patch");
    if (!seen.insert(t.patch).second) throw CompileError("patch read out twice in one op");
    if (system_.patch_state(t.patch) != PatchState::Active) {
      throw CompileError("patch " + system_.patch_name(t.patch) + " is not live");
    }
    groups.emplace_back(system_.patch_data(t.patch), t);
  }
  readout_qubits(groups);
  for (const auto& t : targets) system_.set_patch_state(t.patch, PatchState::Retired);
}

CompileResult ProtocolCompiler::finish() {
  if (finished_) throw CompileError("compiler already finished");
  finished_ = true;
  if (size_t dof = tracker_.logical_dof_count(); dof != 0) {
    throw CompileError(std::to_string(dof) + " logical degree(s) of freedom left unmeasured");
  }
  CompileResult res;
  const auto& coords = system_.coords();
  if (options_.emit_coords) {
    for (uint32_t q = 0; q < coords.size(); ++q) {
      res.circuit.qubit_coords[q] = {static_cast<double>(coords[q].x),
                                     static_cast<double>(coords[q].y)};
    }
  }
  res.circuit.instructions = std::move(out_);
  validate_records(res.circuit);
  CircuitCounts c = count(res.circuit);
  res.stats.qubits = coords.size();
  res.stats.detectors = c.detectors;
  res.stats.observables = c.observables;
  res.stats.annotations = c.annotations();
  res.stats.atomic_ops = atomic_ops_;
  res.stats.rref_solves = tracker_.rref_solve_count();
  return res;
}

}  // namespace qtrack
