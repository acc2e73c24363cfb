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

#include <algorithm>
#include <unordered_map>

namespace qtrack {
namespace {

std::string qubit_list(const std::vector<size_t>& qs) {
  std::string s;
  for (size_t q : qs) s += (s.empty() ? "" : ",") + std::to_string(q);
  return s;
}

// Bits-only product, used for destabilizers whose phase is irrelevant.
void mul_bits(PauliString& a, const PauliString& b) {
  for (size_t w = 0; w < a.xs.size(); ++w) {
    a.xs[w] ^= b.xs[w];
    a.zs[w] ^= b.zs[w];
  }
}

void mul_row(TrackedRow& a, const TrackedRow& b) {
  a.pauli.mul_right(b.pauli);
  xor_records(a.records, b.records);
}

uint8_t parity_of_phase(uint8_t phase, const char* what) {
  if (phase & 1) throw TrackerError(std::string("non-Hermitian product in ") + what);
  return phase >> 1;
}

}  // namespace

void xor_records(RecordSet& a, const RecordSet& b) {
  if (b.empty()) return;
  RecordSet out;
  out.reserve(a.size() + b.size());
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(),
                                std::back_inserter(out));
  a.swap(out);
}

Tracker::Tracker(size_t num_qubits) { resize(num_qubits); }

void Tracker::resize(size_t num_qubits) {
  if (num_qubits < n_) throw DimensionError("tracker cannot shrink");
  n_ = num_qubits;
  tracked_.resize(n_, false);
  for (auto& r : rows_) r.pauli.resize(n_);
  for (auto& r : shadows_) r.pauli.resize(n_);
  for (auto& d : destab_) d.resize(n_);
  for (auto& b : buf_) b.pauli.resize(n_);
}

size_t Tracker::num_tracked() const {
  return static_cast<size_t>(std::count(tracked_.begin(), tracked_.end(), true));
}

void Tracker::register_rows(const std::vector<std::pair<PauliString, Role>>& rows) {
  RrefBasis basis(n_);
  for (const auto& r : rows_) basis.add(r.pauli);
  for (size_t i = 0; i < rows.size(); ++i) {
    const PauliString& p = rows[i].first;
    if (p.n != n_) throw DimensionError("registered row has wrong qubit count");
    if (!p.is_hermitian()) throw InvalidInitialization("registered row is not Hermitian");
    for (const auto& r : rows_) {
      if (!commutes(r.pauli, p)) {
        throw InvalidInitialization("row " + p.str() + " anticommutes with " + r.pauli.str());
      }
    }
    for (size_t j = 0; j < i; ++j) {
      if (!commutes(rows[j].first, p)) {
        throw InvalidInitialization("registered rows anticommute: " + p.str());
      }
    }
    if (!basis.add(p)) throw InvalidInitialization("registered row is dependent: " + p.str());
  }
  for (const auto& [p, role] : rows) {
    for (size_t q : p.support()) tracked_[q] = true;
    rows_.push_back(TrackedRow{p, {}, role, std::nullopt});
  }
  factored_ = false;
}

void Tracker::apply_clifford_block(const std::vector<CliffordGate>& block) {
  for (const auto& g : block) {
    if (g.a >= n_ || (is_two_qubit(g.kind) && g.b >= n_)) {
      throw DimensionError("gate outside tracker range");
    }
    for (auto& r : rows_) conjugate_in_place(r.pauli, g);
    for (auto& r : shadows_) conjugate_in_place(r.pauli, g);
    for (auto& d : destab_) conjugate_in_place(d, g);
    for (auto& b : buf_) conjugate_in_place(b.pauli, g);
    if (g.kind == GateKind::SWAP) {
      bool ta = tracked_[g.a];
      tracked_[g.a] = tracked_[g.b];
      tracked_[g.b] = ta;
    }
  }
}

PauliString Tracker::back_propagate(const std::vector<CliffordGate>& block,
                                    const PauliString& terminal) {
  PauliString p = terminal;
  for (auto it = block.rbegin(); it != block.rend(); ++it) {
    conjugate_in_place(p, it->inverse());
  }
  return p;
}

// Destabilizers from the inverse of the pivot block of the swapped row matrix.
void Tracker::refactor() {
  const size_t m = rows_.size();
  const size_t cw = words_for(2 * n_);
  const size_t tw = words_for(m);
  std::vector<std::vector<uint64_t>> u(m), t(m);
  for (size_t i = 0; i < m; ++i) {
    const PauliString& s = rows_[i].pauli;
    u[i].assign(cw, 0);
    for (size_t q = 0; q < n_; ++q) {
      if (s.z(q)) u[i][q >> 6] |= uint64_t{1} << (q & 63);
      if (s.x(q)) u[i][(n_ + q) >> 6] |= uint64_t{1} << ((n_ + q) & 63);
    }
    t[i].assign(tw, 0);
    t[i][i >> 6] |= uint64_t{1} << (i & 63);
  }
  std::vector<size_t> pivots(m);
  size_t r = 0;
  for (size_t c = 0; c < 2 * n_ && r < m; ++c) {
    const uint64_t bit = uint64_t{1} << (c & 63);
    size_t sel = r;
    while (sel < m && !(u[sel][c >> 6] & bit)) ++sel;
    if (sel == m) continue;
    std::swap(u[sel], u[r]);
    std::swap(t[sel], t[r]);
    for (size_t k = 0; k < m; ++k) {
      if (k != r && (u[k][c >> 6] & bit)) {
        for (size_t w = 0; w < cw; ++w) u[k][w] ^= u[r][w];
        for (size_t w = 0; w < tw; ++w) t[k][w] ^= t[r][w];
      }
    }
    pivots[r++] = c;
  }
  if (r != m) throw TrackerError("tracked rows are not independent");
  destab_.assign(m, PauliString(n_));
  for (size_t k = 0; k < m; ++k) {
    const size_t c = pivots[k];
    for (size_t i = 0; i < m; ++i) {
      if ((t[k][i >> 6] >> (i & 63)) & 1) {
        PauliString& d = destab_[i];
        if (c < n_) {
          d.xs[c >> 6] |= uint64_t{1} << (c & 63);
        } else {
          d.zs[(c - n_) >> 6] |= uint64_t{1} << ((c - n_) & 63);
        }
      }
    }
  }
  factored_ = true;
  ++solve_count_;
}

void Tracker::ensure_factored() {
  if (!factored_) refactor();
}

size_t Tracker::choose_pivot(const std::vector<size_t>& anti) const {
  for (size_t k : anti) {
    if (rows_[k].role == Role::Stabilizer) return k;
  }
  return anti.front();
}

std::optional<DetectorDecl> Tracker::process_mid_measurement(const PauliString& p_hat,
                                                             uint64_t i,
                                                             std::optional<XY> tag) {
  if (p_hat.n != n_) throw DimensionError("measured Pauli has wrong qubit count");
  if (i != meas_counter_) throw TrackerError("measurement index out of order");
  if (!p_hat.is_hermitian()) throw TrackerError("measured Pauli is not Hermitian");
  std::vector<size_t> untracked;
  for (size_t q : p_hat.support()) {
    if (!tracked_[q]) untracked.push_back(q);
  }
  if (!untracked.empty()) {
    throw TrackerError("measurement touches untracked qubits " + qubit_list(untracked));
  }
  if (rows_.size() != num_tracked()) throw TrackerError("tracker is not full rank");
  ensure_factored();
  ++meas_counter_;

  std::vector<size_t> anti;
  for (size_t k = 0; k < rows_.size(); ++k) {
    if (!commutes(rows_[k].pauli, p_hat)) anti.push_back(k);
  }

  if (!anti.empty()) {
    const size_t p = choose_pivot(anti);
    const TrackedRow old = rows_[p];
    for (size_t k : anti) {
      if (k == p) continue;
      mul_row(rows_[k], old);
      mul_bits(destab_[p], destab_[k]);
    }
    for (auto& s : shadows_) {
      if (!commutes(s.pauli, p_hat)) mul_row(s, old);
    }
    std::erase_if(buf_, [&](const Buffered& b) { return !commutes(b.pauli, p_hat); });
    for (size_t m = 0; m < destab_.size(); ++m) {
      if (m != p && !commutes(destab_[m], p_hat)) mul_bits(destab_[m], old.pauli);
    }
    destab_[p] = old.pauli;
    destab_[p].phase = 0;
    rows_[p] = TrackedRow{p_hat, {i}, Role::Stabilizer, tag};
    buf_.push_back(Buffered{p_hat, i, tag});
    return std::nullopt;
  }

  // Deterministic: p_hat is a product of rows selected by the destabilizers.
  ++solve_count_;
  PauliString prod(n_);
  RecordSet recs;
  for (size_t k = 0; k < rows_.size(); ++k) {
    if (!commutes(destab_[k], p_hat)) {
      prod.mul_right(rows_[k].pauli);
      xor_records(recs, rows_[k].records);
    }
  }
  if (!prod.same_bits(p_hat)) throw TrackerError("decomposition failed for " + p_hat.str());
  uint8_t parity = parity_of_phase(static_cast<uint8_t>((p_hat.phase - prod.phase) & 3),
                                   "decomposition");
  for (const auto& s : shadows_) {
    if (!s.pauli.same_bits(p_hat)) continue;
    if (s.records.size() < recs.size()) {
      recs = s.records;
      parity = parity_of_phase(static_cast<uint8_t>((p_hat.phase - s.pauli.phase) & 3),
                               "shadow match");
    }
  }
  xor_records(recs, RecordSet{i});
  buf_.push_back(Buffered{p_hat, i, tag});
  return DetectorDecl{std::move(recs), parity, tag};
}

void Tracker::write_back() {
  if (buf_.empty()) return;
  RrefBasis basis(n_);
  std::vector<TrackedRow> fresh;
  std::vector<TrackedRow> dependent;
  for (const auto& b : buf_) {
    TrackedRow row{b.pauli, {b.index}, Role::Stabilizer, b.tag};
    if (basis.add(b.pauli)) {
      fresh.push_back(std::move(row));
    } else {
      dependent.push_back(std::move(row));
    }
  }
  std::vector<TrackedRow> complement;
  for (Role role : {Role::Logical, Role::Stabilizer}) {
    for (const auto& r : rows_) {
      if (r.role == role && basis.add(r.pauli)) complement.push_back(r);
    }
  }
  // Greedy: multiply in a fresh generator whenever it shrinks the record set.
  std::unordered_map<uint64_t, size_t> by_index;
  for (size_t g = 0; g < fresh.size(); ++g) by_index[fresh[g].records.front()] = g;
  for (auto& c : complement) {
    while (true) {
      size_t best = fresh.size();
      size_t best_weight = 0;
      for (uint64_t rec : c.records) {
        auto it = by_index.find(rec);
        if (it == by_index.end()) continue;
        PauliString trial = multiply(c.pauli, fresh[it->second].pauli);
        size_t w = trial.weight();
        if (best == fresh.size() || w < best_weight ||
            (w == best_weight && it->second < best)) {
          best = it->second;
          best_weight = w;
        }
      }
      if (best == fresh.size()) break;
      mul_row(c, fresh[best]);
    }
    c.role = Role::Logical;
  }
  rows_ = std::move(fresh);
  for (auto& c : complement) rows_.push_back(std::move(c));
  shadows_ = std::move(dependent);
  buf_.clear();
  factored_ = false;
  if (rows_.size() != num_tracked()) throw TrackerError("write-back lost rank");
}

ReadoutResult Tracker::process_data_readout(const std::vector<ReadoutItem>& readouts,
                                            uint64_t i0) {
  if (i0 != meas_counter_) throw TrackerError("readout index out of order");
  if (!buf_.empty()) write_back();
  std::vector<bool> in_region(n_, false);
  for (const auto& r : readouts) {
    if (r.qubit >= n_ || !tracked_[r.qubit]) {
      throw TrackerError("readout of untracked qubit " + std::to_string(r.qubit));
    }
    if (in_region[r.qubit]) throw TrackerError("qubit read out twice");
    if (r.basis != 'Z' && r.basis != 'X') throw TrackerError("readout basis must be X or Z");
    in_region[r.qubit] = true;
  }
  std::vector<bool> is_f(rows_.size(), false);
  for (size_t j = 0; j < readouts.size(); ++j) {
    const ReadoutItem& item = readouts[j];
    const PauliString f = PauliString::single(n_, item.qubit, item.basis);
    std::vector<size_t> anti;
    for (size_t k = 0; k < rows_.size(); ++k) {
      if (!commutes(rows_[k].pauli, f)) anti.push_back(k);
    }
    if (anti.empty()) continue;
    const size_t p = choose_pivot(anti);
    if (rows_[p].role == Role::Logical && !item.allow_random_logical) {
      throw NonDeterministicReadout("readout of qubit " + std::to_string(item.qubit) +
                                    " randomizes a logical degree of freedom");
    }
    const TrackedRow old = rows_[p];
    for (size_t k : anti) {
      if (k != p) mul_row(rows_[k], old);
    }
    for (auto& s : shadows_) {
      if (!commutes(s.pauli, f)) mul_row(s, old);
    }
    rows_[p] = TrackedRow{f, {i0 + j}, Role::Stabilizer, std::nullopt};
    is_f[p] = true;
  }
  meas_counter_ = i0 + readouts.size();

  std::vector<int64_t> fact_of(n_, -1);
  for (size_t j = 0; j < readouts.size(); ++j) fact_of[readouts[j].qubit] = j;
  auto clean = [&](TrackedRow& row) {
    for (size_t q : row.pauli.support()) {
      if (fact_of[q] < 0) continue;
      const ReadoutItem& item = readouts[fact_of[q]];
      const PauliString f = PauliString::single(n_, q, item.basis);
      if (row.pauli.pauli_at(q) != item.basis) {
        throw TrackerError("row does not commute with readout after update");
      }
      row.pauli.mul_right(f);
      xor_records(row.records, RecordSet{i0 + static_cast<uint64_t>(fact_of[q])});
    }
  };

  ReadoutResult result;
  auto emit = [&](TrackedRow& row, const RecordSet& recs, uint8_t parity) {
    if (recs.empty()) {
      if (parity) throw TrackerError("empty record set with odd parity");
      return;
    }
    if (row.role == Role::Stabilizer) {
      result.detectors.push_back(DetectorDecl{recs, parity, row.tag});
    } else {
      result.observables.push_back(ObservableDecl{next_observable_++, recs, parity});
    }
  };

  std::vector<size_t> order;
  for (Role role : {Role::Stabilizer, Role::Logical}) {
    for (size_t k = 0; k < rows_.size(); ++k) {
      if (!is_f[k] && rows_[k].role == role) order.push_back(k);
    }
  }
  std::vector<bool> keep(rows_.size(), false);
  RrefBasis basis(n_);
  std::vector<size_t> kept_rows;
  for (size_t k : order) {
    TrackedRow& row = rows_[k];
    clean(row);
    if (row.pauli.is_identity()) {
      emit(row, row.records, parity_of_phase(row.pauli.phase, "readout"));
      continue;
    }
    if (auto sol = basis.solve(row.pauli)) {
      ++solve_count_;
      RecordSet recs = row.records;
      for (size_t c : sol->coeffs.ones()) xor_records(recs, rows_[kept_rows[c]].records);
      emit(row, recs, parity_of_phase(sol->residual_phase, "readout"));
      continue;
    }
    basis.add(row.pauli);
    kept_rows.push_back(k);
    keep[k] = true;
  }
  std::vector<TrackedRow> new_shadows;
  for (auto& s : shadows_) {
    clean(s);
    if (s.pauli.is_identity()) {
      if (!s.records.empty()) {
        result.detectors.push_back(
            DetectorDecl{s.records, parity_of_phase(s.pauli.phase, "readout"), s.tag});
      }
    } else {
      new_shadows.push_back(std::move(s));
    }
  }
  shadows_ = std::move(new_shadows);
  std::vector<TrackedRow> remaining;
  for (size_t k = 0; k < rows_.size(); ++k) {
    if (keep[k]) remaining.push_back(std::move(rows_[k]));
  }
  rows_ = std::move(remaining);
  for (const auto& r : readouts) tracked_[r.qubit] = false;
  factored_ = false;
  if (rows_.size() != num_tracked()) throw TrackerError("readout left tracker rank deficient");
  return result;
}

void Tracker::reset_records(const std::vector<uint32_t>& qubits) {
  std::vector<bool> hit(n_, false);
  for (uint32_t q : qubits) {
    if (q >= n_) throw DimensionError("reset qubit out of range");
    hit[q] = true;
  }
  auto touches = [&](const TrackedRow& r) {
    for (size_t q : r.pauli.support()) {
      if (hit[q]) return true;
    }
    return false;
  };
  std::erase_if(rows_, touches);
  std::erase_if(shadows_, touches);
  for (uint32_t q : qubits) tracked_[q] = false;
  factored_ = false;
}

size_t Tracker::logical_dof_count() const {
  return static_cast<size_t>(std::count_if(rows_.begin(), rows_.end(), [](const TrackedRow& r) {
    return r.role == Role::Logical;
  }));
}

void Tracker::fast_forward(uint64_t from, uint64_t delta) {
  auto shift = [&](std::vector<TrackedRow>& rows) {
    for (auto& r : rows) {
      for (auto& rec : r.records) {
        if (rec >= from) rec += delta;
      }
    }
  };
  shift(rows_);
  shift(shadows_);
  for (auto& b : buf_) {
    if (b.index >= from) b.index += delta;
  }
  meas_counter_ += delta;
}

bool Tracker::equals_shifted(const TrackerState& before, uint64_t from, uint64_t delta) const {
  auto same = [&](const std::vector<TrackedRow>& now, const std::vector<TrackedRow>& old) {
    if (now.size() != old.size()) return false;
    for (size_t k = 0; k < now.size(); ++k) {
      if (now[k].pauli != old[k].pauli || now[k].role != old[k].role) return false;
      if (now[k].records.size() != old[k].records.size()) return false;
      for (size_t j = 0; j < now[k].records.size(); ++j) {
        uint64_t r = old[k].records[j];
        if (r >= from) r += delta;
        if (now[k].records[j] != r) return false;
      }
    }
    return true;
  };
  return same(rows_, before.rows) && same(shadows_, before.shadows);
}

std::string Tracker::check_invariants() const {
  for (size_t a = 0; a < rows_.size(); ++a) {
    if (!rows_[a].pauli.is_hermitian()) return "row " + std::to_string(a) + " not Hermitian";
    if (!std::is_sorted(rows_[a].records.begin(), rows_[a].records.end())) {
      return "row " + std::to_string(a) + " records unsorted";
    }
    for (size_t b = a + 1; b < rows_.size(); ++b) {
      if (!commutes(rows_[a].pauli, rows_[b].pauli)) {
        return "rows " + std::to_string(a) + " and " + std::to_string(b) + " anticommute";
      }
    }
    for (size_t q : rows_[a].pauli.support()) {
      if (!tracked_[q]) return "row " + std::to_string(a) + " touches untracked qubit";
    }
  }
  RrefBasis basis(n_);
  for (const auto& r : rows_) {
    if (!basis.add(r.pauli)) return "rows are dependent";
  }
  if (rows_.size() != num_tracked()) return "row count differs from tracked qubit count";
  for (const auto& s : shadows_) {
    if (!basis.in_span(s.pauli)) return "shadow row outside row span";
  }
  return {};
}

}  // namespace qtrack
