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

#ifndef QTRACK_TRACKER_H_
#define QTRACK_TRACKER_H_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qtrack/pauli.h"

namespace qtrack {

using RecordSet = std::vector<uint64_t>;  // sorted absolute measurement indices

// Symmetric difference of two sorted record sets, written into a.
void xor_records(RecordSet& a, const RecordSet& b);

class TrackerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInitialization : public TrackerError {
 public:
  using TrackerError::TrackerError;
};

class NonDeterministicReadout : public TrackerError {
 public:
  using TrackerError::TrackerError;
};

enum class Role : uint8_t { Stabilizer, Logical };

struct XY {
  int x = 0;
  int y = 0;
  bool operator==(const XY& o) const { return x == o.x && y == o.y; }
  bool operator<(const XY& o) const { return y != o.y ? y < o.y : x < o.x; }
};

struct TrackedRow {
  PauliString pauli;
  RecordSet records;
  Role role = Role::Stabilizer;
  std::optional<XY> tag;  // ancilla coordinate of the check that produced it

  bool operator==(const TrackedRow& o) const {
    return pauli == o.pauli && records == o.records && role == o.role;
  }
};

struct DetectorDecl {
  RecordSet records;
  uint8_t expected_parity = 0;
  std::optional<XY> coords;
};

struct ObservableDecl {
  uint32_t observable_id = 0;
  RecordSet records;
  uint8_t expected_parity = 0;
};

struct ReadoutItem {
  uint32_t qubit = 0;
  char basis = 'Z';  // 'Z' or 'X'
  bool allow_random_logical = false;
};

struct ReadoutResult {
  std::vector<DetectorDecl> detectors;
  std::vector<ObservableDecl> observables;
};

// Rows plus redundant facts, used for repeat-block fixed point comparison.
struct TrackerState {
  std::vector<TrackedRow> rows;
  std::vector<TrackedRow> shadows;
};

// The record-augmented tableau. Rows form a full generating set of the
// stabilizer state on the tracked qubits; the eigenvalue of each signed row is
// (-1)^(parity of its records). Shadow rows are redundant facts kept from
// dependent syndrome measurements so later decompositions stay local.
class Tracker {
 public:
  explicit Tracker(size_t num_qubits = 0);

  void resize(size_t num_qubits);
  size_t num_qubits() const { return n_; }
  uint64_t meas_counter() const { return meas_counter_; }
  bool is_tracked(size_t q) const { return q < tracked_.size() && tracked_[q]; }
  size_t num_tracked() const;

  void register_rows(const std::vector<std::pair<PauliString, Role>>& rows);
  void apply_clifford_block(const std::vector<CliffordGate>& block);
  static PauliString back_propagate(const std::vector<CliffordGate>& block,
                                    const PauliString& terminal);
  std::optional<DetectorDecl> process_mid_measurement(const PauliString& p_hat, uint64_t i,
                                                      std::optional<XY> tag = std::nullopt);
  void write_back();
  ReadoutResult process_data_readout(const std::vector<ReadoutItem>& readouts, uint64_t i0);
  void reset_records(const std::vector<uint32_t>& qubits);
  size_t logical_dof_count() const;

  const std::vector<TrackedRow>& rows() const { return rows_; }
  const std::vector<TrackedRow>& shadows() const { return shadows_; }
  size_t buffered() const { return buf_.size(); }
  TrackerState state() const { return TrackerState{rows_, shadows_}; }

  // Adds delta to every record >= from and advances the counter by delta.
  void fast_forward(uint64_t from, uint64_t delta);
  // True if the current state equals `before` with records >= from shifted by delta.
  bool equals_shifted(const TrackerState& before, uint64_t from, uint64_t delta) const;

  // Number of GF(2) eliminations performed (decompositions and refactorizations).
  uint64_t rref_solve_count() const { return solve_count_; }

  // Checks commutation, independence and full rank. Returns an empty string on success.
  std::string check_invariants() const;

 private:
  struct Buffered {
    PauliString pauli;
    uint64_t index;
    std::optional<XY> tag;
  };

  void refactor();
  void ensure_factored();
  size_t choose_pivot(const std::vector<size_t>& anti) const;

  size_t n_ = 0;
  uint64_t meas_counter_ = 0;
  uint32_t next_observable_ = 0;
  uint64_t solve_count_ = 0;
  std::vector<bool> tracked_;
  std::vector<TrackedRow> rows_;
  std::vector<TrackedRow> shadows_;
  std::vector<PauliString> destab_;
  bool factored_ = false;
  std::vector<Buffered> buf_;
};

}  // namespace qtrack

#endif  // QTRACK_TRACKER_H_
