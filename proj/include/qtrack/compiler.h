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

#ifndef QTRACK_COMPILER_H_
#define QTRACK_COMPILER_H_

#include <stdexcept>
#include <string>
#include <vector>

#include "qtrack/circuit.h"
#include "qtrack/code_library.h"
#include "qtrack/system.h"
#include "qtrack/tracker.h"

namespace qtrack {

class CompileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Basis : uint8_t { Z, X };

struct InitTarget {
  size_t patch = 0;
  Basis basis = Basis::Z;
};

struct ReadoutTarget {
  size_t patch = 0;
  Basis basis = Basis::Z;
  bool allow_random = false;  // declared discard of a random logical outcome
};

struct CompileOptions {
  ScheduleVariant variant = ScheduleVariant::Standard;
  bool emit_coords = true;
  bool use_repeat = true;
};

struct CompileStats {
  uint64_t qubits = 0;
  uint64_t detectors = 0;
  uint64_t observables = 0;
  uint64_t annotations = 0;
  uint64_t atomic_ops = 0;
  uint64_t rref_solves = 0;
  double compile_ms = 0;
};

struct CompileResult {
  AnnotatedCircuit circuit;
  CompileStats stats;
};

// Drives the system and tracker in lockstep through the atomic operations and
// records the annotated circuit.
class ProtocolCompiler {
 public:
  explicit ProtocolCompiler(CompileOptions options = {});

  size_t add_patch(const QecPatch& patch, const std::string& name = "");
  size_t add_coupler(size_t a, size_t b, CouplerBasis basis, int r_inter = 0);

  void initialize(const std::vector<InitTarget>& targets);
  void syndrome_extraction(int rounds);
  void unitary_block(const std::vector<CoordGate>& gates);
  void unitary_gates(const std::vector<CliffordGate>& gates);
  void toggle_coupler(size_t coupler, bool on);
  void data_readout(const std::vector<ReadoutTarget>& targets);
  CompileResult finish();

  const QecSystem& system() const { return system_; }
  const Tracker& tracker() const { return tracker_; }
  uint64_t atomic_ops() const { return atomic_ops_; }

 private:
  struct Round {
    std::vector<uint32_t> reset;
    std::vector<Instruction> body;
    bool pairwise = true;
    uint64_t measurements = 0;
  };

  Round process_round();
  void emit_reset(Op op, const std::vector<uint32_t>& qubits);
  void emit_detectors(std::vector<Instruction>& out, const std::vector<DetectorDecl>& dets);
  void emit_observables(std::vector<Instruction>& out, const std::vector<ObservableDecl>& obs);
  void readout_qubits(const std::vector<std::pair<std::vector<uint32_t>, ReadoutTarget>>& groups);
  void mark_dirty(const std::vector<uint32_t>& qubits);
  double current_t() const { return static_cast<double>(rounds_done_ - shifts_); }

  CompileOptions options_;
  QecSystem system_;
  Tracker tracker_;
  std::vector<Instruction> out_;
  std::vector<bool> clean_;
  std::vector<uint64_t> coupler_rounds_;
  uint64_t rounds_done_ = 0;
  uint64_t shifts_ = 0;
  uint64_t atomic_ops_ = 0;
  bool finished_ = false;
};

}  // namespace qtrack

#endif  // QTRACK_COMPILER_H_
