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

#ifndef QTRACK_CIRCUIT_H_
#define QTRACK_CIRCUIT_H_

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qtrack {

class CircuitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public CircuitError {
 public:
  using CircuitError::CircuitError;
};

enum class Op : uint8_t {
  H, S, S_DAG, X, Y, Z, CX, CZ, SWAP,
  R, RX, M, MX, MR, MRX,
  TICK, SHIFT_COORDS, QUBIT_COORDS, REPEAT, DETECTOR, OBSERVABLE_INCLUDE,
  DEPOLARIZE1, DEPOLARIZE2, X_ERROR, Z_ERROR, PAULI_CHANNEL_1,
};

const char* op_name(Op op);
bool is_unitary_op(Op op);
bool is_two_qubit_op(Op op);
bool is_measurement_op(Op op);
bool is_reset_op(Op op);
bool is_noise_op(Op op);
bool is_annotation_op(Op op);

struct Instruction {
  Op op = Op::TICK;
  std::vector<double> args;
  // Qubits, or record lookbacks k (meaning rec[-k]) for DETECTOR and OBSERVABLE_INCLUDE.
  std::vector<uint32_t> targets;
  uint64_t repeat_count = 0;
  std::vector<Instruction> body;
  uint8_t expected_parity = 0;

  bool operator==(const Instruction& o) const = default;
};

struct AnnotatedCircuit {
  std::map<uint32_t, std::vector<double>> qubit_coords;
  std::vector<Instruction> instructions;

  bool operator==(const AnnotatedCircuit& o) const = default;
};

struct CircuitCounts {
  uint64_t qubits = 0;
  uint64_t measurements = 0;
  uint64_t detectors = 0;
  uint64_t observables = 0;          // distinct ids
  uint64_t observable_includes = 0;  // instruction lines
  uint64_t annotations() const { return detectors + observable_includes; }
};

// Counts after flattening REPEAT blocks.
CircuitCounts count(const AnnotatedCircuit& c);

// Inline REPEAT bodies.
std::vector<Instruction> flatten(const std::vector<Instruction>& instructions);

// Throws CircuitError on record references that point before the first measurement.
void validate_records(const AnnotatedCircuit& c);

std::string format_number(double v);
std::string emit_text(const AnnotatedCircuit& c);
AnnotatedCircuit parse_text(std::string_view text);

enum class NoiseModel { None, CodeCapacity, Phenomenological, CircuitLevel, BiasedXZ, CustomPauli };

struct NoiseSpec {
  NoiseModel model = NoiseModel::None;
  double p = 0;
  double bias = 1;  // eta, BiasedXZ only
  // CustomPauli relative weights for X, Y, Z; normalized to sum 1 and scaled by p.
  double wx = 1, wy = 1, wz = 1;
};

NoiseModel parse_noise_model(const std::string& name);
AnnotatedCircuit inject_noise(const AnnotatedCircuit& c, const NoiseSpec& spec);

}  // namespace qtrack

#endif  // QTRACK_CIRCUIT_H_
