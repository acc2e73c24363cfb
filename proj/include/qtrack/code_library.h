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

#ifndef QTRACK_CODE_LIBRARY_H_
#define QTRACK_CODE_LIBRARY_H_

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qtrack/pauli.h"
#include "qtrack/tracker.h"

namespace qtrack {

class CodeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Family { Repetition, RotatedSurface, UnrotatedSurface, Toric };
enum class CheckType : uint8_t { X, Z };
enum class ScheduleVariant { Standard, SwappedZX };
enum class CouplerBasis { ZZ, XX };
enum class TransversalKind { CNOT, H, S };

const char* family_name(Family f);
Family parse_family(const std::string& name);

// One stabilizer measured through an ancilla. dirs holds the data neighbour in
// each of four canonical directions; the CX layer order is a permutation of
// them chosen by cx_order().
struct Check {
  CheckType type = CheckType::Z;
  XY ancilla;
  std::array<std::optional<XY>, 4> dirs;

  std::vector<XY> support() const;
};

// Direction indices in layer order for a check of the given type.
std::array<int, 4> cx_order(CheckType type, ScheduleVariant variant);

struct LogicalOp {
  std::string label;  // "X0", "Z0", "X1", ...
  PauliString op;     // over the patch's data_qubits order
};

struct QecPatch {
  Family family = Family::RotatedSurface;
  int d = 3;
  XY origin;
  int orientation = 0;
  std::vector<XY> data_qubits;      // row-major
  std::vector<XY> data_local;       // same order, unrotated patch frame
  std::vector<XY> syndrome_qubits;  // row-major, aligned with checks
  std::vector<Check> checks;
  std::vector<PauliString> stabilizers;  // aligned with checks
  std::vector<LogicalOp> logical_ops;

  size_t num_logical() const { return logical_ops.size() / 2; }
  const PauliString& logical(char basis, size_t k = 0) const;
  std::optional<size_t> data_index(XY c) const;
  PauliString check_pauli(const Check& c) const;
};

QecPatch build_patch(Family family, int d, XY origin = {}, int orientation = 0);

struct SeLayer {
  enum Kind { Reset, Hadamard, Cnot, Measure };
  Kind kind;
  std::vector<CliffordGate> gates;  // Hadamard and Cnot layers
  std::vector<uint32_t> qubits;     // Reset and Measure layers
};

struct SeSchedule {
  ScheduleVariant variant = ScheduleVariant::Standard;
  std::vector<SeLayer> ticks;

  // Unitary part of the round in execution order.
  std::vector<CliffordGate> unitary() const;
};

// A check with qubits already mapped to indices; dirs use -1 for absent.
struct IndexedCheck {
  CheckType type;
  uint32_t ancilla;
  std::array<int64_t, 4> dirs;
};

SeSchedule build_se_schedule(const std::vector<IndexedCheck>& checks, ScheduleVariant variant);

// Schedule over the patch's local indexing: data 0..nd-1 then syndrome qubits.
SeSchedule se_schedule(const QecPatch& patch, ScheduleVariant variant);

struct CouplerSpec {
  CouplerBasis basis = CouplerBasis::ZZ;
  int r_inter = 0;
  std::vector<XY> seam_data;
  std::vector<XY> seam_syndrome;
  std::vector<Check> new_checks;       // ancillas in seam_syndrome
  std::vector<Check> modified_checks;  // replace the patch checks at the same ancilla
  std::vector<XY> merged_data;         // both patches and the seam, row-major
  std::vector<PauliString> merged_stabilizers;  // over merged_data
  // The logical product measured by the merge, over merged_data.
  PauliString measured_product;
  // Product of the new basis-type seam checks, over merged_data.
  PauliString seam_product;
};

// Placement helper: origin for b so that ls_coupler(a, b, basis, r) is valid.
XY coupler_partner_origin(const QecPatch& a, CouplerBasis basis, int r_inter);

CouplerSpec ls_coupler(const QecPatch& a, const QecPatch& b, CouplerBasis basis, int r_inter);

struct CoordGate {
  GateKind kind;
  XY a;
  XY b;
};

std::vector<CoordGate> transversal_block(TransversalKind kind, const QecPatch& a,
                                         const QecPatch* b = nullptr);

}  // namespace qtrack

#endif  // QTRACK_CODE_LIBRARY_H_
