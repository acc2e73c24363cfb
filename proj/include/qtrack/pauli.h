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

#ifndef QTRACK_PAULI_H_
#define QTRACK_PAULI_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qtrack {

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline size_t words_for(size_t bits) { return (bits + 63) / 64; }

// An n-qubit Pauli operator i^phase * P_0 ⊗ ... ⊗ P_{n-1}.
// Per-qubit encoding (x, z): (0,0)=I, (1,0)=X, (1,1)=Y, (0,1)=Z.
struct PauliString {
  size_t n = 0;
  std::vector<uint64_t> xs;
  std::vector<uint64_t> zs;
  uint8_t phase = 0;

  PauliString() = default;
  explicit PauliString(size_t num_qubits);

  // Parses strings like "XZ_Y", "+XIZ", "-iYY". 'I' and '_' are identity.
  static PauliString from_text(std::string_view text);
  static PauliString single(size_t num_qubits, size_t q, char pauli);

  bool x(size_t q) const { return (xs[q >> 6] >> (q & 63)) & 1; }
  bool z(size_t q) const { return (zs[q >> 6] >> (q & 63)) & 1; }
  void set(size_t q, bool xv, bool zv);
  char pauli_at(size_t q) const;

  size_t num_words() const { return xs.size(); }
  size_t weight() const;
  bool is_identity() const;  // bits only, ignores phase
  bool same_bits(const PauliString& other) const;
  bool is_hermitian() const { return (phase & 1) == 0; }
  // Sorted list of qubits with a non-identity factor.
  std::vector<size_t> support() const;

  // this <- this * rhs.
  void mul_right(const PauliString& rhs);
  // Grows or shrinks to num_qubits; dropped qubits must be identity.
  void resize(size_t num_qubits);

  std::string str() const;
  bool operator==(const PauliString& other) const;
  bool operator!=(const PauliString& other) const { return !(*this == other); }
};

PauliString multiply(const PauliString& p, const PauliString& q);
bool commutes(const PauliString& p, const PauliString& q);

enum class GateKind : uint8_t { H, S, S_DAG, X, Y, Z, CX, CZ, SWAP };

const char* gate_name(GateKind kind);
bool is_two_qubit(GateKind kind);

struct CliffordGate {
  GateKind kind = GateKind::H;
  uint32_t a = 0;
  uint32_t b = 0;

  static CliffordGate one(GateKind kind, uint32_t q);
  static CliffordGate two(GateKind kind, uint32_t q0, uint32_t q1);
  CliffordGate inverse() const;
  bool operator==(const CliffordGate& o) const {
    return kind == o.kind && a == o.a && b == o.b;
  }
};

// g p g^dagger.
PauliString conjugate(const PauliString& p, const CliffordGate& g);
void conjugate_in_place(PauliString& p, const CliffordGate& g);

struct CoeffVector {
  std::vector<uint64_t> bits;
  size_t size = 0;

  explicit CoeffVector(size_t m = 0) : bits(words_for(m), 0), size(m) {}
  bool get(size_t i) const { return (bits[i >> 6] >> (i & 63)) & 1; }
  void flip(size_t i) { bits[i >> 6] ^= uint64_t{1} << (i & 63); }
  std::vector<size_t> ones() const;
};

struct Solution {
  CoeffVector coeffs;
  // target = i^residual_phase * prod_{c_i=1} rows[i], product taken in index order.
  uint8_t residual_phase = 0;
};

// Incremental echelon basis over the (x|z) bit patterns of a row list. Rows
// are offered in order; a row that is dependent on earlier ones is recorded as
// free, so solutions use the lowest-index independent rows.
class RrefBasis {
 public:
  explicit RrefBasis(size_t num_qubits);
  explicit RrefBasis(const std::vector<PauliString>& rows);

  // Offers the next row (index = number of rows offered so far). Returns true
  // if it was independent of the rows already held.
  bool add(const PauliString& row);
  bool in_span(const PauliString& target) const;
  std::optional<Solution> solve(const PauliString& target) const;

  size_t rank() const { return basis_.size(); }
  size_t rows_offered() const { return rows_.size(); }

 private:
  struct Entry {
    std::vector<uint64_t> bits;   // x words then z words
    std::vector<uint64_t> combo;  // which offered rows compose it
    size_t pivot;
  };
  std::vector<uint64_t> pack(const PauliString& p) const;
  void reduce(std::vector<uint64_t>& bits, std::vector<uint64_t>* combo) const;

  size_t n_;
  size_t words_;
  std::vector<PauliString> rows_;
  std::vector<Entry> basis_;
};

std::optional<Solution> rref_solve(const std::vector<PauliString>& rows,
                                   const PauliString& target);

}  // namespace qtrack

#endif  // QTRACK_PAULI_H_
