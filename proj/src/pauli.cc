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

#include "qtrack/pauli.h"

#include <bit>

namespace qtrack {

namespace {

void check_dims(const PauliString& p, const PauliString& q) {
  if (p.n != q.n) {
    throw DimensionError("pauli length mismatch: " + std::to_string(p.n) +
                         " vs " + std::to_string(q.n));
  }
}

uint64_t mask_last(size_t n) {
  size_t r = n & 63;
  return r == 0 ? ~uint64_t{0} : (uint64_t{1} << r) - 1;
}

}  // namespace

PauliString::PauliString(size_t num_qubits)
    : n(num_qubits), xs(words_for(num_qubits), 0), zs(words_for(num_qubits), 0) {}

PauliString PauliString::from_text(std::string_view text) {
  uint8_t ph = 0;
  size_t i = 0;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
    if (text[i] == '-') ph = 2;
    ++i;
  }
  if (i < text.size() && text[i] == 'i') {
    ph = (ph + 1) & 3;
    ++i;
  }
  PauliString p(text.size() - i);
  p.phase = ph;
  for (size_t q = 0; i < text.size(); ++i, ++q) {
    switch (text[i]) {
      case 'I':
      case '_':
        break;
      case 'X':
        p.set(q, true, false);
        break;
      case 'Y':
        p.set(q, true, true);
        break;
      case 'Z':
        p.set(q, false, true);
        break;
      default:
        throw std::invalid_argument("bad pauli character in '" + std::string(text) + "'");
    }
  }
  return p;
}

PauliString PauliString::single(size_t num_qubits, size_t q, char pauli) {
  if (q >= num_qubits) throw DimensionError("qubit out of range");
  PauliString p(num_qubits);
  p.set(q, pauli == 'X' || pauli == 'Y', pauli == 'Z' || pauli == 'Y');
  return p;
}

void PauliString::set(size_t q, bool xv, bool zv) {
  uint64_t bit = uint64_t{1} << (q & 63);
  xs[q >> 6] = xv ? (xs[q >> 6] | bit) : (xs[q >> 6] & ~bit);
  zs[q >> 6] = zv ? (zs[q >> 6] | bit) : (zs[q >> 6] & ~bit);
}

char PauliString::pauli_at(size_t q) const {
  static constexpr char kChars[4] = {'_', 'X', 'Z', 'Y'};
  return kChars[(x(q) ? 1 : 0) | (z(q) ? 2 : 0)];
}

size_t PauliString::weight() const {
  size_t w = 0;
  for (size_t k = 0; k < xs.size(); ++k) w += std::popcount(xs[k] | zs[k]);
  return w;
}

bool PauliString::is_identity() const {
  for (size_t k = 0; k < xs.size(); ++k) {
    if (xs[k] | zs[k]) return false;
  }
  return true;
}

bool PauliString::same_bits(const PauliString& other) const {
  return n == other.n && xs == other.xs && zs == other.zs;
}

std::vector<size_t> PauliString::support() const {
  std::vector<size_t> out;
  for (size_t k = 0; k < xs.size(); ++k) {
    uint64_t w = xs[k] | zs[k];
    while (w) {
      out.push_back(k * 64 + std::countr_zero(w));
      w &= w - 1;
    }
  }
  return out;
}

void PauliString::mul_right(const PauliString& rhs) {
  check_dims(*this, rhs);
  int pos = 0;
  int neg = 0;
  for (size_t k = 0; k < xs.size(); ++k) {
    uint64_t x1 = xs[k], z1 = zs[k], x2 = rhs.xs[k], z2 = rhs.zs[k];
    uint64_t X1 = x1 & ~z1, Y1 = x1 & z1, Z1 = ~x1 & z1;
    uint64_t X2 = x2 & ~z2, Y2 = x2 & z2, Z2 = ~x2 & z2;
    pos += std::popcount((X1 & Y2) | (Y1 & Z2) | (Z1 & X2));
    neg += std::popcount((X1 & Z2) | (Y1 & X2) | (Z1 & Y2));
    xs[k] = x1 ^ x2;
    zs[k] = z1 ^ z2;
  }
  phase = static_cast<uint8_t>((phase + rhs.phase + pos - neg + 4 * (neg + 1)) & 3);
}

void PauliString::resize(size_t num_qubits) {
  if (num_qubits < n) {
    for (size_t q = num_qubits; q < n; ++q) {
      if (x(q) || z(q)) throw DimensionError("resize would drop a non-identity factor");
    }
  }
  n = num_qubits;
  xs.resize(words_for(n), 0);
  zs.resize(words_for(n), 0);
  if (!xs.empty()) {
    xs.back() &= mask_last(n);
    zs.back() &= mask_last(n);
  }
}

std::string PauliString::str() const {
  static constexpr const char* kPhase[4] = {"+", "+i", "-", "-i"};
  std::string s = kPhase[phase & 3];
  for (size_t q = 0; q < n; ++q) s.push_back(pauli_at(q));
  return s;
}

bool PauliString::operator==(const PauliString& other) const {
  return same_bits(other) && (phase & 3) == (other.phase & 3);
}

PauliString multiply(const PauliString& p, const PauliString& q) {
  PauliString r = p;
  r.mul_right(q);
  return r;
}

bool commutes(const PauliString& p, const PauliString& q) {
  check_dims(p, q);
  uint64_t acc = 0;
  for (size_t k = 0; k < p.xs.size(); ++k) {
    acc ^= (p.xs[k] & q.zs[k]) ^ (p.zs[k] & q.xs[k]);
  }
  return (std::popcount(acc) & 1) == 0;
}

const char* gate_name(GateKind kind) {
  switch (kind) {
    case GateKind::H: return "H";
    case GateKind::S: return "S";
    case GateKind::S_DAG: return "S_DAG";
    case GateKind::X: return "X";
    case GateKind::Y: return "Y";
    case GateKind::Z: return "Z";
    case GateKind::CX: return "CX";
    case GateKind::CZ: return "CZ";
    case GateKind::SWAP: return "SWAP";
  }
  return "?";
}

bool is_two_qubit(GateKind kind) {
  return kind == GateKind::CX || kind == GateKind::CZ || kind == GateKind::SWAP;
}

CliffordGate CliffordGate::one(GateKind kind, uint32_t q) {
  if (is_two_qubit(kind)) throw std::invalid_argument("two-qubit gate given one target");
  return CliffordGate{kind, q, q};
}

CliffordGate CliffordGate::two(GateKind kind, uint32_t q0, uint32_t q1) {
  if (!is_two_qubit(kind)) throw std::invalid_argument("one-qubit gate given two targets");
  if (q0 == q1) throw std::invalid_argument("two-qubit gate targets must differ");
  return CliffordGate{kind, q0, q1};
}

CliffordGate CliffordGate::inverse() const {
  CliffordGate g = *this;
  if (kind == GateKind::S) g.kind = GateKind::S_DAG;
  else if (kind == GateKind::S_DAG) g.kind = GateKind::S;
  return g;
}

void conjugate_in_place(PauliString& p, const CliffordGate& g) {
  size_t hi = is_two_qubit(g.kind) ? std::max(g.a, g.b) : g.a;
  if (hi >= p.n) {
    throw DimensionError(std::string("gate ") + gate_name(g.kind) + " target " +
                         std::to_string(hi) + " out of range for " + std::to_string(p.n) +
                         " qubits");
  }
  bool xa = p.x(g.a), za = p.z(g.a);
  bool flip = false;
  switch (g.kind) {
    case GateKind::H:
      flip = xa && za;
      p.set(g.a, za, xa);
      break;
    case GateKind::S:
      flip = xa && za;
      p.set(g.a, xa, za ^ xa);
      break;
    case GateKind::S_DAG:
      flip = xa && !za;
      p.set(g.a, xa, za ^ xa);
      break;
    case GateKind::X:
      flip = za;
      break;
    case GateKind::Y:
      flip = xa ^ za;
      break;
    case GateKind::Z:
      flip = xa;
      break;
    case GateKind::CX: {
      bool xb = p.x(g.b), zb = p.z(g.b);
      flip = xa && zb && !(xb ^ za);
      p.set(g.b, xb ^ xa, zb);
      p.set(g.a, xa, za ^ zb);
      break;
    }
    case GateKind::CZ: {
      bool xb = p.x(g.b), zb = p.z(g.b);
      flip = xa && xb && (za ^ zb);
      p.set(g.a, xa, za ^ xb);
      p.set(g.b, xb, zb ^ xa);
      break;
    }
    case GateKind::SWAP: {
      bool xb = p.x(g.b), zb = p.z(g.b);
      p.set(g.a, xb, zb);
      p.set(g.b, xa, za);
      break;
    }
  }
  if (flip) p.phase = static_cast<uint8_t>((p.phase + 2) & 3);
}

PauliString conjugate(const PauliString& p, const CliffordGate& g) {
  PauliString r = p;
  conjugate_in_place(r, g);
  return r;
}

std::vector<size_t> CoeffVector::ones() const {
  std::vector<size_t> out;
  for (size_t k = 0; k < bits.size(); ++k) {
    uint64_t w = bits[k];
    while (w) {
      out.push_back(k * 64 + std::countr_zero(w));
      w &= w - 1;
    }
  }
  return out;
}

RrefBasis::RrefBasis(size_t num_qubits) : n_(num_qubits), words_(words_for(num_qubits)) {}

RrefBasis::RrefBasis(const std::vector<PauliString>& rows)
    : RrefBasis(rows.empty() ? 0 : rows.front().n) {
  for (const auto& r : rows) add(r);
}

std::vector<uint64_t> RrefBasis::pack(const PauliString& p) const {
  if (p.n != n_) {
    throw DimensionError("rref row length " + std::to_string(p.n) + " != " + std::to_string(n_));
  }
  std::vector<uint64_t> bits(2 * words_);
  for (size_t k = 0; k < words_; ++k) {
    bits[k] = p.xs[k];
    bits[words_ + k] = p.zs[k];
  }
  return bits;
}

void RrefBasis::reduce(std::vector<uint64_t>& bits, std::vector<uint64_t>* combo) const {
  for (const Entry& e : basis_) {
    if ((bits[e.pivot >> 6] >> (e.pivot & 63)) & 1) {
      for (size_t k = 0; k < bits.size(); ++k) bits[k] ^= e.bits[k];
      if (combo) {
        if (combo->size() < e.combo.size()) combo->resize(e.combo.size(), 0);
        for (size_t k = 0; k < e.combo.size(); ++k) (*combo)[k] ^= e.combo[k];
      }
    }
  }
}

bool RrefBasis::add(const PauliString& row) {
  std::vector<uint64_t> bits = pack(row);
  size_t idx = rows_.size();
  rows_.push_back(row);
  std::vector<uint64_t> combo(words_for(idx + 1), 0);
  reduce(bits, &combo);
  for (size_t k = 0; k < bits.size(); ++k) {
    if (bits[k]) {
      combo[idx >> 6] ^= uint64_t{1} << (idx & 63);
      const size_t pivot = k * 64 + static_cast<size_t>(std::countr_zero(bits[k]));
      basis_.push_back(Entry{std::move(bits), std::move(combo), pivot});
      return true;
    }
  }
  return false;
}

bool RrefBasis::in_span(const PauliString& target) const {
  std::vector<uint64_t> bits = pack(target);
  reduce(bits, nullptr);
  for (uint64_t w : bits) {
    if (w) return false;
  }
  return true;
}

std::optional<Solution> RrefBasis::solve(const PauliString& target) const {
  std::vector<uint64_t> bits = pack(target);
  std::vector<uint64_t> combo;
  reduce(bits, &combo);
  for (uint64_t w : bits) {
    if (w) return std::nullopt;
  }
  Solution sol{CoeffVector(rows_.size()), 0};
  for (size_t k = 0; k < combo.size() && k < sol.coeffs.bits.size(); ++k) {
    sol.coeffs.bits[k] = combo[k];
  }
  PauliString prod(n_);
  for (size_t i : sol.coeffs.ones()) prod.mul_right(rows_[i]);
  sol.residual_phase = static_cast<uint8_t>((target.phase - prod.phase + 4) & 3);
  return sol;
}

std::optional<Solution> rref_solve(const std::vector<PauliString>& rows,
                                   const PauliString& target) {
  RrefBasis basis(target.n);
  for (const auto& r : rows) basis.add(r);
  return basis.solve(target);
}

}  // namespace qtrack
