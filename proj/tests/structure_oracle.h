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

#ifndef QTRACK_TESTS_STRUCTURE_ORACLE_H_
#define QTRACK_TESTS_STRUCTURE_ORACLE_H_

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "qtrack/circuit.h"
#include "qtrack/code_library.h"

namespace oracle {

struct Record {
  qtrack::Op op;
  uint32_t qubit;
};

struct Annotations {
  std::vector<Record> records;
  std::vector<std::vector<uint64_t>> detectors;               // absolute record indices
  std::map<uint32_t, std::vector<uint64_t>> observables;      // accumulated per id
};

// Walks the flattened circuit and resolves every rec[-k] to an absolute index.
inline Annotations resolve(const qtrack::AnnotatedCircuit& c) {
  Annotations a;
  for (const auto& i : qtrack::flatten(c.instructions)) {
    if (qtrack::is_measurement_op(i.op)) {
      for (uint32_t q : i.targets) a.records.push_back({i.op, q});
    } else if (i.op == qtrack::Op::DETECTOR || i.op == qtrack::Op::OBSERVABLE_INCLUDE) {
      std::vector<uint64_t> abs;
      for (uint32_t k : i.targets) abs.push_back(a.records.size() - k);
      if (i.op == qtrack::Op::DETECTOR) {
        a.detectors.push_back(abs);
      } else {
        auto& o = a.observables[static_cast<uint32_t>(i.args.at(0))];
        o.insert(o.end(), abs.begin(), abs.end());
      }
    }
  }
  return a;
}

// Splits qubits into two groups at the widest gap between distinct x
// coordinates. A single lattice (no gap wider than one) stays in one group.
inline std::set<uint32_t> left_group(const qtrack::AnnotatedCircuit& c) {
  std::vector<double> xs;
  for (const auto& [q, xy] : c.qubit_coords) xs.push_back(xy.at(0));
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  double cut = xs.back();
  double widest = 1;
  for (size_t k = 1; k < xs.size(); ++k) {
    if (xs[k] - xs[k - 1] > widest) {
      widest = xs[k] - xs[k - 1];
      cut = xs[k - 1];
    }
  }
  std::set<uint32_t> left;
  for (const auto& [q, xy] : c.qubit_coords)
    if (xy.at(0) <= cut) left.insert(q);
  return left;
}

// Number of detectors whose records come from both coordinate groups.
inline size_t cross_group_detectors(const qtrack::AnnotatedCircuit& c) {
  Annotations a = resolve(c);
  std::set<uint32_t> left = left_group(c);
  size_t n = 0;
  for (const auto& d : a.detectors) {
    bool l = false, r = false;
    for (uint64_t k : d) (left.count(a.records[k].qubit) ? l : r) = true;
    n += l && r;
  }
  return n;
}

struct ObservableMix {
  size_t weight = 0;
  size_t data_records = 0;   // final M / MX records
  size_t merge_records = 0;  // MR / MRX records of qubits absent from the first round
};

inline ObservableMix observable_mix(const qtrack::AnnotatedCircuit& c, uint32_t id) {
  Annotations a = resolve(c);
  std::set<uint32_t> first_round;
  bool started = false;
  for (const auto& r : a.records) {
    const bool mr = r.op == qtrack::Op::MR || r.op == qtrack::Op::MRX;
    if (!mr && started) break;
    if (mr) {
      if (!first_round.insert(r.qubit).second) break;
      started = true;
    }
  }
  ObservableMix m;
  for (uint64_t k : a.observables[id]) {
    const Record& r = a.records[k];
    ++m.weight;
    if (r.op == qtrack::Op::M || r.op == qtrack::Op::MX) ++m.data_records;
    if ((r.op == qtrack::Op::MR || r.op == qtrack::Op::MRX) && !first_round.count(r.qubit))
      ++m.merge_records;
  }
  return m;
}

// Plain Gaussian elimination over rows of bits.
inline size_t gf2_rank(std::vector<std::vector<uint8_t>> m) {
  size_t rank = 0;
  const size_t cols = m.empty() ? 0 : m[0].size();
  for (size_t c = 0; c < cols && rank < m.size(); ++c) {
    size_t r = rank;
    while (r < m.size() && !m[r][c]) ++r;
    if (r == m.size()) continue;
    std::swap(m[r], m[rank]);
    for (size_t k = 0; k < m.size(); ++k) {
      if (k != rank && m[k][c]) {
        for (size_t j = 0; j < cols; ++j) m[k][j] ^= m[rank][j];
      }
    }
    ++rank;
  }
  return rank;
}

struct MemoryCount {
  uint64_t pairwise_only = 0;  // one detector per independent check per boundary
  uint64_t nullity = 0;        // dependent relations among the measured checks
  uint64_t expected = 0;
};

// Z-basis memory with d rounds: the first boundary sees the independent Z
// checks, the d - 1 inner boundaries all independent checks, the readout
// boundary the Z checks again. Each dependent relation adds one detector at
// each of the d + 1 boundaries.
inline MemoryCount z_memory_count(const qtrack::QecPatch& p, int d) {
  std::vector<std::vector<uint8_t>> mz, mx;
  for (const auto& c : p.checks) {
    std::vector<uint8_t> row(p.data_qubits.size(), 0);
    for (const qtrack::XY& q : c.support()) row[*p.data_index(q)] = 1;
    (c.type == qtrack::CheckType::Z ? mz : mx).push_back(row);
  }
  const uint64_t rz = gf2_rank(mz), rx = gf2_rank(mx);
  MemoryCount m;
  m.nullity = (mz.size() - rz) + (mx.size() - rx);
  m.pairwise_only = 2 * rz + (d - 1) * (rz + rx);
  m.expected = m.pairwise_only + m.nullity * (d + 1);
  return m;
}

}  // namespace oracle

#endif  // QTRACK_TESTS_STRUCTURE_ORACLE_H_
