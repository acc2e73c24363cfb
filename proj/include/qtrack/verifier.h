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

#ifndef QTRACK_VERIFIER_H_
#define QTRACK_VERIFIER_H_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "qtrack/circuit.h"

namespace qtrack {

class SimError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Noiseless stabilizer simulator in the destabilizer formulation. Rows 0..n-1
// are destabilizers, n..2n-1 stabilizers.
class TableauSimulator {
 public:
  explicit TableauSimulator(size_t num_qubits);

  size_t num_qubits() const { return n_; }
  void h(size_t q);
  void s(size_t q);
  void x(size_t q);
  void z(size_t q);
  void cx(size_t c, size_t t);
  // Z-basis measurement. `random` reports whether the outcome was undetermined;
  // in that case `coin` is the outcome taken.
  bool measure(size_t q, bool coin, bool* random);
  bool is_deterministic(size_t q) const;

 private:
  bool xb(size_t row, size_t q) const { return (x_[row * w_ + (q >> 6)] >> (q & 63)) & 1; }
  void rowmul(size_t h, size_t i);  // row h <- row h * row i
  void rowcopy(size_t dst, size_t src);
  void rowclear(size_t row);

  size_t n_;
  size_t w_;
  std::vector<uint64_t> x_;
  std::vector<uint64_t> z_;
  std::vector<uint8_t> r_;
};

struct SimOptions {
  uint64_t seed = 0;
  // Outcomes used, in order, for every random event (measurements and the
  // hidden collapse of resets); once exhausted the seeded generator takes over.
  std::vector<uint8_t> forced;
};

struct SimResult {
  std::vector<uint8_t> tape;
  std::vector<uint8_t> random;  // per tape entry
  std::vector<int8_t> resets;   // per reset: -1 if deterministic, else the collapse outcome
  std::vector<uint8_t> detectors;               // raw record parities
  std::vector<uint8_t> detector_expected;
  std::vector<std::vector<double>> detector_coords;
  std::vector<uint8_t> observables;             // indexed by observable id
  std::vector<uint8_t> observable_expected;
};

SimResult simulate(const AnnotatedCircuit& c, const SimOptions& options = {});

struct Violation {
  bool observable = false;
  uint64_t index = 0;
  uint64_t failing_seeds = 0;
  uint64_t first_seed = 0;
  std::vector<double> coords;
};

struct DeterminismReport {
  uint64_t seeds = 0;
  uint64_t detectors = 0;
  uint64_t observables = 0;
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  std::string describe() const;
};

// Runs seeds 0..num_seeds-1, split over `threads` workers (0 means hardware
// concurrency), and reports every annotation that deviated from its expected
// parity in any seed.
DeterminismReport check_determinism(const AnnotatedCircuit& c, uint64_t num_seeds,
                                    unsigned threads = 0);

}  // namespace qtrack

#endif  // QTRACK_VERIFIER_H_
