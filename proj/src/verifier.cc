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

#include "qtrack/verifier.h"

#include <algorithm>
#include <atomic>
#include <bit>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

namespace qtrack {

TableauSimulator::TableauSimulator(size_t num_qubits)
    : n_(num_qubits), w_((num_qubits + 63) / 64) {
  const size_t rows = 2 * n_ + 1;
  x_.assign(rows * w_, 0);
  z_.assign(rows * w_, 0);
  r_.assign(rows, 0);
  for (size_t q = 0; q < n_; ++q) {
    x_[q * w_ + (q >> 6)] |= uint64_t{1} << (q & 63);
    z_[(q + n_) * w_ + (q >> 6)] |= uint64_t{1} << (q & 63);
  }
}

void TableauSimulator::h(size_t q) {
  const size_t k = q >> 6;
  const uint64_t m = uint64_t{1} << (q & 63);
  for (size_t row = 0; row < 2 * n_; ++row) {
    uint64_t& xw = x_[row * w_ + k];
    uint64_t& zw = z_[row * w_ + k];
    const bool xv = xw & m, zv = zw & m;
    r_[row] ^= xv & zv;
    if (xv != zv) {
      xw ^= m;
      zw ^= m;
    }
  }
}

void TableauSimulator::s(size_t q) {
  const size_t k = q >> 6;
  const uint64_t m = uint64_t{1} << (q & 63);
  for (size_t row = 0; row < 2 * n_; ++row) {
    const bool xv = x_[row * w_ + k] & m;
    const bool zv = z_[row * w_ + k] & m;
    r_[row] ^= xv & zv;
    if (xv) z_[row * w_ + k] ^= m;
  }
}

void TableauSimulator::x(size_t q) {
  for (size_t row = 0; row < 2 * n_; ++row) {
    r_[row] ^= (z_[row * w_ + (q >> 6)] >> (q & 63)) & 1;
  }
}

void TableauSimulator::z(size_t q) {
  for (size_t row = 0; row < 2 * n_; ++row) r_[row] ^= xb(row, q);
}

void TableauSimulator::cx(size_t c, size_t t) {
  const size_t kc = c >> 6, kt = t >> 6;
  const uint64_t mc = uint64_t{1} << (c & 63), mt = uint64_t{1} << (t & 63);
  for (size_t row = 0; row < 2 * n_; ++row) {
    uint64_t* xr = &x_[row * w_];
    uint64_t* zr = &z_[row * w_];
    const bool xc = xr[kc] & mc, zc = zr[kc] & mc;
    const bool xt = xr[kt] & mt, zt = zr[kt] & mt;
    r_[row] ^= xc & zt & (xt ^ zc ^ 1);
    if (xc) xr[kt] ^= mt;
    if (zt) zr[kc] ^= mc;
  }
}

void TableauSimulator::rowmul(size_t h, size_t i) {
  uint64_t cnt1 = 0, cnt2 = 0;
  uint64_t* x1 = &x_[h * w_];
  uint64_t* z1 = &z_[h * w_];
  const uint64_t* x2 = &x_[i * w_];
  const uint64_t* z2 = &z_[i * w_];
  for (size_t k = 0; k < w_; ++k) {
    const uint64_t x1z2 = x1[k] & z2[k];
    const uint64_t anti = (x2[k] & z1[k]) ^ x1z2;
    x1[k] ^= x2[k];
    z1[k] ^= z2[k];
    cnt2 ^= (cnt1 ^ x1[k] ^ z1[k] ^ x1z2) & anti;
    cnt1 ^= anti;
  }
  const unsigned log_i = std::popcount(cnt1) + 2 * std::popcount(cnt2);
  r_[h] ^= r_[i] ^ ((log_i >> 1) & 1);
}

void TableauSimulator::rowcopy(size_t dst, size_t src) {
  std::copy_n(&x_[src * w_], w_, &x_[dst * w_]);
  std::copy_n(&z_[src * w_], w_, &z_[dst * w_]);
  r_[dst] = r_[src];
}

void TableauSimulator::rowclear(size_t row) {
  std::fill_n(&x_[row * w_], w_, 0);
  std::fill_n(&z_[row * w_], w_, 0);
  r_[row] = 0;
}

bool TableauSimulator::is_deterministic(size_t q) const {
  for (size_t p = n_; p < 2 * n_; ++p) {
    if (xb(p, q)) return false;
  }
  return true;
}

bool TableauSimulator::measure(size_t q, bool coin, bool* random) {
  size_t p = n_;
  while (p < 2 * n_ && !xb(p, q)) ++p;
  if (p < 2 * n_) {
    for (size_t i = 0; i < 2 * n_; ++i) {
      if (i != p && xb(i, q)) rowmul(i, p);
    }
    rowcopy(p - n_, p);
    rowclear(p);
    z_[p * w_ + (q >> 6)] |= uint64_t{1} << (q & 63);
    r_[p] = coin;
    if (random) *random = true;
    return coin;
  }
  const size_t scratch = 2 * n_;
  rowclear(scratch);
  for (size_t i = 0; i < n_; ++i) {
    if (xb(i, q)) rowmul(scratch, i + n_);
  }
  if (random) *random = false;
  return r_[scratch];
}

namespace {

uint32_t max_qubit(const std::vector<Instruction>& ins) {
  uint32_t m = 0;
  for (const auto& i : ins) {
    if (i.op == Op::REPEAT) {
      m = std::max(m, max_qubit(i.body));
    } else if (!is_annotation_op(i.op) && i.op != Op::TICK) {
      for (uint32_t t : i.targets) m = std::max(m, t + 1);
    }
  }
  return m;
}

class Runner {
 public:
  Runner(size_t n, const SimOptions& opt) : sim_(n), opt_(opt), rng_(opt.seed) {}

  void run(const std::vector<Instruction>& ins) {
    for (const auto& i : ins) step(i);
  }

  SimResult result;

 private:
  bool coin() {
    if (forced_used_ < opt_.forced.size()) return opt_.forced[forced_used_++] & 1;
    return rng_() & 1;
  }

  bool measure_z(uint32_t q, bool record) {
    bool random = false;
    bool c = sim_.is_deterministic(q) ? false : coin();
    bool v = sim_.measure(q, c, &random);
    if (record) {
      result.tape.push_back(v);
      result.random.push_back(random);
    } else {
      result.resets.push_back(random ? static_cast<int8_t>(v) : int8_t{-1});
    }
    return v;
  }

  uint8_t parity(const Instruction& i) const {
    uint8_t p = 0;
    for (uint32_t k : i.targets) {
      if (k == 0 || k > result.tape.size()) throw SimError("record lookback out of range");
      p ^= result.tape[result.tape.size() - k];
    }
    return p;
  }

  void step(const Instruction& i) {
    switch (i.op) {
      case Op::H:
        for (uint32_t q : i.targets) sim_.h(q);
        break;
      case Op::S:
        for (uint32_t q : i.targets) sim_.s(q);
        break;
      case Op::S_DAG:
        for (uint32_t q : i.targets) {
          sim_.s(q);
          sim_.s(q);
          sim_.s(q);
        }
        break;
      case Op::X:
        for (uint32_t q : i.targets) sim_.x(q);
        break;
      case Op::Y:
        for (uint32_t q : i.targets) {
          sim_.x(q);
          sim_.z(q);
        }
        break;
      case Op::Z:
        for (uint32_t q : i.targets) sim_.z(q);
        break;
      case Op::CX:
        for (size_t k = 0; k + 1 < i.targets.size(); k += 2) sim_.cx(i.targets[k], i.targets[k + 1]);
        break;
      case Op::CZ:
        for (size_t k = 0; k + 1 < i.targets.size(); k += 2) {
          sim_.h(i.targets[k + 1]);
          sim_.cx(i.targets[k], i.targets[k + 1]);
          sim_.h(i.targets[k + 1]);
        }
        break;
      case Op::SWAP:
        for (size_t k = 0; k + 1 < i.targets.size(); k += 2) {
          uint32_t a = i.targets[k], b = i.targets[k + 1];
          sim_.cx(a, b);
          sim_.cx(b, a);
          sim_.cx(a, b);
        }
        break;
      case Op::R:
        for (uint32_t q : i.targets) {
          if (measure_z(q, false)) sim_.x(q);
        }
        break;
      case Op::RX:
        for (uint32_t q : i.targets) {
          sim_.h(q);
          if (measure_z(q, false)) sim_.x(q);
          sim_.h(q);
        }
        break;
      case Op::M:
        for (uint32_t q : i.targets) measure_z(q, true);
        break;
      case Op::MX:
        for (uint32_t q : i.targets) {
          sim_.h(q);
          measure_z(q, true);
          sim_.h(q);
        }
        break;
      case Op::MR:
        for (uint32_t q : i.targets) {
          if (measure_z(q, true)) sim_.x(q);
        }
        break;
      case Op::MRX:
        for (uint32_t q : i.targets) {
          sim_.h(q);
          if (measure_z(q, true)) sim_.x(q);
          sim_.h(q);
        }
        break;
      case Op::REPEAT:
        for (uint64_t k = 0; k < i.repeat_count; ++k) run(i.body);
        break;
      case Op::SHIFT_COORDS:
        if (shift_.size() < i.args.size()) shift_.resize(i.args.size(), 0);
        for (size_t k = 0; k < i.args.size(); ++k) shift_[k] += i.args[k];
        break;
      case Op::DETECTOR: {
        result.detectors.push_back(parity(i));
        result.detector_expected.push_back(i.expected_parity);
        std::vector<double> c = i.args;
        for (size_t k = 0; k < c.size() && k < shift_.size(); ++k) c[k] += shift_[k];
        result.detector_coords.push_back(std::move(c));
        break;
      }
      case Op::OBSERVABLE_INCLUDE: {
        if (i.args.empty()) throw SimError("OBSERVABLE_INCLUDE without an index");
        size_t id = static_cast<size_t>(i.args[0]);
        if (result.observables.size() <= id) {
          result.observables.resize(id + 1, 0);
          result.observable_expected.resize(id + 1, 0);
        }
        result.observables[id] ^= parity(i);
        result.observable_expected[id] ^= i.expected_parity;
        break;
      }
      case Op::TICK:
      case Op::QUBIT_COORDS:
      case Op::DEPOLARIZE1:
      case Op::DEPOLARIZE2:
      case Op::X_ERROR:
      case Op::Z_ERROR:
      case Op::PAULI_CHANNEL_1:
        break;
    }
  }

  TableauSimulator sim_;
  const SimOptions& opt_;
  std::mt19937_64 rng_;
  size_t forced_used_ = 0;
  std::vector<double> shift_;
};

}  // namespace

SimResult simulate(const AnnotatedCircuit& c, const SimOptions& options) {
  size_t n = max_qubit(c.instructions);
  if (!c.qubit_coords.empty()) n = std::max<size_t>(n, c.qubit_coords.rbegin()->first + 1);
  Runner runner(n, options);
  runner.run(c.instructions);
  return std::move(runner.result);
}

DeterminismReport check_determinism(const AnnotatedCircuit& c, uint64_t num_seeds,
                                    unsigned threads) {
  if (num_seeds < 2) throw SimError("determinism check needs at least 2 seeds");
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<uint64_t>(threads, num_seeds));

  SimResult first = simulate(c, SimOptions{0, {}});
  const size_t nd = first.detectors.size();
  const size_t no = first.observables.size();
  std::vector<uint64_t> fails(nd + no, 0);
  std::vector<uint64_t> first_fail(nd + no, UINT64_MAX);
  std::mutex mu;
  std::atomic<uint64_t> next{0};

  auto tally = [&](const SimResult& r, uint64_t seed, std::vector<uint64_t>& f,
                   std::vector<uint64_t>& ff) {
    for (size_t k = 0; k < nd; ++k) {
      if (r.detectors[k] != r.detector_expected[k]) {
        ++f[k];
        ff[k] = std::min(ff[k], seed);
      }
    }
    for (size_t k = 0; k < no; ++k) {
      if (r.observables[k] != r.observable_expected[k]) {
        ++f[nd + k];
        ff[nd + k] = std::min(ff[nd + k], seed);
      }
    }
  };
  tally(first, 0, fails, first_fail);
  next = 1;

  auto worker = [&]() {
    std::vector<uint64_t> f(nd + no, 0), ff(nd + no, UINT64_MAX);
    for (uint64_t seed; (seed = next++) < num_seeds;) {
      tally(simulate(c, SimOptions{seed, {}}), seed, f, ff);
    }
    std::lock_guard<std::mutex> lock(mu);
    for (size_t k = 0; k < f.size(); ++k) {
      fails[k] += f[k];
      first_fail[k] = std::min(first_fail[k], ff[k]);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  DeterminismReport rep;
  rep.seeds = num_seeds;
  rep.detectors = nd;
  rep.observables = no;
  for (size_t k = 0; k < nd + no; ++k) {
    if (fails[k] == 0) continue;
    Violation v;
    v.observable = k >= nd;
    v.index = v.observable ? k - nd : k;
    v.failing_seeds = fails[k];
    v.first_seed = first_fail[k];
    if (!v.observable) v.coords = first.detector_coords[k];
    rep.violations.push_back(std::move(v));
  }
  return rep;
}

std::string DeterminismReport::describe() const {
  std::ostringstream os;
  for (const auto& v : violations) {
    os << (v.observable ? "observable " : "detector ") << v.index;
    if (!v.coords.empty()) {
      os << " coords(";
      for (size_t k = 0; k < v.coords.size(); ++k) os << (k ? "," : "") << format_number(v.coords[k]);
      os << ")";
    }
    os << " deviates in " << v.failing_seeds << "/" << seeds << " seeds (first seed "
       << v.first_seed << ")\n";
  }
  return os.str();
}

}  // namespace qtrack
