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

// Acceptance suite: one PASS/FAIL line per primary criterion. Exit status is
// the number of failing criteria.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "branch_oracle.h"
#include "qtrack/config.h"
#include "qtrack/verifier.h"
#include "structure_oracle.h"

namespace {

using qtrack::AnnotatedCircuit;
using qtrack::CompiledProtocol;
using qtrack::ConfigOverrides;

constexpr double kCountsBudgetS = 1.0;
constexpr double kD31CompileBudgetS = 60.0;
constexpr double kDeterminismBudgetS = 120.0;
constexpr uint64_t kDeterminismSeeds = 100;
constexpr uint64_t kRepeatRounds = 5;
constexpr uint64_t kRrefRatio = 3;
constexpr int kOracleCircuits = 1000;
constexpr size_t kOracleMaxQubits = 10;
constexpr size_t kBellObservableWeight = 6;

const char* kDistance3[] = {
    "rep_memory_d3", "memory_d3",  "memory_x_d3", "unrotated_memory_d3", "toric_memory_d3",
    "tg_h_d3",       "tg_s_d3",    "tg_cnot_d3",  "ls_zz_d3",            "ls_xx_d3",
    "ls_cnot_d3",    "bell_tg_d3", "bell_ls_d3",
};

CompiledProtocol compile(const std::string& name, const ConfigOverrides& ov = {}) {
  return qtrack::compile_config_file(qtrack::bundled_config_dir() + "/" + name + ".json", ov);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Outcome rotated_counts() {
  auto t0 = std::chrono::steady_clock::now();
  const std::pair<const char*, uint64_t> want[] = {
      {"memory_d3", 24}, {"memory_d5", 120}, {"memory_d7", 336}};
  std::string got;
  bool ok = true;
  for (const auto& [name, det] : want) {
    qtrack::CompileStats s = compile(name).result.stats;
    ok &= s.detectors == det && s.observables == 1;
    got += fmt("%s=%llu/%llu ", name, (unsigned long long)s.detectors,
               (unsigned long long)s.observables);
  }
  const double t = seconds_since(t0);
  ok &= t < kCountsBudgetS;
  return {ok, got + fmt("time=%.3fs budget=%.0fs", t, kCountsBudgetS)};
}

Outcome annotation_scaling() {
  uint64_t a11 = compile("memory_d11").result.stats.annotations;
  auto t0 = std::chrono::steady_clock::now();
  uint64_t a31 = compile("memory_d31").result.stats.annotations;
  const double t = seconds_since(t0);
  bool ok = a11 == 1321 && a31 == 29761 && t < kD31CompileBudgetS;
  return {ok, fmt("d11=%llu (want 1321) d31=%llu (want 29761) d31_compile=%.3fs budget=%.0fs",
                  (unsigned long long)a11, (unsigned long long)a31, t, kD31CompileBudgetS)};
}

Outcome determinism_suite() {
  auto t0 = std::chrono::steady_clock::now();
  size_t violations = 0;
  std::string failing;
  for (const char* name : kDistance3) {
    AnnotatedCircuit c = qtrack::parse_text(qtrack::emit_text(compile(name).result.circuit));
    qtrack::DeterminismReport rep = qtrack::check_determinism(c, kDeterminismSeeds);
    violations += rep.violations.size();
    if (!rep.ok()) failing += std::string(" ") + name;
  }
  const double t = seconds_since(t0);
  bool ok = violations == 0 && t < kDeterminismBudgetS;
  return {ok, fmt("protocols=%zu seeds=%llu violations=%zu%s time=%.2fs budget=%.0fs",
                  std::size(kDistance3), (unsigned long long)kDeterminismSeeds, violations,
                  failing.c_str(), t, kDeterminismBudgetS)};
}

Outcome cnot_cross_patch() {
  size_t n = oracle::cross_group_detectors(compile("tg_cnot_d3").result.circuit);
  return {n >= 1, fmt("cross_patch_detectors=%zu (want >= 1)", n)};
}

Outcome bell_feed_forward() {
  CompiledProtocol p = compile("bell_ls_d3");
  oracle::ObservableMix m = oracle::observable_mix(p.result.circuit, 0);
  bool det = qtrack::check_determinism(p.result.circuit, kDeterminismSeeds).ok();
  bool ok = p.result.stats.observables == 1 && m.data_records > 0 && m.merge_records > 0 &&
            m.weight == kBellObservableWeight && det;
  return {ok, fmt("observables=%llu weight=%zu (golden %zu) data=%zu merge=%zu deterministic=%s",
                  (unsigned long long)p.result.stats.observables, m.weight,
                  kBellObservableWeight, m.data_records, m.merge_records, det ? "yes" : "no")};
}

Outcome toric_surplus() {
  const int d = 3;
  uint64_t got = compile("toric_memory_d3").result.stats.detectors;
  oracle::MemoryCount want = oracle::z_memory_count(qtrack::build_patch(qtrack::Family::Toric, d), d);
  bool ok = got > want.pairwise_only && got - want.pairwise_only == want.nullity * (d + 1);
  return {ok, fmt("detectors=%llu pairwise_only=%llu nullity=%llu boundaries=%d",
                  (unsigned long long)got, (unsigned long long)want.pairwise_only,
                  (unsigned long long)want.nullity, d + 1)};
}

Outcome repeat_equivalence() {
  size_t mismatched = 0;
  std::string failing;
  for (const char* name : kDistance3) {
    ConfigOverrides folded;
    folded.params["r"] = kRepeatRounds;
    ConfigOverrides forced = folded;
    forced.use_repeat = false;
    AnnotatedCircuit a = compile(name, folded).result.circuit;
    AnnotatedCircuit b = compile(name, forced).result.circuit;
    if (qtrack::flatten(a.instructions) != qtrack::flatten(b.instructions) ||
        a.qubit_coords != b.qubit_coords) {
      ++mismatched;
      failing += std::string(" ") + name;
    }
  }
  ConfigOverrides r10, r100;
  r10.params["r"] = 10;
  r100.params["r"] = 100;
  uint64_t s10 = compile("memory_d3", r10).result.stats.rref_solves;
  uint64_t s100 = compile("memory_d3", r100).result.stats.rref_solves;
  bool ok = mismatched == 0 && s10 > 0 && s100 <= kRrefRatio * s10;
  return {ok, fmt("protocols=%zu rounds=%llu mismatched=%zu%s rref_se10=%llu rref_se100=%llu "
                  "(limit %llux)",
                  std::size(kDistance3), (unsigned long long)kRepeatRounds, mismatched,
                  failing.c_str(), (unsigned long long)s10, (unsigned long long)s100,
                  (unsigned long long)kRrefRatio)};
}

Outcome dense_oracle() {
  std::mt19937_64 rng(20260101);
  size_t branches = 0;
  for (int trial = 0; trial < kOracleCircuits; ++trial) {
    const size_t n = 1 + rng() % kOracleMaxQubits;
    AnnotatedCircuit c = oracle::random_circuit(rng, n, 5);
    std::string error;
    branches += oracle::check_all_branches(c, n, &error);
    if (!error.empty()) return {false, fmt("trial %d: %s", trial, error.c_str())};
  }
  return {true, fmt("circuits=%d max_qubits=%zu branches=%zu", kOracleCircuits, kOracleMaxQubits,
                    branches)};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"rotated-memory-counts", rotated_counts},
      {"annotation-scaling", annotation_scaling},
      {"determinism-suite", determinism_suite},
      {"tg-cnot-cross-patch-detector", cnot_cross_patch},
      {"ls-bell-feed-forward-observable", bell_feed_forward},
      {"toric-dependent-stabilizers", toric_surplus},
      {"repeat-block-equivalence", repeat_equivalence},
      {"dense-oracle-agreement", dense_oracle},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed;
}
