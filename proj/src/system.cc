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

#include "qtrack/system.h"

#include <algorithm>
#include <set>

namespace qtrack {
namespace {

std::string coord_str(XY c) { return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")"; }

}  // namespace

uint32_t QecSystem::allocate(XY c) {
  if (plane_.count(c)) throw PlacementError("coordinate " + coord_str(c) + " already in use");
  uint32_t q = static_cast<uint32_t>(coords_.size());
  coords_.push_back(c);
  plane_[c] = q;
  return q;
}

void QecSystem::release(XY c) { plane_.erase(c); }

uint32_t QecSystem::index_of(XY c) const {
  auto it = plane_.find(c);
  if (it == plane_.end()) throw PlacementError("no live qubit at " + coord_str(c));
  return it->second;
}

size_t QecSystem::add_patch(const QecPatch& patch, const std::string& name) {
  std::vector<XY> all = patch.data_qubits;
  all.insert(all.end(), patch.syndrome_qubits.begin(), patch.syndrome_qubits.end());
  std::sort(all.begin(), all.end());
  for (const XY& c : all) {
    if (plane_.count(c)) {
      throw PlacementError("patch overlaps a live qubit at " + coord_str(c));
    }
  }
  for (const XY& c : all) allocate(c);
  PatchEntry e{patch, name.empty() ? "p" + std::to_string(patches_.size()) : name,
               PatchState::Added, {}, {}};
  for (const XY& c : patch.data_qubits) e.data.push_back(plane_.at(c));
  for (const XY& c : patch.syndrome_qubits) e.syndrome.push_back(plane_.at(c));
  patches_.push_back(std::move(e));
  return patches_.size() - 1;
}

size_t QecSystem::add_coupler(size_t a, size_t b, CouplerBasis basis, int r_inter) {
  if (a >= patches_.size() || b >= patches_.size() || a == b) {
    throw LifecycleError("coupler needs two distinct known patches");
  }
  CouplerEntry e{ls_coupler(patches_[a].patch, patches_[b].patch, basis, r_inter), a, b,
                 false, {}, {}};
  couplers_.push_back(std::move(e));
  return couplers_.size() - 1;
}

void QecSystem::set_patch_state(size_t id, PatchState state) {
  PatchEntry& e = patches_.at(id);
  if (state == PatchState::Retired && e.state != PatchState::Retired) {
    for (const auto& c : couplers_) {
      if (c.active && (c.a == id || c.b == id)) {
        throw LifecycleError("patch " + e.name + " still has an active coupler");
      }
    }
    for (const XY& c : e.patch.data_qubits) release(c);
    for (const XY& c : e.patch.syndrome_qubits) release(c);
  }
  if (e.state == PatchState::Retired && state != PatchState::Retired) {
    throw LifecycleError("retired patch " + e.name + " cannot be revived");
  }
  e.state = state;
}

void QecSystem::toggle_coupler(size_t id, bool on) {
  if (id >= couplers_.size()) throw LifecycleError("unknown coupler");
  CouplerEntry& e = couplers_[id];
  if (on) {
    if (e.active) throw LifecycleError("coupler already active");
    if (patches_[e.a].state != PatchState::Active || patches_[e.b].state != PatchState::Active) {
      throw LifecycleError("coupler patches must be initialized and live");
    }
    for (const auto& other : couplers_) {
      if (&other == &e || !other.active) continue;
      for (const auto& m : other.spec.modified_checks)
        for (const auto& mine : e.spec.modified_checks)
          if (m.ancilla == mine.ancilla) throw LifecycleError("couplers share a boundary check");
    }
    std::vector<XY> all = e.spec.seam_data;
    all.insert(all.end(), e.spec.seam_syndrome.begin(), e.spec.seam_syndrome.end());
    std::sort(all.begin(), all.end());
    for (const XY& c : all) {
      if (plane_.count(c)) throw PlacementError("coupler seam overlaps " + coord_str(c));
    }
    for (const XY& c : all) allocate(c);
    e.data.clear();
    e.syndrome.clear();
    for (const XY& c : e.spec.seam_data) e.data.push_back(plane_.at(c));
    for (const XY& c : e.spec.seam_syndrome) e.syndrome.push_back(plane_.at(c));
    e.active = true;
    try {
      check_commutation();
    } catch (...) {
      e.active = false;
      for (const XY& c : all) release(c);
      throw;
    }
  } else {
    if (!e.active) throw LifecycleError("coupler is not active");
    for (const XY& c : e.spec.seam_data) release(c);
    for (const XY& c : e.spec.seam_syndrome) release(c);
    e.active = false;
  }
}

IndexedCheck QecSystem::index_check(const Check& c) const {
  IndexedCheck ic{c.type, index_of(c.ancilla), {-1, -1, -1, -1}};
  for (int k = 0; k < 4; ++k)
    if (c.dirs[k]) ic.dirs[k] = index_of(*c.dirs[k]);
  return ic;
}

SystemSnapshot QecSystem::snapshot() const {
  SystemSnapshot s;
  std::map<XY, std::pair<const Check*, size_t>> replaced;
  for (size_t k = 0; k < couplers_.size(); ++k) {
    if (!couplers_[k].active) continue;
    for (const auto& m : couplers_[k].spec.modified_checks) replaced[m.ancilla] = {&m, k};
  }
  std::set<uint32_t> data;
  for (const auto& p : patches_) {
    if (p.state != PatchState::Active) continue;
    data.insert(p.data.begin(), p.data.end());
    for (const auto& c : p.patch.checks) {
      auto it = replaced.find(c.ancilla);
      if (it != replaced.end()) {
        s.checks.push_back({*it->second.first, index_check(*it->second.first),
                            "coupler" + std::to_string(it->second.second)});
      } else {
        s.checks.push_back({c, index_check(c), p.name});
      }
    }
  }
  for (size_t k = 0; k < couplers_.size(); ++k) {
    const auto& e = couplers_[k];
    if (!e.active) continue;
    data.insert(e.data.begin(), e.data.end());
    for (const auto& c : e.spec.new_checks) {
      s.checks.push_back({c, index_check(c), "coupler" + std::to_string(k)});
    }
  }
  std::sort(s.checks.begin(), s.checks.end(), [](const ActiveCheck& a, const ActiveCheck& b) {
    return a.indexed.ancilla < b.indexed.ancilla;
  });
  s.data.assign(data.begin(), data.end());
  for (const auto& c : s.checks) s.ancillas.push_back(c.indexed.ancilla);
  return s;
}

void QecSystem::check_commutation() const {
  SystemSnapshot s = snapshot();
  const size_t n = coords_.size();
  std::vector<PauliString> ops;
  for (const auto& c : s.checks) {
    PauliString p(n);
    for (int64_t q : c.indexed.dirs) {
      if (q < 0) continue;
      if (c.check.type == CheckType::X) {
        p.set(q, true, false);
      } else {
        p.set(q, false, true);
      }
    }
    ops.push_back(p);
  }
  for (size_t i = 0; i < ops.size(); ++i)
    for (size_t j = i + 1; j < ops.size(); ++j)
      if (!commutes(ops[i], ops[j])) {
        throw PlacementError("active checks at " + coord_str(s.checks[i].check.ancilla) +
                             " and " + coord_str(s.checks[j].check.ancilla) + " anticommute");
      }
}

PauliString QecSystem::lift(size_t patch_id, const PauliString& local) const {
  const PatchEntry& e = patches_.at(patch_id);
  if (local.n != e.data.size()) throw DimensionError("local operator size mismatch");
  PauliString g(coords_.size());
  g.phase = local.phase;
  for (size_t q = 0; q < local.n; ++q) g.set(e.data[q], local.x(q), local.z(q));
  return g;
}

}  // namespace qtrack
