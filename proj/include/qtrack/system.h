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

#ifndef QTRACK_SYSTEM_H_
#define QTRACK_SYSTEM_H_

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "qtrack/code_library.h"

namespace qtrack {

class PlacementError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class LifecycleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class PatchState { Added, Active, Retired };

struct ActiveCheck {
  Check check;           // coordinates
  IndexedCheck indexed;  // global qubit indices
  std::string provenance;
};

struct SystemSnapshot {
  std::vector<uint32_t> data;      // sorted
  std::vector<uint32_t> ancillas;  // sorted
  std::vector<ActiveCheck> checks;
};

class QecSystem {
 public:
  size_t add_patch(const QecPatch& patch, const std::string& name = "");
  size_t add_coupler(size_t a, size_t b, CouplerBasis basis, int r_inter);
  void toggle_coupler(size_t id, bool on);
  void set_patch_state(size_t id, PatchState state);

  SystemSnapshot snapshot() const;

  size_t num_qubits() const { return coords_.size(); }
  const std::vector<XY>& coords() const { return coords_; }
  size_t num_patches() const { return patches_.size(); }
  size_t num_couplers() const { return couplers_.size(); }
  const QecPatch& patch(size_t id) const { return patches_.at(id).patch; }
  const std::string& patch_name(size_t id) const { return patches_.at(id).name; }
  PatchState patch_state(size_t id) const { return patches_.at(id).state; }
  const std::vector<uint32_t>& patch_data(size_t id) const { return patches_.at(id).data; }
  const std::vector<uint32_t>& patch_syndrome(size_t id) const {
    return patches_.at(id).syndrome;
  }
  const CouplerSpec& coupler(size_t id) const { return couplers_.at(id).spec; }
  bool coupler_active(size_t id) const { return couplers_.at(id).active; }
  std::pair<size_t, size_t> coupler_patches(size_t id) const {
    return {couplers_.at(id).a, couplers_.at(id).b};
  }
  // Valid while the coupler is active.
  const std::vector<uint32_t>& coupler_data(size_t id) const { return couplers_.at(id).data; }
  const std::vector<uint32_t>& coupler_syndrome(size_t id) const {
    return couplers_.at(id).syndrome;
  }

  // Local patch operator mapped onto the global index space.
  PauliString lift(size_t patch_id, const PauliString& local) const;
  uint32_t index_of(XY c) const;

 private:
  struct PatchEntry {
    QecPatch patch;
    std::string name;
    PatchState state = PatchState::Added;
    std::vector<uint32_t> data;
    std::vector<uint32_t> syndrome;
  };
  struct CouplerEntry {
    CouplerSpec spec;
    size_t a = 0;
    size_t b = 0;
    bool active = false;
    std::vector<uint32_t> data;
    std::vector<uint32_t> syndrome;
  };

  uint32_t allocate(XY c);
  void release(XY c);
  IndexedCheck index_check(const Check& c) const;
  void check_commutation() const;

  std::vector<XY> coords_;
  std::map<XY, uint32_t> plane_;
  std::vector<PatchEntry> patches_;
  std::vector<CouplerEntry> couplers_;
};

}  // namespace qtrack

#endif  // QTRACK_SYSTEM_H_
