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

#include "qtrack/code_library.h"

#include <algorithm>
#include <map>
#include <set>

namespace qtrack {
namespace {

struct LocalLogical {
  std::string label;
  char basis;
  std::vector<XY> support;
};

struct LocalLayout {
  int width = 0;  // max local x
  int height = 0;
  std::vector<XY> data;
  std::vector<Check> checks;
  std::vector<LocalLogical> logicals;
};

// Canonical directions. Rotated: diagonal neighbours; others: N, W, E, S.
constexpr XY kDiag[4] = {{1, 1}, {-1, 1}, {1, -1}, {-1, -1}};
constexpr XY kAxis[4] = {{0, -1}, {-1, 0}, {1, 0}, {0, 1}};

LocalLayout rotated_layout(int d) {
  LocalLayout L;
  L.width = L.height = 2 * d;
  std::set<XY> data;
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) data.insert({2 * i + 1, 2 * j + 1});
  L.data.assign(data.begin(), data.end());
  for (int y = 0; y <= 2 * d; y += 2) {
    for (int x = 0; x <= 2 * d; x += 2) {
      const bool is_x = ((x / 2 + y / 2) % 2) == 1;
      const bool on_lr = x == 0 || x == 2 * d;
      const bool on_tb = y == 0 || y == 2 * d;
      if (on_lr && on_tb) continue;
      if (on_lr && is_x) continue;
      if (on_tb && !is_x) continue;
      Check c{is_x ? CheckType::X : CheckType::Z, {x, y}, {}};
      for (int k = 0; k < 4; ++k) {
        XY q{x + kDiag[k].x, y + kDiag[k].y};
        if (data.count(q)) c.dirs[k] = q;
      }
      L.checks.push_back(c);
    }
  }
  LocalLogical z{"Z0", 'Z', {}}, xl{"X0", 'X', {}};
  for (int i = 0; i < d; ++i) {
    z.support.push_back({2 * i + 1, 1});
    xl.support.push_back({1, 2 * i + 1});
  }
  L.logicals = {xl, z};
  return L;
}

// Unrotated lattice on a (w x h) data box: data at x+y even, X checks at odd x
// even y, Z checks at even x odd y.
void unrotated_checks(int max_x, int max_y, std::vector<XY>& data, std::vector<Check>& checks) {
  std::set<XY> ds;
  for (int y = 0; y <= max_y; ++y)
    for (int x = 0; x <= max_x; ++x)
      if ((x + y) % 2 == 0) ds.insert({x, y});
  data.assign(ds.begin(), ds.end());
  for (int y = 0; y <= max_y; ++y) {
    for (int x = 0; x <= max_x; ++x) {
      if ((x + y) % 2 == 0) continue;
      Check c{x % 2 == 1 ? CheckType::X : CheckType::Z, {x, y}, {}};
      for (int k = 0; k < 4; ++k) {
        XY q{x + kAxis[k].x, y + kAxis[k].y};
        if (ds.count(q)) c.dirs[k] = q;
      }
      checks.push_back(c);
    }
  }
}

LocalLayout unrotated_layout(int d) {
  LocalLayout L;
  L.width = L.height = 2 * d - 2;
  unrotated_checks(L.width, L.height, L.data, L.checks);
  LocalLogical z{"Z0", 'Z', {}}, xl{"X0", 'X', {}};
  for (int i = 0; i < d; ++i) {
    z.support.push_back({2 * i, 0});
    xl.support.push_back({0, 2 * i});
  }
  L.logicals = {xl, z};
  return L;
}

LocalLayout toric_layout(int d) {
  LocalLayout L;
  const int m = 2 * d;
  L.width = L.height = m - 1;
  for (int y = 0; y < m; ++y)
    for (int x = 0; x < m; ++x)
      if ((x + y) % 2 == 1) L.data.push_back({x, y});
  for (int y = 0; y < m; ++y) {
    for (int x = 0; x < m; ++x) {
      if ((x + y) % 2 == 1) continue;
      Check c{x % 2 == 0 ? CheckType::X : CheckType::Z, {x, y}, {}};
      for (int k = 0; k < 4; ++k) {
        c.dirs[k] = XY{(x + kAxis[k].x + m) % m, (y + kAxis[k].y + m) % m};
      }
      L.checks.push_back(c);
    }
  }
  LocalLogical z0{"Z0", 'Z', {}}, x0{"X0", 'X', {}}, z1{"Z1", 'Z', {}}, x1{"X1", 'X', {}};
  for (int k = 0; k < d; ++k) {
    z0.support.push_back({2 * k + 1, 0});
    x0.support.push_back({1, 2 * k});
    z1.support.push_back({0, 2 * k + 1});
    x1.support.push_back({2 * k, 1});
  }
  L.logicals = {x0, z0, x1, z1};
  return L;
}

LocalLayout repetition_layout(int d) {
  LocalLayout L;
  L.width = 2 * d - 2;
  L.height = 0;
  for (int i = 0; i < d; ++i) L.data.push_back({2 * i, 0});
  for (int i = 0; i + 1 < d; ++i) {
    Check c{CheckType::Z, {2 * i + 1, 0}, {}};
    c.dirs[1] = XY{2 * i, 0};
    c.dirs[2] = XY{2 * i + 2, 0};
    L.checks.push_back(c);
  }
  LocalLogical z{"Z0", 'Z', {{0, 0}}}, xl{"X0", 'X', L.data};
  L.logicals = {xl, z};
  return L;
}

XY transform(XY p, int w, int h, int orientation, XY origin) {
  XY r = p;
  switch (orientation) {
    case 90: r = {h - p.y, p.x}; break;
    case 180: r = {w - p.x, h - p.y}; break;
    case 270: r = {p.y, w - p.x}; break;
    default: break;
  }
  return {r.x + origin.x, r.y + origin.y};
}

PauliString pauli_on(const std::vector<XY>& order, const std::vector<XY>& support, char basis) {
  PauliString p(order.size());
  for (const XY& c : support) {
    auto it = std::lower_bound(order.begin(), order.end(), c);
    if (it == order.end() || !(*it == c)) throw CodeError("support outside qubit list");
    size_t q = static_cast<size_t>(it - order.begin());
    p.set(q, basis == 'X' || p.x(q), basis == 'Z' || p.z(q));
  }
  return p;
}

}  // namespace

std::vector<XY> Check::support() const {
  std::vector<XY> s;
  for (const auto& q : dirs)
    if (q) s.push_back(*q);
  std::sort(s.begin(), s.end());
  return s;
}

const char* family_name(Family f) {
  switch (f) {
    case Family::Repetition: return "repetition";
    case Family::RotatedSurface: return "rotated_surface";
    case Family::UnrotatedSurface: return "unrotated_surface";
    case Family::Toric: return "toric";
  }
  return "?";
}

Family parse_family(const std::string& name) {
  for (Family f : {Family::Repetition, Family::RotatedSurface, Family::UnrotatedSurface,
                   Family::Toric}) {
    if (name == family_name(f)) return f;
  }
  throw CodeError("unknown code family '" + name + "'");
}

std::array<int, 4> cx_order(CheckType type, ScheduleVariant variant) {
  const bool x_order = (type == CheckType::X) == (variant == ScheduleVariant::Standard);
  if (x_order) return {0, 1, 2, 3};
  return {0, 2, 1, 3};
}

const PauliString& QecPatch::logical(char basis, size_t k) const {
  const std::string label = std::string(1, basis) + std::to_string(k);
  for (const auto& l : logical_ops)
    if (l.label == label) return l.op;
  throw CodeError("patch has no logical " + label);
}

std::optional<size_t> QecPatch::data_index(XY c) const {
  auto it = std::lower_bound(data_qubits.begin(), data_qubits.end(), c);
  if (it == data_qubits.end() || !(*it == c)) return std::nullopt;
  return static_cast<size_t>(it - data_qubits.begin());
}

PauliString QecPatch::check_pauli(const Check& c) const {
  return pauli_on(data_qubits, c.support(), c.type == CheckType::X ? 'X' : 'Z');
}

QecPatch build_patch(Family family, int d, XY origin, int orientation) {
  if (d < 2 || (family != Family::Repetition && d < 3)) {
    throw CodeError("distance too small for " + std::string(family_name(family)));
  }
  if (orientation % 90 != 0 || orientation < 0 || orientation >= 360) {
    throw CodeError("orientation must be 0, 90, 180 or 270");
  }
  if (origin.x < 0 || origin.y < 0) throw CodeError("patch origin must be non-negative");
  LocalLayout L;
  switch (family) {
    case Family::Repetition: L = repetition_layout(d); break;
    case Family::RotatedSurface: L = rotated_layout(d); break;
    case Family::UnrotatedSurface: L = unrotated_layout(d); break;
    case Family::Toric: L = toric_layout(d); break;
  }
  auto tf = [&](XY p) { return transform(p, L.width, L.height, orientation, origin); };
  QecPatch patch;
  patch.family = family;
  patch.d = d;
  patch.origin = origin;
  patch.orientation = orientation;
  std::vector<std::pair<XY, XY>> data;
  for (const XY& p : L.data) data.push_back({tf(p), p});
  std::sort(data.begin(), data.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& [g, l] : data) {
    patch.data_qubits.push_back(g);
    patch.data_local.push_back(l);
  }
  for (Check c : L.checks) {
    c.ancilla = tf(c.ancilla);
    for (auto& q : c.dirs)
      if (q) q = tf(*q);
    patch.checks.push_back(c);
  }
  std::sort(patch.checks.begin(), patch.checks.end(),
            [](const Check& a, const Check& b) { return a.ancilla < b.ancilla; });
  for (const auto& c : patch.checks) {
    patch.syndrome_qubits.push_back(c.ancilla);
    patch.stabilizers.push_back(patch.check_pauli(c));
  }
  for (const auto& l : L.logicals) {
    std::vector<XY> sup;
    for (const XY& p : l.support) sup.push_back(tf(p));
    patch.logical_ops.push_back({l.label, pauli_on(patch.data_qubits, sup, l.basis)});
  }
  return patch;
}

std::vector<CliffordGate> SeSchedule::unitary() const {
  std::vector<CliffordGate> out;
  for (const auto& t : ticks) out.insert(out.end(), t.gates.begin(), t.gates.end());
  return out;
}

SeSchedule build_se_schedule(const std::vector<IndexedCheck>& checks, ScheduleVariant variant) {
  SeSchedule s;
  s.variant = variant;
  std::vector<uint32_t> anc, x_anc;
  for (const auto& c : checks) {
    anc.push_back(c.ancilla);
    if (c.type == CheckType::X) x_anc.push_back(c.ancilla);
  }
  std::sort(anc.begin(), anc.end());
  std::sort(x_anc.begin(), x_anc.end());
  s.ticks.push_back({SeLayer::Reset, {}, anc});
  SeLayer h{SeLayer::Hadamard, {}, {}};
  for (uint32_t q : x_anc) h.gates.push_back(CliffordGate::one(GateKind::H, q));
  if (!h.gates.empty()) s.ticks.push_back(h);
  for (int layer = 0; layer < 4; ++layer) {
    SeLayer cx{SeLayer::Cnot, {}, {}};
    std::vector<std::pair<uint32_t, uint32_t>> pairs;
    for (const auto& c : checks) {
      const int64_t q = c.dirs[cx_order(c.type, variant)[layer]];
      if (q < 0) continue;
      if (c.type == CheckType::X) {
        pairs.push_back({c.ancilla, static_cast<uint32_t>(q)});
      } else {
        pairs.push_back({static_cast<uint32_t>(q), c.ancilla});
      }
    }
    std::sort(pairs.begin(), pairs.end());
    for (auto [a, b] : pairs) cx.gates.push_back(CliffordGate::two(GateKind::CX, a, b));
    if (!cx.gates.empty()) s.ticks.push_back(cx);
  }
  if (!h.gates.empty()) s.ticks.push_back(h);
  s.ticks.push_back({SeLayer::Measure, {}, anc});
  return s;
}

SeSchedule se_schedule(const QecPatch& patch, ScheduleVariant variant) {
  const size_t nd = patch.data_qubits.size();
  std::vector<IndexedCheck> checks;
  for (size_t k = 0; k < patch.checks.size(); ++k) {
    const Check& c = patch.checks[k];
    IndexedCheck ic{c.type, static_cast<uint32_t>(nd + k), {-1, -1, -1, -1}};
    for (int j = 0; j < 4; ++j)
      if (c.dirs[j]) ic.dirs[j] = static_cast<int64_t>(*patch.data_index(*c.dirs[j]));
    checks.push_back(ic);
  }
  return build_se_schedule(checks, variant);
}

namespace {

struct Parities {
  int data;
  std::pair<int, int> x_class;
};

Parities lattice_parities(const QecPatch& p) {
  Parities r{((p.data_qubits[0].x + p.data_qubits[0].y) % 2 + 2) % 2, {-1, -1}};
  for (const auto& c : p.checks) {
    if (c.type == CheckType::X) {
      r.x_class = {c.ancilla.x % 2, c.ancilla.y % 2};
      break;
    }
  }
  return r;
}

struct Box {
  int x0, y0, x1, y1;
};

Box data_box(const QecPatch& p) {
  Box b{p.data_qubits[0].x, p.data_qubits[0].y, p.data_qubits[0].x, p.data_qubits[0].y};
  for (const XY& q : p.data_qubits) {
    b.x0 = std::min(b.x0, q.x);
    b.y0 = std::min(b.y0, q.y);
    b.x1 = std::max(b.x1, q.x);
    b.y1 = std::max(b.y1, q.y);
  }
  return b;
}

}  // namespace

XY coupler_partner_origin(const QecPatch& a, CouplerBasis basis, int r_inter) {
  if (a.family != Family::UnrotatedSurface) {
    throw CodeError("couplers are only supported between unrotated surface patches");
  }
  // Rows of weight-3 X checks run along the top and bottom at orientation 0.
  const bool rotated = a.orientation == 90 || a.orientation == 270;
  const bool vertical = (basis == CouplerBasis::ZZ) != rotated;
  const int step = 2 * a.d + 2 * r_inter;
  return vertical ? XY{a.origin.x, a.origin.y + step} : XY{a.origin.x + step, a.origin.y};
}

CouplerSpec ls_coupler(const QecPatch& a, const QecPatch& b, CouplerBasis basis, int r_inter) {
  if (a.family != Family::UnrotatedSurface || b.family != Family::UnrotatedSurface) {
    throw CodeError("couplers are only supported between unrotated surface patches");
  }
  if (a.d != b.d) throw CodeError("coupled patches must share a distance");
  if (r_inter < 0) throw CodeError("routing width must be non-negative");
  const Parities pa = lattice_parities(a), pb = lattice_parities(b);
  if (pa.data != pb.data || pa.x_class != pb.x_class) {
    throw CodeError("coupled patches sit on incompatible lattices");
  }
  Box ba = data_box(a), bb = data_box(b);
  const int gap = 2 + 2 * r_inter;
  bool vertical;
  if (ba.x0 == bb.x0 && ba.x1 == bb.x1 && (bb.y0 - ba.y1 == gap || ba.y0 - bb.y1 == gap)) {
    vertical = true;
  } else if (ba.y0 == bb.y0 && ba.y1 == bb.y1 &&
             (bb.x0 - ba.x1 == gap || ba.x0 - bb.x1 == gap)) {
    vertical = false;
  } else {
    throw CodeError("patches are not aligned at the requested routing width");
  }
  Box box{std::min(ba.x0, bb.x0), std::min(ba.y0, bb.y0), std::max(ba.x1, bb.x1),
          std::max(ba.y1, bb.y1)};
  auto in_seam = [&](XY q) {
    if (vertical) {
      int lo = std::min(ba.y1, bb.y1), hi = std::max(ba.y0, bb.y0);
      return q.y > lo && q.y < hi;
    }
    int lo = std::min(ba.x1, bb.x1), hi = std::max(ba.x0, bb.x0);
    return q.x > lo && q.x < hi;
  };
  auto is_data = [&](XY q) {
    return q.x >= box.x0 && q.x <= box.x1 && q.y >= box.y0 && q.y <= box.y1 &&
           ((q.x + q.y) % 2 + 2) % 2 == pa.data;
  };

  CouplerSpec spec;
  spec.basis = basis;
  spec.r_inter = r_inter;
  std::set<XY> merged(a.data_qubits.begin(), a.data_qubits.end());
  merged.insert(b.data_qubits.begin(), b.data_qubits.end());
  std::vector<Check> all;
  std::map<XY, const Check*> patch_checks;
  for (const auto* p : {&a, &b})
    for (const auto& c : p->checks) patch_checks[c.ancilla] = &c;
  for (int y = box.y0; y <= box.y1; ++y) {
    for (int x = box.x0; x <= box.x1; ++x) {
      XY q{x, y};
      if (is_data(q)) {
        if (in_seam(q)) {
          spec.seam_data.push_back(q);
          merged.insert(q);
        }
        continue;
      }
      const bool is_x = std::pair<int, int>{((x % 2) + 2) % 2, ((y % 2) + 2) % 2} == pa.x_class;
      // Each ancilla's neighbours are classified in the orientation-0 direction set;
      // only the support matters for merged checks, order follows the patch rules.
      Check c{is_x ? CheckType::X : CheckType::Z, q, {}};
      for (int k = 0; k < 4; ++k) {
        XY n{x + kAxis[k].x, y + kAxis[k].y};
        if (is_data(n)) c.dirs[k] = n;
      }
      auto it = patch_checks.find(q);
      if (it != patch_checks.end()) {
        if (c.support() != it->second->support()) {
          // Keep the patch's direction labelling and add the seam neighbour.
          Check m = *it->second;
          for (int k = 0; k < 4; ++k) {
            XY n{x + kAxis[k].x, y + kAxis[k].y};
            if (!is_data(n) || !in_seam(n)) continue;
            bool placed = false;
            for (auto& slot : m.dirs) {
              if (slot && *slot == n) placed = true;
            }
            if (placed) continue;
            // The empty slot facing the seam in the patch frame.
            for (int s = 0; s < 4 && !placed; ++s) {
              if (!m.dirs[s]) {
                m.dirs[s] = n;
                placed = true;
              }
            }
          }
          if (m.support() != c.support()) throw CodeError("boundary check update failed");
          spec.modified_checks.push_back(m);
          all.push_back(m);
        } else {
          all.push_back(*it->second);
        }
      } else if (in_seam(q) && !c.support().empty()) {
        spec.new_checks.push_back(c);
        spec.seam_syndrome.push_back(q);
        all.push_back(c);
      }
    }
  }
  spec.merged_data.assign(merged.begin(), merged.end());
  for (const auto& c : all) {
    spec.merged_stabilizers.push_back(
        pauli_on(spec.merged_data, c.support(), c.type == CheckType::X ? 'X' : 'Z'));
  }
  const char lb = basis == CouplerBasis::ZZ ? 'Z' : 'X';
  const CheckType want = basis == CouplerBasis::ZZ ? CheckType::Z : CheckType::X;
  spec.seam_product = PauliString(spec.merged_data.size());
  for (const auto& c : spec.new_checks) {
    if (c.type == want) {
      spec.seam_product.mul_right(
          pauli_on(spec.merged_data, c.support(), c.type == CheckType::X ? 'X' : 'Z'));
    }
  }
  auto lift = [&](const QecPatch& p, const PauliString& op) {
    std::vector<XY> sup;
    for (size_t q : op.support()) sup.push_back(p.data_qubits[q]);
    return pauli_on(spec.merged_data, sup, lb);
  };
  spec.measured_product = multiply(lift(a, a.logical(lb)), lift(b, b.logical(lb)));
  // The seam product must equal the logical product up to the patches' own checks.
  RrefBasis span(spec.merged_data.size());
  for (const auto* p : {&a, &b}) {
    for (const auto& c : p->checks) {
      if (c.type == want) {
        span.add(pauli_on(spec.merged_data, c.support(), lb));
      }
    }
  }
  const PauliString diff = multiply(spec.seam_product, spec.measured_product);
  if (spec.seam_product.is_identity() || !span.in_span(diff)) {
    throw CodeError("patch boundaries do not support a " +
                    std::string(basis == CouplerBasis::ZZ ? "ZZ" : "XX") + " coupler here");
  }
  return spec;
}

std::vector<CoordGate> transversal_block(TransversalKind kind, const QecPatch& a,
                                         const QecPatch* b) {
  std::vector<CoordGate> out;
  const size_t n = a.data_qubits.size();
  auto global = [&](XY local) {
    for (size_t k = 0; k < n; ++k)
      if (a.data_local[k] == local) return a.data_qubits[k];
    throw CodeError("local coordinate outside patch");
  };
  switch (kind) {
    case TransversalKind::CNOT: {
      if (!b) throw CodeError("transversal CNOT needs two patches");
      if (a.family != b->family || a.d != b->d || a.orientation != b->orientation) {
        throw CodeError("transversal CNOT needs matching patches");
      }
      for (size_t k = 0; k < n; ++k) {
        out.push_back({GateKind::CX, a.data_qubits[k], b->data_qubits[k]});
      }
      return out;
    }
    case TransversalKind::H: {
      if (a.family != Family::RotatedSurface && a.family != Family::UnrotatedSurface) {
        throw CodeError("transversal H is defined for surface patches only");
      }
      for (const XY& q : a.data_qubits) out.push_back({GateKind::H, q, q});
      if (a.family == Family::RotatedSurface) {
        const int m = 2 * a.d;
        for (const XY& l : a.data_local) {
          if (l.x < m - l.x) out.push_back({GateKind::SWAP, global(l), global({m - l.x, l.y})});
        }
      }
      for (const XY& l : a.data_local) {
        if (l.x < l.y) out.push_back({GateKind::SWAP, global(l), global({l.y, l.x})});
      }
      return out;
    }
    case TransversalKind::S: {
      if (a.family != Family::UnrotatedSurface) {
        throw CodeError("fold-transversal S is implemented for unrotated surface patches only");
      }
      for (const XY& l : a.data_local) {
        if (l.x < l.y) out.push_back({GateKind::CZ, global(l), global({l.y, l.x})});
      }
      for (const XY& l : a.data_local) {
        if (l.x == l.y) {
          GateKind g = (l.x % 2 == 0) ? GateKind::S : GateKind::S_DAG;
          out.push_back({g, global(l), global(l)});
        }
      }
      return out;
    }
  }
  return out;
}

}  // namespace qtrack
