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

#include "qtrack/config.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace qtrack {
namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw SchemaError(path + ": " + what);
}

void allow_keys(const Json& obj, const std::string& path, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) fail(path, "expected an object");
  for (const auto& [k, v] : obj.items()) {
    if (std::none_of(keys.begin(), keys.end(), [&](const char* a) { return k == a; })) {
      fail(path.empty() ? k : path + "." + k, "unknown key");
    }
  }
}

const Json& need(const Json& obj, const std::string& path, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(path.empty() ? key : path + "." + key, "missing required key");
  return *it;
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

class Loader {
 public:
  Loader(const Json& doc, const ConfigOverrides& ov) : doc_(doc), ov_(ov) {}

  CompiledProtocol run() {
    allow_keys(doc_, "", {"name", "params", "options", "patches", "couplers", "ops", "noise"});
    CompiledProtocol out;
    if (doc_.contains("name")) out.name = str(doc_["name"], "name");
    read_params();
    CompileOptions opt = read_options();
    out.noise = read_noise();

    const auto t0 = std::chrono::steady_clock::now();
    ProtocolCompiler compiler(opt);
    compiler_ = &compiler;
    read_patches();
    read_couplers();
    const Json& ops = need(doc_, "", "ops");
    if (!ops.is_array() || ops.empty()) fail("ops", "expected a non-empty array");
    for (size_t k = 0; k < ops.size(); ++k) {
      run_op(ops[k], "ops[" + std::to_string(k) + "]", nullptr);
    }
    out.result = compiler.finish();
    out.result.stats.compile_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    out.ao_loc = ao_loc_;
    return out;
  }

 private:
  std::string str(const Json& v, const std::string& path) const {
    if (!v.is_string()) fail(path, "expected a string");
    return v.get<std::string>();
  }

  double num(const Json& v, const std::string& path) const {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
      std::string s = v.get<std::string>();
      if (!s.empty() && s[0] == '$') {
        auto it = params_.find(s.substr(1));
        if (it == params_.end()) fail(path, "unknown parameter '" + s + "'");
        return it->second;
      }
    }
    fail(path, "expected a number or a $parameter");
  }

  int integer(const Json& v, const std::string& path) const {
    double d = num(v, path);
    if (d != std::floor(d) || std::abs(d) > 1e9) fail(path, "expected an integer");
    return static_cast<int>(d);
  }

  bool boolean(const Json& v, const std::string& path) const {
    if (!v.is_boolean()) fail(path, "expected true or false");
    return v.get<bool>();
  }

  void read_params() {
    std::set<std::string> known;
    if (doc_.contains("params")) {
      const Json& p = doc_["params"];
      if (!p.is_object()) fail("params", "expected an object");
      for (const auto& [k, v] : p.items()) {
        known.insert(k);
        auto o = ov_.params.find(k);
        params_[k] = o != ov_.params.end() ? o->second : num(v, "params." + k);
      }
    }
    for (const auto& [k, v] : ov_.params) {
      if (!known.count(k)) fail("params." + k, "override of an undeclared parameter");
    }
  }

  CompileOptions read_options() const {
    CompileOptions opt;
    if (doc_.contains("options")) {
      const Json& o = doc_["options"];
      allow_keys(o, "options", {"schedule", "coords", "repeat"});
      if (o.contains("schedule")) {
        std::string s = str(o["schedule"], "options.schedule");
        if (s == "standard") {
          opt.variant = ScheduleVariant::Standard;
        } else if (s == "swapped_zx") {
          opt.variant = ScheduleVariant::SwappedZX;
        } else {
          fail("options.schedule", "expected 'standard' or 'swapped_zx'");
        }
      }
      if (o.contains("coords")) opt.emit_coords = boolean(o["coords"], "options.coords");
      if (o.contains("repeat")) opt.use_repeat = boolean(o["repeat"], "options.repeat");
    }
    if (ov_.use_repeat) opt.use_repeat = *ov_.use_repeat;
    if (ov_.variant) opt.variant = *ov_.variant;
    if (ov_.emit_coords) opt.emit_coords = *ov_.emit_coords;
    return opt;
  }

  NoiseSpec read_noise() const {
    NoiseSpec n;
    if (!doc_.contains("noise")) return n;
    const Json& o = doc_["noise"];
    allow_keys(o, "noise", {"model", "p", "bias", "weights"});
    try {
      n.model = parse_noise_model(str(need(o, "noise", "model"), "noise.model"));
    } catch (const std::invalid_argument& e) {
      fail("noise.model", e.what());
    }
    if (o.contains("p")) n.p = num(o["p"], "noise.p");
    if (n.p < 0 || n.p > 1) fail("noise.p", "probability outside [0, 1]");
    if (o.contains("bias")) n.bias = num(o["bias"], "noise.bias");
    if (o.contains("weights")) {
      const Json& w = o["weights"];
      if (!w.is_array() || w.size() != 3) fail("noise.weights", "expected [wx, wy, wz]");
      n.wx = num(w[0], "noise.weights[0]");
      n.wy = num(w[1], "noise.weights[1]");
      n.wz = num(w[2], "noise.weights[2]");
    }
    return n;
  }

  size_t patch_id(const Json& v, const std::string& path) const {
    std::string s = str(v, path);
    auto it = patches_.find(s);
    if (it == patches_.end()) fail(path, "unknown patch '" + s + "'");
    return it->second;
  }

  CouplerBasis coupler_basis(const Json& v, const std::string& path) const {
    std::string s = str(v, path);
    if (s == "ZZ") return CouplerBasis::ZZ;
    if (s == "XX") return CouplerBasis::XX;
    fail(path, "expected 'ZZ' or 'XX'");
  }

  Basis basis(const Json& v, const std::string& path) const {
    std::string s = str(v, path);
    if (s == "Z") return Basis::Z;
    if (s == "X") return Basis::X;
    fail(path, "expected 'Z' or 'X'");
  }

  XY coord(const Json& v, const std::string& path) const {
    if (!v.is_array() || v.size() != 2) fail(path, "expected [x, y]");
    return {integer(v[0], path + "[0]"), integer(v[1], path + "[1]")};
  }

  void read_patches() {
    const Json& ps = need(doc_, "", "patches");
    if (!ps.is_array() || ps.empty()) fail("patches", "expected a non-empty array");
    for (size_t k = 0; k < ps.size(); ++k) {
      const std::string path = "patches[" + std::to_string(k) + "]";
      const Json& p = ps[k];
      allow_keys(p, path, {"name", "family", "d", "origin", "orientation", "place"});
      std::string name = str(need(p, path, "name"), join(path, "name"));
      if (patches_.count(name)) fail(join(path, "name"), "duplicate patch name");
      Family fam;
      try {
        fam = parse_family(str(need(p, path, "family"), join(path, "family")));
      } catch (const std::invalid_argument& e) {
        fail(join(path, "family"), e.what());
      }
      int d = integer(need(p, path, "d"), join(path, "d"));
      int orient = p.contains("orientation") ? integer(p["orientation"], join(path, "orientation"))
                                             : 0;
      if (p.contains("origin") && p.contains("place")) {
        fail(join(path, "place"), "give either origin or place, not both");
      }
      XY origin{0, 0};
      if (p.contains("origin")) origin = coord(p["origin"], join(path, "origin"));
      if (p.contains("place")) origin = place(p["place"], join(path, "place"));
      QecPatch patch = build_patch(fam, d, origin, orient);
      patches_[name] = compiler_->add_patch(patch, name);
    }
  }

  XY place(const Json& pl, const std::string& path) const {
    allow_keys(pl, path, {"partner_of", "beside", "basis", "r", "gap"});
    if (pl.contains("partner_of") == pl.contains("beside")) {
      fail(path, "expected exactly one of partner_of or beside");
    }
    if (pl.contains("partner_of")) {
      const QecPatch& other =
          compiler_->system().patch(patch_id(pl["partner_of"], join(path, "partner_of")));
      CouplerBasis b = coupler_basis(need(pl, path, "basis"), join(path, "basis"));
      int r = pl.contains("r") ? integer(pl["r"], join(path, "r")) : 0;
      return coupler_partner_origin(other, b, r);
    }
    const QecPatch& other = compiler_->system().patch(patch_id(pl["beside"], join(path, "beside")));
    int gap = pl.contains("gap") ? integer(pl["gap"], join(path, "gap")) : 2;
    int maxx = other.origin.x;
    for (const XY& q : other.data_qubits) maxx = std::max(maxx, q.x);
    for (const XY& q : other.syndrome_qubits) maxx = std::max(maxx, q.x);
    return {maxx + gap, other.origin.y};
  }

  void read_couplers() {
    if (!doc_.contains("couplers")) return;
    const Json& cs = doc_["couplers"];
    if (!cs.is_array()) fail("couplers", "expected an array");
    for (size_t k = 0; k < cs.size(); ++k) {
      const std::string path = "couplers[" + std::to_string(k) + "]";
      const Json& c = cs[k];
      allow_keys(c, path, {"name", "a", "b", "basis", "r"});
      std::string name = str(need(c, path, "name"), join(path, "name"));
      if (couplers_.count(name)) fail(join(path, "name"), "duplicate coupler name");
      size_t a = patch_id(need(c, path, "a"), join(path, "a"));
      size_t b = patch_id(need(c, path, "b"), join(path, "b"));
      CouplerBasis basis = coupler_basis(need(c, path, "basis"), join(path, "basis"));
      int r = c.contains("r") ? integer(c["r"], join(path, "r")) : 0;
      couplers_[name] = compiler_->add_coupler(a, b, basis, r);
      coupler_order_.push_back(name);
    }
  }

  size_t coupler_id(const Json& v, const std::string& path, const std::string* loop_var) const {
    std::string s = str(v, path);
    if (s == "$coupler") {
      if (!loop_var) fail(path, "$coupler used outside for_each_coupler");
      s = *loop_var;
    }
    auto it = couplers_.find(s);
    if (it == couplers_.end()) fail(path, "unknown coupler '" + s + "'");
    return it->second;
  }

  std::vector<CoordGate> gates(const Json& gs, const std::string& path) const {
    static const std::map<std::string, GateKind> kKinds = {
        {"H", GateKind::H},   {"S", GateKind::S},   {"S_DAG", GateKind::S_DAG},
        {"X", GateKind::X},   {"Y", GateKind::Y},   {"Z", GateKind::Z},
        {"CX", GateKind::CX}, {"CZ", GateKind::CZ}, {"SWAP", GateKind::SWAP}};
    if (!gs.is_array()) fail(path, "expected an array of gates");
    std::vector<CoordGate> out;
    for (size_t k = 0; k < gs.size(); ++k) {
      const std::string gp = path + "[" + std::to_string(k) + "]";
      const Json& g = gs[k];
      if (!g.is_array() || g.empty()) fail(gp, "expected [name, [x, y], ...]");
      auto it = kKinds.find(str(g[0], gp + "[0]"));
      if (it == kKinds.end()) fail(gp + "[0]", "unknown gate");
      const size_t arity = is_two_qubit(it->second) ? 2 : 1;
      if (g.size() != arity + 1) fail(gp, "wrong number of qubits for gate");
      CoordGate cg{it->second, coord(g[1], gp + "[1]"), {}};
      if (arity == 2) cg.b = coord(g[2], gp + "[2]");
      out.push_back(cg);
    }
    return out;
  }

  void run_op(const Json& op, const std::string& path, const std::string* loop_var) {
    const std::string kind = str(need(op, path, "op"), join(path, "op"));
    if (kind == "for_each_coupler") {
      if (loop_var) fail(path, "for_each_coupler cannot be nested");
      allow_keys(op, path, {"op", "couplers", "body"});
      std::vector<std::string> names = coupler_order_;
      if (op.contains("couplers")) {
        names.clear();
        const Json& cs = op["couplers"];
        if (!cs.is_array()) fail(join(path, "couplers"), "expected an array");
        for (size_t k = 0; k < cs.size(); ++k) {
          std::string s = str(cs[k], join(path, "couplers") + "[" + std::to_string(k) + "]");
          if (!couplers_.count(s)) fail(join(path, "couplers"), "unknown coupler '" + s + "'");
          names.push_back(s);
        }
      }
      const Json& body = need(op, path, "body");
      if (!body.is_array() || body.empty()) fail(join(path, "body"), "expected a non-empty array");
      const uint64_t before = ao_loc_;
      for (const std::string& name : names) {
        ao_loc_ = before;
        for (size_t k = 0; k < body.size(); ++k) {
          run_op(body[k], join(path, "body") + "[" + std::to_string(k) + "]", &name);
        }
      }
      ao_loc_ = before + body.size();
      return;
    }
    ++ao_loc_;
    if (kind == "init") {
      allow_keys(op, path, {"op", "targets"});
      std::vector<InitTarget> ts;
      const Json& t = need(op, path, "targets");
      if (!t.is_array()) fail(join(path, "targets"), "expected an array");
      for (size_t k = 0; k < t.size(); ++k) {
        const std::string tp = join(path, "targets") + "[" + std::to_string(k) + "]";
        allow_keys(t[k], tp, {"patch", "basis"});
        ts.push_back({patch_id(need(t[k], tp, "patch"), join(tp, "patch")),
                      basis(need(t[k], tp, "basis"), join(tp, "basis"))});
      }
      compiler_->initialize(ts);
    } else if (kind == "se") {
      allow_keys(op, path, {"op", "rounds"});
      int r = integer(need(op, path, "rounds"), join(path, "rounds"));
      if (r < 1) fail(join(path, "rounds"), "expected at least one round");
      compiler_->syndrome_extraction(r);
    } else if (kind == "unitary") {
      allow_keys(op, path, {"op", "transversal", "patches", "gates"});
      if (op.contains("transversal") == op.contains("gates")) {
        fail(path, "expected exactly one of transversal or gates");
      }
      if (op.contains("gates")) {
        compiler_->unitary_block(gates(op["gates"], join(path, "gates")));
        return;
      }
      std::string t = str(op["transversal"], join(path, "transversal"));
      TransversalKind tk;
      if (t == "H") {
        tk = TransversalKind::H;
      } else if (t == "S") {
        tk = TransversalKind::S;
      } else if (t == "CNOT") {
        tk = TransversalKind::CNOT;
      } else {
        fail(join(path, "transversal"), "expected H, S or CNOT");
      }
      const Json& ps = need(op, path, "patches");
      const size_t want = tk == TransversalKind::CNOT ? 2 : 1;
      if (!ps.is_array() || ps.size() != want) {
        fail(join(path, "patches"), "expected " + std::to_string(want) + " patch name(s)");
      }
      const QecPatch& a = compiler_->system().patch(patch_id(ps[0], join(path, "patches[0]")));
      const QecPatch* b = want == 2 ? &compiler_->system().patch(
                                          patch_id(ps[1], join(path, "patches[1]")))
                                    : nullptr;
      compiler_->unitary_block(transversal_block(tk, a, b));
    } else if (kind == "coupler") {
      allow_keys(op, path, {"op", "coupler", "on"});
      compiler_->toggle_coupler(coupler_id(need(op, path, "coupler"), join(path, "coupler"), loop_var),
                                boolean(need(op, path, "on"), join(path, "on")));
    } else if (kind == "readout") {
      allow_keys(op, path, {"op", "targets"});
      std::vector<ReadoutTarget> ts;
      const Json& t = need(op, path, "targets");
      if (!t.is_array()) fail(join(path, "targets"), "expected an array");
      for (size_t k = 0; k < t.size(); ++k) {
        const std::string tp = join(path, "targets") + "[" + std::to_string(k) + "]";
        allow_keys(t[k], tp, {"patch", "basis", "discard"});
        ReadoutTarget rt{patch_id(need(t[k], tp, "patch"), join(tp, "patch")),
                         basis(need(t[k], tp, "basis"), join(tp, "basis")), false};
        if (t[k].contains("discard")) rt.allow_random = boolean(t[k]["discard"], join(tp, "discard"));
        ts.push_back(rt);
      }
      compiler_->data_readout(ts);
    } else {
      fail(join(path, "op"), "unknown op '" + kind + "'");
    }
  }

  const Json& doc_;
  const ConfigOverrides& ov_;
  ProtocolCompiler* compiler_ = nullptr;
  std::map<std::string, double> params_;
  std::map<std::string, size_t> patches_;
  std::map<std::string, size_t> couplers_;
  std::vector<std::string> coupler_order_;
  uint64_t ao_loc_ = 0;
};

}  // namespace

CompiledProtocol compile_config_text(const std::string& text, const ConfigOverrides& ov) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw SchemaError(std::string("config: ") + e.what());
  }
  return Loader(doc, ov).run();
}

CompiledProtocol compile_config_file(const std::string& path, const ConfigOverrides& ov) {
  std::ifstream in(path);
  if (!in) throw SchemaError(path + ": cannot read config");
  std::stringstream ss;
  ss << in.rdbuf();
  CompiledProtocol p = compile_config_text(ss.str(), ov);
  if (p.name.empty()) p.name = std::filesystem::path(path).stem().string();
  return p;
}

AnnotatedCircuit noisy_circuit(const CompiledProtocol& p) {
  if (p.noise.model == NoiseModel::None) return p.result.circuit;
  return inject_noise(p.result.circuit, p.noise);
}

std::string bundled_config_dir() {
  if (const char* env = std::getenv("QTRACK_CONFIG_DIR")) return env;
  return QTRACK_CONFIG_DIR;
}

std::vector<std::string> bundled_configs() {
  std::vector<std::string> out;
  std::error_code ec;
  for (const auto& e : std::filesystem::directory_iterator(bundled_config_dir(), ec)) {
    if (e.path().extension() == ".json") out.push_back(e.path().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string stats_line(const CompileStats& s, uint64_t ao_loc) {
  char buf[320];
  std::snprintf(buf, sizeof(buf),
                "qubits=%llu detectors=%llu observables=%llu annotations=%llu atomic_ops=%llu "
                "compile_ms=%.3f rref_solves=%llu",
                static_cast<unsigned long long>(s.qubits),
                static_cast<unsigned long long>(s.detectors),
                static_cast<unsigned long long>(s.observables),
                static_cast<unsigned long long>(s.annotations),
                static_cast<unsigned long long>(ao_loc), s.compile_ms,
                static_cast<unsigned long long>(s.rref_solves));
  return buf;
}

}  // namespace qtrack
