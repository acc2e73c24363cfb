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

#include "qtrack/circuit.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

namespace qtrack {
namespace {

struct OpInfo {
  Op op;
  const char* name;
};

constexpr OpInfo kOps[] = {
    {Op::H, "H"},
    {Op::S, "S"},
    {Op::S_DAG, "S_DAG"},
    {Op::X, "X"},
    {Op::Y, "Y"},
    {Op::Z, "Z"},
    {Op::CX, "CX"},
    {Op::CZ, "CZ"},
    {Op::SWAP, "SWAP"},
    {Op::R, "R"},
    {Op::RX, "RX"},
    {Op::M, "M"},
    {Op::MX, "MX"},
    {Op::MR, "MR"},
    {Op::MRX, "MRX"},
    {Op::TICK, "TICK"},
    {Op::SHIFT_COORDS, "SHIFT_COORDS"},
    {Op::QUBIT_COORDS, "QUBIT_COORDS"},
    {Op::REPEAT, "REPEAT"},
    {Op::DETECTOR, "DETECTOR"},
    {Op::OBSERVABLE_INCLUDE, "OBSERVABLE_INCLUDE"},
    {Op::DEPOLARIZE1, "DEPOLARIZE1"},
    {Op::DEPOLARIZE2, "DEPOLARIZE2"},
    {Op::X_ERROR, "X_ERROR"},
    {Op::Z_ERROR, "Z_ERROR"},
    {Op::PAULI_CHANNEL_1, "PAULI_CHANNEL_1"},
};

const std::pair<const char*, Op> kAliases[] = {
    {"CNOT", Op::CX}, {"ZCX", Op::CX}, {"ZCZ", Op::CZ}, {"RZ", Op::R},
    {"MZ", Op::M},    {"MRZ", Op::MR}, {"SQRT_Z", Op::S}, {"SQRT_Z_DAG", Op::S_DAG},
};

constexpr const char* kParityComment = "# expected_parity 1";

void count_into(const std::vector<Instruction>& ins, uint64_t mult, CircuitCounts& c,
                std::set<uint64_t>& obs) {
  for (const auto& i : ins) {
    switch (i.op) {
      case Op::REPEAT:
        count_into(i.body, mult * i.repeat_count, c, obs);
        break;
      case Op::DETECTOR:
        c.detectors += mult;
        break;
      case Op::OBSERVABLE_INCLUDE:
        c.observable_includes += mult;
        if (!i.args.empty()) obs.insert(static_cast<uint64_t>(i.args[0]));
        break;
      default:
        if (is_measurement_op(i.op)) c.measurements += mult * i.targets.size();
        break;
    }
  }
}

void max_qubit(const std::vector<Instruction>& ins, int64_t& mx) {
  for (const auto& i : ins) {
    if (i.op == Op::REPEAT) {
      max_qubit(i.body, mx);
    } else if (i.op != Op::DETECTOR && i.op != Op::OBSERVABLE_INCLUDE) {
      for (uint32_t t : i.targets) mx = std::max<int64_t>(mx, t);
    }
  }
}

void flatten_into(const std::vector<Instruction>& ins, std::vector<Instruction>& out) {
  for (const auto& i : ins) {
    if (i.op == Op::REPEAT) {
      for (uint64_t k = 0; k < i.repeat_count; ++k) flatten_into(i.body, out);
    } else {
      out.push_back(i);
    }
  }
}

void emit_block(const std::vector<Instruction>& ins, int depth, std::string& out) {
  const std::string indent(4 * depth, ' ');
  for (const auto& i : ins) {
    if (i.op == Op::REPEAT) {
      out += indent + "REPEAT " + std::to_string(i.repeat_count) + " {\n";
      emit_block(i.body, depth + 1, out);
      out += indent + "}\n";
      continue;
    }
    if (i.expected_parity) out += indent + kParityComment + "\n";
    out += indent + op_name(i.op);
    if (!i.args.empty()) {
      out += "(";
      for (size_t k = 0; k < i.args.size(); ++k) {
        if (k) out += ", ";
        out += format_number(i.args[k]);
      }
      out += ")";
    }
    const bool rec = i.op == Op::DETECTOR || i.op == Op::OBSERVABLE_INCLUDE;
    for (uint32_t t : i.targets) {
      out += rec ? " rec[-" + std::to_string(t) + "]" : " " + std::to_string(t);
    }
    out += "\n";
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

double parse_double(std::string_view s, size_t line) {
  s = trim(s);
  double v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ParseError("line " + std::to_string(line) + ": bad number '" + std::string(s) + "'");
  }
  return v;
}

uint64_t parse_uint(std::string_view s, size_t line) {
  uint64_t v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ParseError("line " + std::to_string(line) + ": bad target '" + std::string(s) + "'");
  }
  return v;
}

Op lookup_op(std::string_view name, size_t line) {
  for (const auto& o : kOps)
    if (name == o.name) return o.op;
  for (const auto& [alias, op] : kAliases)
    if (name == alias) return op;
  throw ParseError("line " + std::to_string(line) + ": unsupported instruction '" +
                   std::string(name) + "'");
}

}  // namespace

const char* op_name(Op op) {
  for (const auto& o : kOps)
    if (o.op == op) return o.name;
  return "?";
}

bool is_unitary_op(Op op) { return op <= Op::SWAP; }
bool is_two_qubit_op(Op op) {
  return op == Op::CX || op == Op::CZ || op == Op::SWAP || op == Op::DEPOLARIZE2;
}
bool is_measurement_op(Op op) {
  return op == Op::M || op == Op::MX || op == Op::MR || op == Op::MRX;
}
bool is_reset_op(Op op) { return op == Op::R || op == Op::RX || op == Op::MR || op == Op::MRX; }
bool is_noise_op(Op op) { return op >= Op::DEPOLARIZE1; }
bool is_annotation_op(Op op) { return op == Op::DETECTOR || op == Op::OBSERVABLE_INCLUDE; }

CircuitCounts count(const AnnotatedCircuit& c) {
  CircuitCounts out;
  std::set<uint64_t> obs;
  count_into(c.instructions, 1, out, obs);
  out.observables = obs.size();
  int64_t mx = -1;
  max_qubit(c.instructions, mx);
  if (!c.qubit_coords.empty()) mx = std::max<int64_t>(mx, c.qubit_coords.rbegin()->first);
  out.qubits = static_cast<uint64_t>(mx + 1);
  return out;
}

std::vector<Instruction> flatten(const std::vector<Instruction>& instructions) {
  std::vector<Instruction> out;
  flatten_into(instructions, out);
  return out;
}

void validate_records(const AnnotatedCircuit& c) {
  // Later iterations only see more history, so one pass per body suffices.
  uint64_t meas = 0;
  auto walk = [&](auto&& self, const std::vector<Instruction>& ins) -> void {
    for (const auto& i : ins) {
      if (i.op == Op::REPEAT) {
        if (i.repeat_count) self(self, i.body);
        continue;
      }
      if (is_measurement_op(i.op)) meas += i.targets.size();
      if (is_annotation_op(i.op)) {
        for (uint32_t t : i.targets) {
          if (t == 0 || t > meas) {
            throw CircuitError("record target rec[-" + std::to_string(t) +
                               "] refers to a measurement that has not happened");
          }
        }
      }
    }
  };
  walk(walk, c.instructions);
}

std::string format_number(double v) {
  if (std::isfinite(v) && v == std::floor(v) && std::fabs(v) < 1e15) {
    return std::to_string(static_cast<int64_t>(v));
  }
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string emit_text(const AnnotatedCircuit& c) {
  validate_records(c);
  std::string out;
  for (const auto& [q, xy] : c.qubit_coords) {
    out += "QUBIT_COORDS(";
    for (size_t k = 0; k < xy.size(); ++k) {
      if (k) out += ", ";
      out += format_number(xy[k]);
    }
    out += ") " + std::to_string(q) + "\n";
  }
  emit_block(c.instructions, 0, out);
  return out;
}

AnnotatedCircuit parse_text(std::string_view text) {
  AnnotatedCircuit c;
  std::vector<std::vector<Instruction>*> stack{&c.instructions};
  size_t line_no = 0;
  bool parity_flag = false;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty()) {
      if (end == text.size()) break;
      continue;
    }
    if (line.front() == '#') {
      if (line == kParityComment) parity_flag = true;
      continue;
    }
    if (size_t hash = line.find('#'); hash != std::string_view::npos) {
      line = trim(line.substr(0, hash));
    }
    if (line == "}") {
      if (stack.size() == 1) throw ParseError("line " + std::to_string(line_no) + ": stray '}'");
      stack.pop_back();
      continue;
    }
    // Name, optional parenthesized args, then targets.
    size_t name_end = 0;
    while (name_end < line.size() && line[name_end] != '(' && line[name_end] != ' ' &&
           line[name_end] != '\t') {
      ++name_end;
    }
    const std::string_view name = line.substr(0, name_end);
    Instruction ins;
    ins.op = lookup_op(name, line_no);
    std::string_view rest = line.substr(name_end);
    if (!rest.empty() && rest.front() == '(') {
      size_t close = rest.find(')');
      if (close == std::string_view::npos) {
        throw ParseError("line " + std::to_string(line_no) + ": unclosed argument list");
      }
      std::string_view args = rest.substr(1, close - 1);
      size_t a = 0;
      while (a <= args.size() && !trim(args).empty()) {
        size_t comma = args.find(',', a);
        if (comma == std::string_view::npos) comma = args.size();
        ins.args.push_back(parse_double(args.substr(a, comma - a), line_no));
        a = comma + 1;
        if (comma == args.size()) break;
      }
      rest = rest.substr(close + 1);
    }
    std::vector<std::string_view> toks;
    {
      size_t i = 0;
      while (i < rest.size()) {
        while (i < rest.size() && (rest[i] == ' ' || rest[i] == '\t')) ++i;
        size_t j = i;
        while (j < rest.size() && rest[j] != ' ' && rest[j] != '\t') ++j;
        if (j > i) toks.push_back(rest.substr(i, j - i));
        i = j;
      }
    }
    if (ins.op == Op::REPEAT) {
      if (toks.size() != 2 || toks[1] != "{") {
        throw ParseError("line " + std::to_string(line_no) + ": malformed REPEAT");
      }
      ins.repeat_count = parse_uint(toks[0], line_no);
      stack.back()->push_back(std::move(ins));
      stack.push_back(&stack.back()->back().body);
      continue;
    }
    const bool rec = is_annotation_op(ins.op);
    for (auto t : toks) {
      if (rec) {
        if (t.size() < 7 || t.substr(0, 5) != "rec[-" || t.back() != ']') {
          throw ParseError("line " + std::to_string(line_no) + ": bad record target '" +
                           std::string(t) + "'");
        }
        ins.targets.push_back(static_cast<uint32_t>(parse_uint(t.substr(5, t.size() - 6), line_no)));
      } else {
        ins.targets.push_back(static_cast<uint32_t>(parse_uint(t, line_no)));
      }
    }
    if (rec && parity_flag) ins.expected_parity = 1;
    parity_flag = false;
    if (ins.op == Op::QUBIT_COORDS) {
      if (stack.size() != 1) {
        throw ParseError("line " + std::to_string(line_no) + ": QUBIT_COORDS inside REPEAT");
      }
      for (uint32_t q : ins.targets) c.qubit_coords[q] = ins.args;
      continue;
    }
    if (is_two_qubit_op(ins.op) && ins.targets.size() % 2) {
      throw ParseError("line " + std::to_string(line_no) + ": odd target count for " +
                       std::string(name));
    }
    stack.back()->push_back(std::move(ins));
  }
  if (stack.size() != 1) throw ParseError("unterminated REPEAT block");
  return c;
}

NoiseModel parse_noise_model(const std::string& name) {
  if (name == "none") return NoiseModel::None;
  if (name == "code_capacity") return NoiseModel::CodeCapacity;
  if (name == "phenomenological") return NoiseModel::Phenomenological;
  if (name == "circuit_level") return NoiseModel::CircuitLevel;
  if (name == "biased_xz") return NoiseModel::BiasedXZ;
  if (name == "custom_pauli") return NoiseModel::CustomPauli;
  throw std::invalid_argument("unknown noise model '" + name + "'");
}

namespace {

bool has_noise(const std::vector<Instruction>& ins) {
  for (const auto& i : ins) {
    if (is_noise_op(i.op)) return true;
    if (i.op == Op::REPEAT && has_noise(i.body)) return true;
  }
  return false;
}

void collect_mr(const std::vector<Instruction>& ins, std::set<uint32_t>& out) {
  for (const auto& i : ins) {
    if (i.op == Op::MR || i.op == Op::MRX) out.insert(i.targets.begin(), i.targets.end());
    if (i.op == Op::REPEAT) collect_mr(i.body, out);
  }
}

class Injector {
 public:
  Injector(const NoiseSpec& spec, std::set<uint32_t> syndrome)
      : spec_(spec), syndrome_(std::move(syndrome)) {
    const double p = spec.p;
    switch (spec.model) {
      case NoiseModel::BiasedXZ: {
        const double eta = spec.bias;
        pz_ = p * eta / (eta + 1);
        px_ = py_ = p / (2 * (eta + 1));
        break;
      }
      case NoiseModel::CustomPauli: {
        const double s = spec.wx + spec.wy + spec.wz;
        if (s <= 0) throw std::invalid_argument("custom Pauli weights must sum to a positive value");
        px_ = p * spec.wx / s;
        py_ = p * spec.wy / s;
        pz_ = p * spec.wz / s;
        break;
      }
      default:
        break;
    }
  }

  std::vector<Instruction> run(const std::vector<Instruction>& ins) {
    std::vector<Instruction> out;
    for (const auto& i : ins) {
      if (i.op == Op::REPEAT) {
        Injector probe = *this;
        probe.run(i.body);
        Instruction r = i;
        if (probe.touched_ == touched_ && probe.active_ == active_) {
          // Periodic layer state: the open layer carries across iterations.
          r.body = run(i.body);
        } else {
          flush_idle(out);
          r.body = run(i.body);
          flush_idle(r.body);
        }
        out.push_back(std::move(r));
        continue;
      }
      step(i, out);
    }
    return out;
  }

 private:
  bool circuit_level() const {
    return spec_.model == NoiseModel::CircuitLevel || spec_.model == NoiseModel::BiasedXZ ||
           spec_.model == NoiseModel::CustomPauli;
  }

  void single(const std::vector<uint32_t>& qs, std::vector<Instruction>& out) {
    if (qs.empty() || spec_.p == 0) return;
    if (spec_.model == NoiseModel::BiasedXZ || spec_.model == NoiseModel::CustomPauli) {
      out.push_back(Instruction{Op::PAULI_CHANNEL_1, {px_, py_, pz_}, qs, 0, {}, 0});
    } else {
      out.push_back(Instruction{Op::DEPOLARIZE1, {spec_.p}, qs, 0, {}, 0});
    }
  }

  void flip(Op meas_or_reset, const std::vector<uint32_t>& qs, std::vector<Instruction>& out) {
    if (qs.empty() || spec_.p == 0) return;
    const bool x_basis = meas_or_reset == Op::MX || meas_or_reset == Op::MRX ||
                         meas_or_reset == Op::RX;
    out.push_back(Instruction{x_basis ? Op::Z_ERROR : Op::X_ERROR, {spec_.p}, qs, 0, {}, 0});
  }

  void flush_idle(std::vector<Instruction>& out) {
    if (circuit_level() && !touched_.empty()) {
      std::vector<uint32_t> idle;
      for (uint32_t q : active_)
        if (!touched_.count(q)) idle.push_back(q);
      single(idle, out);
    }
    touched_.clear();
  }

  void step(const Instruction& i, std::vector<Instruction>& out) {
    for (uint32_t q : i.targets) {
      if (!is_annotation_op(i.op) && i.op != Op::SHIFT_COORDS) touched_.insert(q);
    }
    const bool cl = circuit_level();
    if (i.op == Op::TICK) {
      flush_idle(out);
      out.push_back(i);
      return;
    }
    if (is_measurement_op(i.op)) {
      if (cl) flip(i.op, i.targets, out);
      if (spec_.model == NoiseModel::Phenomenological && (i.op == Op::MR || i.op == Op::MRX)) {
        std::vector<uint32_t> data;
        std::set<uint32_t> mt(i.targets.begin(), i.targets.end());
        for (uint32_t q : active_)
          if (!mt.count(q)) data.push_back(q);
        single(data, out);
        flip(i.op, i.targets, out);
      }
    }
    out.push_back(i);
    if (is_unitary_op(i.op) && cl) {
      if (is_two_qubit_op(i.op)) {
        if (spec_.model == NoiseModel::CircuitLevel) {
          if (spec_.p > 0) out.push_back(Instruction{Op::DEPOLARIZE2, {spec_.p}, i.targets, 0, {}, 0});
        } else {
          single(i.targets, out);
        }
      } else {
        single(i.targets, out);
      }
    }
    if (i.op == Op::R || i.op == Op::RX || i.op == Op::MR || i.op == Op::MRX) {
      if (cl) flip(i.op == Op::MR ? Op::R : i.op == Op::MRX ? Op::RX : i.op, i.targets, out);
      if (spec_.model == NoiseModel::CodeCapacity && (i.op == Op::R || i.op == Op::RX)) {
        std::vector<uint32_t> data;
        for (uint32_t q : i.targets)
          if (!syndrome_.count(q)) data.push_back(q);
        if (!data.empty() && spec_.p > 0) {
          out.push_back(Instruction{Op::DEPOLARIZE1, {spec_.p}, data, 0, {}, 0});
        }
      }
      active_.insert(i.targets.begin(), i.targets.end());
    }
    if (i.op == Op::M || i.op == Op::MX) {
      for (uint32_t q : i.targets) active_.erase(q);
    }
  }

  NoiseSpec spec_;
  std::set<uint32_t> syndrome_;
  std::set<uint32_t> active_;
  std::set<uint32_t> touched_;
  double px_ = 0, py_ = 0, pz_ = 0;
};

}  // namespace

AnnotatedCircuit inject_noise(const AnnotatedCircuit& c, const NoiseSpec& spec) {
  if (spec.p < 0 || spec.p > 1) throw std::invalid_argument("noise probability outside [0,1]");
  if (spec.model == NoiseModel::BiasedXZ && spec.bias <= 0) {
    throw std::invalid_argument("bias must be positive");
  }
  if (has_noise(c.instructions)) throw CircuitError("circuit already contains noise operations");
  if (spec.model == NoiseModel::None) return c;
  std::set<uint32_t> syndrome;
  collect_mr(c.instructions, syndrome);
  Injector inj(spec, std::move(syndrome));
  AnnotatedCircuit out = c;
  out.instructions = inj.run(c.instructions);
  return out;
}

}  // namespace qtrack
