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

// qtrack command-line front end.
//
// Exit codes: 0 ok, 1 usage or I/O error, 2 schema or parse error,
// 3 compile error, 4 verification failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "qtrack/circuit.h"
#include "qtrack/code_library.h"
#include "qtrack/config.h"
#include "qtrack/verifier.h"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitSchema = 2;
constexpr int kExitCompile = 3;
constexpr int kExitVerify = 4;

unsigned thread_count() {
  if (const char* env = std::getenv("QTRACK_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return 0;
}

bool read_file(const std::string& path, std::string& out) {
  std::ifstream in(path);
  if (!in) return false;
  std::stringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

int load_circuit(const std::string& path, qtrack::AnnotatedCircuit& c) {
  std::string text;
  if (!read_file(path, text)) {
    std::cerr << "error: cannot read " << path << "\n";
    return kExitUsage;
  }
  try {
    c = qtrack::parse_text(text);
    qtrack::validate_records(c);
  } catch (const qtrack::CircuitError& e) {
    std::cerr << "parse error: " << path << ": " << e.what() << "\n";
    return kExitSchema;
  }
  if (c.instructions.empty()) {
    std::cerr << "parse error: " << path << ": circuit is empty\n";
    return kExitSchema;
  }
  return 0;
}

int cmd_compile(const std::string& cfg, const std::string& out_path,
                const std::vector<std::string>& sets, bool no_repeat, bool swapped,
                const std::string& noise_model, double noise_p, bool noiseless) {
  qtrack::ConfigOverrides ov;
  for (const auto& s : sets) {
    auto eq = s.find('=');
    if (eq == std::string::npos) {
      std::cerr << "error: --set expects name=value, got '" << s << "'\n";
      return kExitUsage;
    }
    try {
      ov.params[s.substr(0, eq)] = std::stod(s.substr(eq + 1));
    } catch (const std::exception&) {
      std::cerr << "error: --set value for '" << s.substr(0, eq) << "' is not a number\n";
      return kExitUsage;
    }
  }
  if (no_repeat) ov.use_repeat = false;
  if (swapped) ov.variant = qtrack::ScheduleVariant::SwappedZX;

  std::error_code ec;
  if (!std::filesystem::is_regular_file(cfg, ec)) {
    std::cerr << "error: cannot read " << cfg << "\n";
    return kExitUsage;
  }
  qtrack::CompiledProtocol p;
  try {
    p = qtrack::compile_config_file(cfg, ov);
  } catch (const qtrack::SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return kExitSchema;
  } catch (const std::exception& e) {
    std::cerr << "compile error: " << e.what() << "\n";
    return kExitCompile;
  }
  if (!noise_model.empty()) {
    try {
      p.noise.model = qtrack::parse_noise_model(noise_model);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitUsage;
    }
  }
  if (noise_p >= 0) p.noise.p = noise_p;
  if (noiseless) p.noise.model = qtrack::NoiseModel::None;

  qtrack::AnnotatedCircuit out;
  try {
    out = qtrack::noisy_circuit(p);
  } catch (const std::exception& e) {
    std::cerr << "compile error: noise injection: " << e.what() << "\n";
    return kExitCompile;
  }
  const std::string text = qtrack::emit_text(out);
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    std::cerr << qtrack::stats_line(p.result.stats, p.ao_loc) << "\n";
  } else {
    std::ofstream f(out_path);
    if (!f) {
      std::cerr << "error: cannot write " << out_path << "\n";
      return kExitUsage;
    }
    f << text;
    std::cout << qtrack::stats_line(p.result.stats, p.ao_loc) << "\n";
  }
  return 0;
}

int cmd_verify(const std::string& path, uint64_t seeds) {
  qtrack::AnnotatedCircuit c;
  if (int rc = load_circuit(path, c)) return rc;
  if (seeds < 2) {
    std::cerr << "error: --seeds must be at least 2\n";
    return kExitUsage;
  }
  qtrack::DeterminismReport rep;
  try {
    rep = qtrack::check_determinism(c, seeds, thread_count());
  } catch (const std::exception& e) {
    std::cerr << "verify error: " << e.what() << "\n";
    return kExitSchema;
  }
  std::cout << "detectors=" << rep.detectors << " observables=" << rep.observables
            << " seeds=" << rep.seeds << " violations=" << rep.violations.size() << "\n";
  if (!rep.ok()) {
    std::cerr << rep.describe();
    return kExitVerify;
  }
  return 0;
}

int cmd_stats(const std::string& path) {
  qtrack::AnnotatedCircuit c;
  if (int rc = load_circuit(path, c)) return rc;
  qtrack::CircuitCounts n = qtrack::count(c);
  std::cout << "qubits=" << n.qubits << " measurements=" << n.measurements
            << " detectors=" << n.detectors << " observables=" << n.observables
            << " annotations=" << n.annotations() << "\n";
  return 0;
}

int cmd_list() {
  std::cout << "families:";
  for (auto f : {qtrack::Family::Repetition, qtrack::Family::RotatedSurface,
                 qtrack::Family::UnrotatedSurface, qtrack::Family::Toric}) {
    std::cout << " " << qtrack::family_name(f);
  }
  std::cout << "\nschedules: standard swapped_zx\n";
  std::cout << "noise: none code_capacity phenomenological circuit_level biased_xz custom_pauli\n";
  std::cout << "configs:";
  for (const auto& p : qtrack::bundled_configs()) {
    std::cout << " " << std::filesystem::path(p).filename().string();
  }
  std::cout << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qtrack: QEC protocol compiler with derived detector annotations"};
  app.require_subcommand(1);

  std::string cfg, out_path;
  std::vector<std::string> sets;
  bool no_repeat = false, swapped = false, noiseless = false;
  std::string noise_model;
  double noise_p = -1;
  auto* compile = app.add_subcommand("compile", "compile a protocol config to a circuit");
  compile->add_option("config", cfg, "protocol config (JSON)")->required();
  compile->add_option("-o,--output", out_path, "output circuit file ('-' for stdout)");
  compile->add_option("--set", sets, "override a config parameter, name=value");
  compile->add_flag("--no-repeat", no_repeat, "process every round explicitly");
  compile->add_flag("--swapped-zx", swapped, "use the swapped ZX schedule");
  compile->add_option("--noise", noise_model, "override the noise model");
  compile->add_option("--p", noise_p, "override the noise strength");
  compile->add_flag("--noiseless", noiseless, "ignore the config's noise section");

  std::string circuit;
  uint64_t seeds = 100;
  auto* verify = app.add_subcommand("verify", "check every annotation is deterministic");
  verify->add_option("circuit", circuit, "circuit file")->required();
  verify->add_option("--seeds", seeds, "number of seeds (default 100)");

  std::string stats_path;
  auto* stats = app.add_subcommand("stats", "print counts for a circuit file");
  stats->add_option("circuit", stats_path, "circuit file")->required();

  auto* list = app.add_subcommand("list", "list families, schedules and bundled configs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }
  if (compile->parsed()) {
    return cmd_compile(cfg, out_path, sets, no_repeat, swapped, noise_model, noise_p, noiseless);
  }
  if (verify->parsed()) return cmd_verify(circuit, seeds);
  if (stats->parsed()) return cmd_stats(stats_path);
  if (list->parsed()) return cmd_list();
  return kExitUsage;
}
