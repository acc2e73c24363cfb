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

#ifndef QTRACK_CONFIG_H_
#define QTRACK_CONFIG_H_

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qtrack/circuit.h"
#include "qtrack/compiler.h"

namespace qtrack {

// Malformed or schema-violating protocol config. The message names the
// offending key path, e.g. "ops[2].rounds".
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ConfigOverrides {
  std::map<std::string, double> params;
  std::optional<bool> use_repeat;
  std::optional<ScheduleVariant> variant;
  std::optional<bool> emit_coords;
};

struct CompiledProtocol {
  std::string name;
  CompileResult result;
  NoiseSpec noise;
  uint64_t ao_loc = 0;  // op entries in the config
};

// Parses and schema-checks a config document, then compiles it. Schema
// problems throw SchemaError; compile problems propagate from the compiler,
// system, code library or tracker.
CompiledProtocol compile_config_text(const std::string& text, const ConfigOverrides& ov = {});
CompiledProtocol compile_config_file(const std::string& path, const ConfigOverrides& ov = {});

// Applies the config's noise section (if any) to the compiled circuit.
AnnotatedCircuit noisy_circuit(const CompiledProtocol& p);

// Directory holding the bundled configs and their sorted file paths.
std::string bundled_config_dir();
std::vector<std::string> bundled_configs();

// Single-line machine-parseable summary.
std::string stats_line(const CompileStats& s, uint64_t ao_loc);

}  // namespace qtrack

#endif  // QTRACK_CONFIG_H_
