// Copyright 2026 The mpsrnn Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mpsrnn/config.hpp"

#include <fstream>
#include <sstream>

#include "mpsrnn/errors.hpp"
#include "mpsrnn/hamiltonian.hpp"

namespace mpsrnn {

namespace {

std::string trim(const std::string &s) {
  auto begin = s.find_first_not_of(" \t\r");
  auto end = s.find_last_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  return s.substr(begin, end - begin + 1);
}

long parse_long(const std::string &key, const std::string &value) {
  try {
    std::size_t used = 0;
    long v = std::stol(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception &) {
    throw ConfigError(key + ": not an integer: " + value);
  }
}

double parse_double(const std::string &key, const std::string &value) {
  try {
    std::size_t used = 0;
    double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception &) {
    throw ConfigError(key + ": not a number: " + value);
  }
}

bool parse_bool(const std::string &key, const std::string &value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError(key + ": not a boolean: " + value);
}

}  // namespace

std::vector<LrStage> parse_lr_schedule(const std::string &text) {
  std::vector<LrStage> out;
  std::stringstream ss(text);
  std::string stage;
  while (std::getline(ss, stage, ',')) {
    auto colon = stage.find(':');
    if (colon == std::string::npos)
      throw ConfigError("vmc.lr_schedule: expected steps:rate, got " + stage);
    LrStage st;
    st.steps = parse_long("vmc.lr_schedule", trim(stage.substr(0, colon)));
    st.rate = parse_double("vmc.lr_schedule", trim(stage.substr(colon + 1)));
    if (st.steps < 1 || st.rate <= 0)
      throw ConfigError("vmc.lr_schedule: steps must be >= 1 and rate > 0");
    out.push_back(st);
  }
  if (out.empty()) throw ConfigError("vmc.lr_schedule: empty schedule");
  return out;
}

RunConfig parse_config_text(const std::string &text) {
  RunConfig cfg;
  std::stringstream ss(text);
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (key == "lattice.kind") cfg.lattice_kind = lattice_kind_from_string(value);
    else if (key == "lattice.L") cfg.L = static_cast<int>(parse_long(key, value));
    else if (key == "ansatz.variant") cfg.variant = variant_from_string(value);
    else if (key == "ansatz.chi") cfg.chi = static_cast<int>(parse_long(key, value));
    else if (key == "hamiltonian") {
      if (value != "afhm" && value != "tfim") throw ConfigError("unknown hamiltonian: " + value);
      cfg.hamiltonian = value;
    } else if (key == "hamiltonian.marshall") cfg.marshall = parse_bool(key, value);
    else if (key == "hamiltonian.g") cfg.g = parse_double(key, value);
    else if (key == "vmc.batch_size") cfg.vmc.batch_size = parse_long(key, value);
    else if (key == "vmc.lr_schedule") cfg.vmc.lr_schedule = parse_lr_schedule(value);
    else if (key == "vmc.clip_norm") cfg.vmc.clip_norm = parse_double(key, value);
    else if (key == "vmc.steps") cfg.vmc.max_steps = parse_long(key, value);
    else if (key == "vmc.seed") cfg.vmc.seed = static_cast<std::uint64_t>(parse_long(key, value));
    else if (key == "vmc.eval_samples") cfg.vmc.eval_samples = parse_long(key, value);
    else if (key == "init.from") cfg.init_from = value;
    else if (key == "init.noise_std") cfg.init_noise_std = parse_double(key, value);
    else throw ConfigError("unknown config key: " + key);
  }
  if (cfg.vmc.batch_size < 2) throw ConfigError("vmc.batch_size must be >= 2");
  if (cfg.vmc.eval_samples < 1) throw ConfigError("vmc.eval_samples must be >= 1");
  return cfg;
}

RunConfig parse_config_file(const std::string &path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open config file " + path);
  std::stringstream buf;
  buf << is.rdbuf();
  return parse_config_text(buf.str());
}

Lattice RunConfig::make_lattice() const {
  if (L < 1) throw ConfigError("lattice.L is required");
  return Lattice(lattice_kind, L);
}

Hamiltonian RunConfig::make_hamiltonian(const Lattice &lattice) const {
  if (hamiltonian == "afhm") return build_afhm(lattice, marshall);
  return build_tfim(lattice, g);
}

}  // namespace mpsrnn
