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

#ifndef MPSRNN_CONFIG_HPP
#define MPSRNN_CONFIG_HPP

#include <string>

#include "mpsrnn/lattice.hpp"
#include "mpsrnn/params.hpp"
#include "mpsrnn/vmc.hpp"

namespace mpsrnn {

/// Run configuration parsed from UTF-8 "key = value" lines ('#' comments).
/// Recognized keys: lattice.kind, lattice.L, ansatz.variant, ansatz.chi,
/// hamiltonian, hamiltonian.marshall, hamiltonian.g, vmc.batch_size,
/// vmc.lr_schedule, vmc.clip_norm, vmc.steps, vmc.seed, vmc.eval_samples,
/// init.from, init.noise_std. Unknown keys are rejected.
struct RunConfig {
  LatticeKind lattice_kind = LatticeKind::Chain;
  int L = 0;  // 0 = not set
  Variant variant = Variant::OneD;
  int chi = 0;
  std::string hamiltonian = "afhm";  // afhm | tfim
  bool marshall = false;
  double g = 1.0;
  VmcConfig vmc;
  std::string init_from;
  double init_noise_std = 1e-7;

  Lattice make_lattice() const;
  Hamiltonian make_hamiltonian(const Lattice &lattice) const;
};

RunConfig parse_config_text(const std::string &text);
RunConfig parse_config_file(const std::string &path);

/// "steps:rate,steps:rate,..." used by the vmc.lr_schedule key.
std::vector<LrStage> parse_lr_schedule(const std::string &text);

}  // namespace mpsrnn

#endif  // MPSRNN_CONFIG_HPP
