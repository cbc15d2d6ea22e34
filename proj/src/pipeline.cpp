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

#include "mpsrnn/pipeline.hpp"

namespace mpsrnn {

RnnParams one_d_from_mps(const Mps &mps, bool phase_enabled) {
  RnnParams one_d = gauge_absorb(mps_to_vanilla(mps));
  one_d.phase_enabled = phase_enabled;
  return one_d;
}

RnnParams one_d_from_statevector(const VectorXcd &psi, int chi_max, bool phase_enabled) {
  return one_d_from_mps(statevector_to_mps(psi, chi_max), phase_enabled);
}

}  // namespace mpsrnn
