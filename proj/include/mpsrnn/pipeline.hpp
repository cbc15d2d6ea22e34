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

#ifndef MPSRNN_PIPELINE_HPP
#define MPSRNN_PIPELINE_HPP

#include "mpsrnn/mapping.hpp"
#include "mpsrnn/mps.hpp"
#include "mpsrnn/params.hpp"
#include "mpsrnn/types.hpp"

namespace mpsrnn {

/// statevector -> MPS (bond <= chi_max) -> vanilla -> gauge-absorbed 1D.
/// With phases disabled the state's sign structure is dropped (positive
/// ground states only lose truncation-induced sign noise).
RnnParams one_d_from_statevector(const VectorXcd &psi, int chi_max, bool phase_enabled);

/// Same starting from an existing MPS.
RnnParams one_d_from_mps(const Mps &mps, bool phase_enabled);

}  // namespace mpsrnn

#endif  // MPSRNN_PIPELINE_HPP
