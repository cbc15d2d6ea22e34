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

#ifndef MPSRNN_SAMPLING_HPP
#define MPSRNN_SAMPLING_HPP

#include <cstdint>
#include <vector>

#include "mpsrnn/lattice.hpp"
#include "mpsrnn/params.hpp"
#include "mpsrnn/types.hpp"

namespace mpsrnn {

/// Exact independent samples from |psi|^2.
struct SampleBatch {
  std::vector<SpinConfig> configs;
  VectorXd log_probs;  // sum_i log p(sigma_i | prefix) = 2 log|psi|
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> stream_ids;

  long size() const { return static_cast<long>(configs.size()); }
};

/// Walks the sites in snake order for each sample, drawing every spin from
/// its exact conditional. Sample k uses the counter stream derived from
/// (seed, k), so the result is independent of batching and execution order.
SampleBatch sample_batch(const RnnParams &params, const Lattice &lattice, long n,
                         std::uint64_t seed);

}  // namespace mpsrnn

#endif  // MPSRNN_SAMPLING_HPP
