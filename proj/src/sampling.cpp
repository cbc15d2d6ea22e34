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

#include "mpsrnn/sampling.hpp"

#include <algorithm>

#include "mpsrnn/engine.hpp"
#include "mpsrnn/errors.hpp"
#include "mpsrnn/rng.hpp"

namespace mpsrnn {

SampleBatch sample_batch(const RnnParams &params, const Lattice &lattice, long n,
                         std::uint64_t seed) {
  if (n < 1) throw ConfigError("sample_batch: n must be >= 1");
  Engine engine(params, lattice);

  SampleBatch batch;
  batch.seed = seed;
  batch.configs.reserve(n);
  batch.stream_ids.reserve(n);
  batch.log_probs.resize(n);

  constexpr long kChunk = 8192;
  const int V = params.num_sites;
  for (long first = 0; first < n; first += kChunk) {
    const long count = std::min(kChunk, n - first);
    Engine::Forward fwd = engine.sample_forward(count, seed, first);
    for (long b = 0; b < count; ++b) {
      SpinConfig sigma(V);
      for (int i = 0; i < V; ++i) sigma[i] = fwd.spins(i, b);
      batch.configs.push_back(std::move(sigma));
      batch.stream_ids.push_back(sample_stream(seed, first + b));
      batch.log_probs(first + b) = 2.0 * fwd.log_abs(b);
    }
  }
  return batch;
}

}  // namespace mpsrnn
