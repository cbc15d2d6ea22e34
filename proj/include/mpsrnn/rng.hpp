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

#ifndef MPSRNN_RNG_HPP
#define MPSRNN_RNG_HPP

#include <cmath>
#include <cstdint>

namespace mpsrnn {

// Counter-based random numbers: every draw is a pure function of
// (seed, stream, counter), so parallel or chunked consumers produce
// identical results in any execution order.

namespace detail {

// SplitMix64 finalizer (Steele, Lea, Flood 2014).
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace detail

/// 64 uniformly distributed bits for the given (seed, stream, counter) cell.
inline std::uint64_t counter_bits(std::uint64_t seed, std::uint64_t stream,
                                  std::uint64_t counter) {
  std::uint64_t z = detail::mix64(seed + 0x9E3779B97F4A7C15ULL);
  z = detail::mix64(z ^ (stream + 0xD1B54A32D192ED03ULL));
  z = detail::mix64(z ^ (counter + 0x8CB92BA72F3D8DD7ULL));
  return z;
}

/// Uniform double in [0, 1) with 53 random bits.
inline double counter_uniform(std::uint64_t seed, std::uint64_t stream,
                              std::uint64_t counter) {
  return static_cast<double>(counter_bits(seed, stream, counter) >> 11) *
         0x1.0p-53;
}

/// Standard normal deviate via Box-Muller on two counter cells.
/// Counters `2k` and `2k+1` of a stream yield one deviate for index k.
inline double counter_normal(std::uint64_t seed, std::uint64_t stream,
                             std::uint64_t index) {
  double u1 = counter_uniform(seed, stream, 2 * index);
  double u2 = counter_uniform(seed, stream, 2 * index + 1);
  // guard log(0)
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
}

/// Stream id assigned to one sample of a batch.
inline std::uint64_t sample_stream(std::uint64_t seed, std::uint64_t sample_index) {
  return detail::mix64(detail::mix64(seed ^ 0xA0761D6478BD642FULL) + sample_index);
}

}  // namespace mpsrnn

#endif  // MPSRNN_RNG_HPP
