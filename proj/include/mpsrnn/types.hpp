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

#ifndef MPSRNN_TYPES_HPP
#define MPSRNN_TYPES_HPP

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

namespace mpsrnn {

using Complex = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

/// Spin values along the snake ordering; 0 = up, 1 = down.
using SpinConfig = std::vector<std::uint8_t>;

/// Bit-encoding shared by all exact oracles: site i is bit i of the index.
inline SpinConfig config_from_bits(std::uint64_t bits, int num_sites) {
  SpinConfig sigma(num_sites);
  for (int i = 0; i < num_sites; ++i) sigma[i] = (bits >> i) & 1U;
  return sigma;
}

inline std::uint64_t config_to_bits(const SpinConfig &sigma) {
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < sigma.size(); ++i)
    if (sigma[i]) bits |= (1ULL << i);
  return bits;
}

}  // namespace mpsrnn

#endif  // MPSRNN_TYPES_HPP
