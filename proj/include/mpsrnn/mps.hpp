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

#ifndef MPSRNN_MPS_HPP
#define MPSRNN_MPS_HPP

#include <array>
#include <vector>

#include "mpsrnn/types.hpp"

namespace mpsrnn {

/// Matrix product state. Site matrix M[i][spin] has shape
/// (bond_dim(i+1), bond_dim(i)); both boundary bonds are kept as free
/// indices, contracted with all-ones vectors.
struct Mps {
  std::vector<std::array<MatrixXcd, 2>> site;

  int num_sites() const { return static_cast<int>(site.size()); }
  int bond_dim(int b) const;  // b in [0, num_sites()]
  int max_bond_dim() const;

  /// Throws ShapeError unless adjacent shapes chain correctly.
  void validate() const;
};

/// psi(sigma) = ones^T M^(V-1) ... M^(0) ones.
Complex contract_mps(const Mps &mps, const SpinConfig &sigma);

/// Environment matrices gamma^(i) (traced over sites > i), computed by the
/// right-to-left recursion gamma^(i-1) = sum_s M(i)^dag gamma^(i) M(i),
/// seeded with the all-ones matrix at i = V-1. gamma[i] pairs with the
/// memory after site i and has shape (bond_dim(i+1), bond_dim(i+1)).
std::vector<MatrixXcd> gamma_from_mps(const Mps &mps);

/// Zero-pads every site matrix to a uniform bond dimension
/// (max over all bonds). Amplitudes are unchanged.
Mps pad_to_uniform(const Mps &mps);

/// Left-to-right reshape+SVD factorization of a full statevector
/// (bit-encoding: site i = bit i), truncating each bond to at most chi_max
/// singular values. discarded_weight, when given, receives the sum of the
/// squared discarded singular values per internal bond.
Mps statevector_to_mps(const VectorXcd &psi, int chi_max,
                       std::vector<double> *discarded_weight = nullptr);

}  // namespace mpsrnn

#endif  // MPSRNN_MPS_HPP
