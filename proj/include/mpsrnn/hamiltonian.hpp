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

#ifndef MPSRNN_HAMILTONIAN_HPP
#define MPSRNN_HAMILTONIAN_HPP

#include <utility>
#include <vector>

#include "mpsrnn/ansatz.hpp"
#include "mpsrnn/lattice.hpp"
#include "mpsrnn/types.hpp"

namespace mpsrnn {

enum class TermKind { HeisenbergBond, ZzBond, XField };

struct HamTerm {
  TermKind kind;
  int site_i = 0;
  int site_j = -1;  // unused for XField
  double coeff = 1.0;
  bool marshall_flip = false;  // off-diagonal sign flipped (HeisenbergBond)
};

/// Local terms of a spin-1/2 Hamiltonian on a lattice.
///
/// Conventions: Heisenberg bonds are S_i . S_j with S = sigma/2, so the
/// diagonal is coeff/4 * z_i z_j and the exchange element is coeff/2.
/// ZzBond and XField use Pauli scale (z = +-1, flip amplitude = coeff).
/// The Marshall sign rule is realized as a sign flip of the exchange
/// element on sublattice-changing bonds, sublattice = (x+y) parity; on the
/// triangular lattice, plaquette diagonals connect equal parities and are
/// left untouched.
struct Hamiltonian {
  int num_sites = 0;
  bool marshall = false;
  std::vector<HamTerm> terms;
};

/// Antiferromagnetic Heisenberg model: one unit-coefficient bond per edge.
Hamiltonian build_afhm(const Lattice &lattice, bool marshall);

/// Transverse-field Ising model -sum_edges Z Z - g sum_sites X.
Hamiltonian build_tfim(const Lattice &lattice, double g);

/// All configurations sigma' connected to sigma, with matrix elements
/// <sigma|H|sigma'>. The diagonal is aggregated into the first entry
/// (sigma itself).
std::vector<std::pair<SpinConfig, Complex>> connected_elements(const Hamiltonian &h,
                                                               const SpinConfig &sigma);

/// E_loc(sigma) = sum_sigma' H_{sigma sigma'} psi(sigma') / psi(sigma),
/// amplitude ratios taken in the log domain.
Complex local_energy(const RnnParams &params, const Lattice &lattice,
                     const Hamiltonian &h, const SpinConfig &sigma);

}  // namespace mpsrnn

#endif  // MPSRNN_HAMILTONIAN_HPP
