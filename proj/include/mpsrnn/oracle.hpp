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

#ifndef MPSRNN_ORACLE_HPP
#define MPSRNN_ORACLE_HPP

#include <vector>

#include "mpsrnn/hamiltonian.hpp"
#include "mpsrnn/lattice.hpp"
#include "mpsrnn/params.hpp"
#include "mpsrnn/sampling.hpp"
#include "mpsrnn/types.hpp"

namespace mpsrnn {

// Exact desk-scale references. All statevectors use the shared bit
// encoding: site i = bit i of the index.

/// psi(sigma) for every configuration, evaluated through the ansatz.
/// The result has unit norm up to accumulated rounding.
VectorXcd enumerate_wavefunction(const RnnParams &params, const Lattice &lattice);

/// H |psi> without materializing the matrix.
VectorXcd apply_hamiltonian(const Hamiltonian &h, const VectorXcd &psi);

/// <psi|H|psi> / <psi|psi>.
double expectation_value(const Hamiltonian &h, const VectorXcd &psi);

/// Lowest eigenpair: dense below 2^12, restarted Lanczos above.
/// The residual ||H psi - E psi|| is driven below `tol`.
std::pair<double, VectorXcd> exact_ground_state(const Hamiltonian &h, int num_sites,
                                                double tol = 1e-9);

/// Von Neumann entropy -Tr rho ln rho of the reduced density matrix over
/// `region` (natural log). The smaller of region/complement is used; its
/// size is capped at 13 sites.
double cut_entropy(const VectorXcd &psi, const std::vector<int> &region, int num_sites);

/// Total variation distance between the batch's empirical distribution and
/// |psi|^2 / ||psi||^2.
double sampler_total_variation(const SampleBatch &batch, const VectorXcd &psi);

}  // namespace mpsrnn

#endif  // MPSRNN_ORACLE_HPP
