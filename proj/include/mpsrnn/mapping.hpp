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

#ifndef MPSRNN_MAPPING_HPP
#define MPSRNN_MAPPING_HPP

#include <cstdint>

#include "mpsrnn/lattice.hpp"
#include "mpsrnn/mps.hpp"
#include "mpsrnn/params.hpp"

namespace mpsrnn {

/// Exact MPS -> vanilla MPS-RNN map: copies the site matrices and attaches
/// the environment matrices as gamma. The resulting amplitudes equal the
/// l2-normalized MPS amplitudes, phase included. Rectangular inputs are
/// zero-padded to a uniform bond dimension first.
RnnParams mps_to_vanilla(const Mps &mps);

/// Diagonalizes every gamma and absorbs the unitaries into the site
/// matrices, turning the quadratic form into the diagonal eta weights of a
/// 1D MPS-RNN. Eigenvalues are clamped at 1e-30 before the log. The vanilla
/// phase readout survives as a w-vector on the last site. Conditionals and
/// phases are preserved.
RnnParams gauge_absorb(const RnnParams &vanilla);

/// Embeds the bias into an extra memory component: chi -> chi+1 with v = 0,
/// the constant-1 auxiliary slot feeding the old bias column, eta extended
/// with weight 0 and the phase offset c moved into the auxiliary entry of w.
/// The augmented update is linear, so per-step normalization provably cannot
/// change its conditionals or phases.
RnnParams absorb_bias(const RnnParams &one_d);

/// Hierarchy lift 1D -> 2D: the single matrix moves onto the snake edge
/// (horizontal mid-row, vertical at row starts); the other matrix gets
/// elementwise complex Gaussian noise of the given std per real component.
/// noise_std = 0 reproduces the input amplitudes exactly.
RnnParams lift_1d_to_2d(const RnnParams &one_d, const Lattice &lattice,
                        double noise_std, std::uint64_t seed);

/// Hierarchy lift 2D -> tensor: T = noise.
RnnParams lift_2d_to_tensor(const RnnParams &two_d, double noise_std, std::uint64_t seed);

/// Hierarchy lift 2D -> compressed tensor: Tucker factors seeded with
/// truncated identities, core K = noise.
RnnParams lift_2d_to_compressed(const RnnParams &two_d, double noise_std,
                                std::uint64_t seed);

/// Exact simulation of a bias-free 2D MPS-RNN by a 1D MPS-RNN of bond
/// dimension L*chi: block transfer matrices move each row's memories into
/// the concatenated memory, eta reads only the active block.
///
/// The preserved object is the linear recurrence: for every configuration,
/// the output's conditionals equal those of the input's update rule iterated
/// without per-step memory normalization. (In a chain the normalization
/// rescales the one live memory by a common factor and provably cancels from
/// every conditional, so the output may be evaluated normally; in 2D the two
/// predecessor memories carry different accumulated normalizers, which is a
/// genuine model difference, not a numerical one.)
/// Throws ShapeError on nonzero v (absorb the bias first).
RnnParams simulate_2d_as_1d(const RnnParams &two_d, const Lattice &lattice);

/// Tucker compression of every site tensor by higher-order SVD with
/// chi' = ceil(chi^(2/3)) per mode, and its explicit re-expansion.
RnnParams tucker_compress(const RnnParams &tensor);
RnnParams tucker_expand(const RnnParams &compressed);

/// The chi = 2 tensor-RNN whose normalized state is uniform over
/// configurations with identical first and last rows, carrying an exact
/// area law S = L ln 2 across every cut between full rows. Requires even L.
RnnParams build_area_law_params(int L);

}  // namespace mpsrnn

#endif  // MPSRNN_MAPPING_HPP
