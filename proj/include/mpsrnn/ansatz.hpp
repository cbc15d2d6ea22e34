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

#ifndef MPSRNN_ANSATZ_HPP
#define MPSRNN_ANSATZ_HPP

#include <utility>

#include "mpsrnn/lattice.hpp"
#include "mpsrnn/params.hpp"
#include "mpsrnn/types.hpp"

namespace mpsrnn {

/// Everything recorded while evaluating one amplitude.
struct AmplitudeTrace {
  VectorXd cond_prob;   // p(sigma_i | prefix) of the realized spin, per site
  VectorXd site_phase;  // local phase per site (vanilla: only the last entry)
  double log_abs = 0;   // 1/2 sum log p; -inf when the amplitude is exactly 0
  double phase = 0;     // total phase wrapped to (-pi, pi]
  bool phase_flagged = false;  // arg(0) was hit somewhere

  Complex psi() const;
};

/// One memory update h~ = T<hx,hy> + Mx hx + My hy + v for the given site
/// and spin, with the terms the variant owns. Vanilla and OneD read only the
/// horizontal input (their chain predecessor). CompressedTensor contracts
/// through the Tucker factors without materializing the full tensor.
VectorXcd memory_update(const RnnParams &params, int site, int spin,
                        const VectorXcd &h_horizontal, const VectorXcd &h_vertical);

/// Joint normalization of the two spin branches: both vectors divided by
/// sqrt(sum of |entries|^2 over both branches). Throws DegenerateStateError
/// if both inputs vanish.
std::pair<VectorXcd, VectorXcd> normalize_memory(const VectorXcd &h_up,
                                                 const VectorXcd &h_down);

/// Conditional probabilities (p_up, p_down) from the weighted square norms
/// q(sigma) = sum_s eta_s |h_s(sigma)|^2. Throws DegenerateStateError when
/// both vanish. The result is invariant under joint rescaling of the inputs,
/// so pre- and post-normalization memories give the same value.
std::pair<double, double> conditional_from_eta(const VectorXd &eta,
                                               const VectorXcd &h_up,
                                               const VectorXcd &h_down);

/// Same with the quadratic form q(sigma) = Re[h(sigma)^dag gamma h(sigma)].
std::pair<double, double> conditional_from_gamma(const MatrixXcd &gamma,
                                                 const VectorXcd &h_up,
                                                 const VectorXcd &h_down);

/// Local phase arg(w^T h + c) in (-pi, pi]. Returns {0, true} when the
/// argument vanishes (flagged, not fatal).
std::pair<double, bool> site_phase(const VectorXcd &w, Complex c, const VectorXcd &h);

/// Runs the recurrence in snake order, evaluating both spin branches at each
/// site, and returns the full trace. Memories advance with the realized
/// branch; a configuration outside the state's support yields log_abs = -inf
/// rather than an error.
AmplitudeTrace evaluate_amplitude(const RnnParams &params, const Lattice &lattice,
                                  const SpinConfig &sigma);

}  // namespace mpsrnn

#endif  // MPSRNN_ANSATZ_HPP
