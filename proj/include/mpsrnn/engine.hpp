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

#ifndef MPSRNN_ENGINE_HPP
#define MPSRNN_ENGINE_HPP

#include <cstdint>
#include <vector>

#include "mpsrnn/gradient.hpp"
#include "mpsrnn/lattice.hpp"
#include "mpsrnn/params.hpp"
#include "mpsrnn/types.hpp"

namespace mpsrnn {

using SpinMatrix = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

/// Batched site-by-site evaluation of an ansatz over many configurations at
/// once (one column per configuration), so the per-site work becomes matrix
/// products. Used by sampling, enumeration, local energies and gradients;
/// per-configuration results agree with evaluate_amplitude.
class Engine {
 public:
  Engine(const RnnParams &params, const Lattice &lattice);

  /// Forward-pass record over one batch. With internals kept it doubles as
  /// the tape for backward() and as the parent state for connected_forward().
  struct Forward {
    SpinMatrix spins;    // V x B
    MatrixXd cond;       // V x B realized-branch conditionals
    MatrixXd phi;        // V x B local phases (zero rows when disabled)
    VectorXd log_abs;    // B; -inf marks zero amplitude
    VectorXd phase;      // B; unwrapped sum of local phases

    bool has_internals = false;
    std::vector<MatrixXcd> h_out;                   // V of (chi x B)
    std::vector<std::array<MatrixXcd, 2>> h_tilde;  // V of (chi x B)
    std::vector<MatrixXcd> kron;                    // V of (chi^2 x B), Tensor only
    std::vector<std::array<MatrixXcd, 2>> px, py, core;  // CompressedTensor
    std::array<MatrixXd, 2> q;                      // V x B per branch
    MatrixXd norm;                                  // V x B
    MatrixXcd z;                                    // V x B phase readouts

    long batch_size() const { return spins.cols(); }
  };

  const RnnParams &params() const { return *params_; }
  const Lattice &lattice() const { return *lattice_; }

  /// Evaluates all columns of `configs`. Throws DegenerateStateError only if
  /// both branches vanish while the running amplitude is still nonzero.
  Forward forward(const SpinMatrix &configs, bool keep_internals) const;

  /// Draws spins autoregressively; sample k of the chunk uses the stream of
  /// global index first_index + k under `seed`. Internals are kept.
  Forward sample_forward(long num_samples, std::uint64_t seed,
                         std::uint64_t first_index) const;

  /// Reverse-mode pass. Accumulates sum_b [seed_log_abs(b) * dlog|psi_b| +
  /// seed_phase(b) * dphi_b] / dtheta into `grad` (layout order). Columns
  /// with both seeds zero are skipped implicitly.
  void backward(const Forward &fwd, const VectorXd &seed_log_abs,
                const VectorXd &seed_phase, const ParamLayout &layout,
                VectorXd &grad) const;

  /// Log-amplitudes of configurations that each share the prefix
  /// [0, start_site) with a parent column of a taped batch; memories and
  /// accumulated logs of the shared prefix are reused instead of recomputed.
  void connected_forward(const Forward &parent, const std::vector<int> &parent_col,
                         const SpinMatrix &configs, const std::vector<int> &start_site,
                         VectorXd &out_log_abs, VectorXd &out_phase) const;

 private:
  struct SitePlan {
    PredRef hx, hy;
    bool vanilla_chain = false;  // OneD/Vanilla: hx is the snake predecessor
  };

  void run_sites(Forward &fwd, bool sampling, std::uint64_t seed,
                 std::uint64_t first_index) const;

  const RnnParams *params_;
  const Lattice *lattice_;
  std::vector<SitePlan> plan_;
  std::vector<VectorXd> eta_;  // exp(log_eta) cache (empty for Vanilla)
};

}  // namespace mpsrnn

#endif  // MPSRNN_ENGINE_HPP
