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

#ifndef MPSRNN_GRADIENT_HPP
#define MPSRNN_GRADIENT_HPP

#include "mpsrnn/lattice.hpp"
#include "mpsrnn/params.hpp"
#include "mpsrnn/types.hpp"

namespace mpsrnn {

/// Flat real view of a parameter set: every complex entry contributes two
/// consecutive slots (re, im), matrices are traversed in storage order,
/// sites ascending, spin-0 block before spin-1. w and c are excluded when
/// phases are disabled. The same layout orders gradients and Adam state.
class ParamLayout {
 public:
  explicit ParamLayout(const RnnParams &params);

  long size() const { return size_; }

  VectorXd pack(const RnnParams &params) const;
  void unpack(const VectorXd &flat, RnnParams &params) const;

  // block offsets used by the backward pass
  long offset_M(int site, int spin) const { return m_[2 * site + spin]; }
  long offset_gamma(int site) const { return gamma_[site]; }
  long offset_Mx(int site, int spin) const { return mx_[2 * site + spin]; }
  long offset_My(int site, int spin) const { return my_[2 * site + spin]; }
  long offset_T(int site, int spin) const { return t_[2 * site + spin]; }
  long offset_K(int site, int spin) const { return k_[2 * site + spin]; }
  long offset_Uo(int site, int spin) const { return uo_[2 * site + spin]; }
  long offset_Ux(int site, int spin) const { return ux_[2 * site + spin]; }
  long offset_Uy(int site, int spin) const { return uy_[2 * site + spin]; }
  long offset_v(int site, int spin) const { return v_[2 * site + spin]; }
  long offset_log_eta(int site) const { return log_eta_[site]; }
  long offset_w(int site, int spin) const { return w_[2 * site + spin]; }
  long offset_c(int site, int spin) const { return c_[2 * site + spin]; }
  bool has_phase_params() const { return phase_; }

 private:
  long size_ = 0;
  bool phase_ = false;
  std::vector<long> m_, gamma_, mx_, my_, t_, k_, uo_, ux_, uy_, v_, log_eta_, w_, c_;
};

/// O_k = d log psi(sigma) / d theta_k for every real parameter, complex
/// because log psi = log|psi| + i phi. Computed by reverse-mode
/// accumulation through the recurrence; layout order.
VectorXcd log_derivatives(const RnnParams &params, const Lattice &lattice,
                          const SpinConfig &sigma);

}  // namespace mpsrnn

#endif  // MPSRNN_GRADIENT_HPP
