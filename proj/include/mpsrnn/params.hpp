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

#ifndef MPSRNN_PARAMS_HPP
#define MPSRNN_PARAMS_HPP

#include <array>
#include <string>
#include <vector>

#include "mpsrnn/types.hpp"

namespace mpsrnn {

enum class Variant { Vanilla, OneD, TwoD, Tensor, CompressedTensor };

std::string to_string(Variant v);
Variant variant_from_string(const std::string &name);

/// Tucker core dimension: smallest k with k^3 >= chi^2, i.e. ceil(chi^(2/3))
/// evaluated in exact integer arithmetic.
int tucker_core_dim(int chi);

/// Parameters of one ansatz in the MPS-RNN hierarchy.
///
/// All per-site arrays are indexed by snake index; the inner index of the
/// two-element arrays is the spin value the parameter is attached to.
/// Third-order tensors are stored as their mode-0 unfolding: the tensor
/// entry (s, t, u) lives at row s, column t*dim_u + u.
///
/// Which members are populated depends on `variant`:
///   Vanilla           M, gamma
///   OneD              M, v, log_eta, w, c
///   TwoD              Mx, My, v, log_eta, w, c
///   Tensor            T (chi x chi^2) plus all TwoD members
///   CompressedTensor  K (chi' x chi'^2), Uo, Ux, Uy (chi x chi') plus TwoD
struct RnnParams {
  Variant variant = Variant::OneD;
  int num_sites = 0;
  int chi = 0;
  int chi_core = 0;  // chi', CompressedTensor only
  bool phase_enabled = true;

  std::vector<std::array<MatrixXcd, 2>> M;
  std::vector<MatrixXcd> gamma;
  std::vector<std::array<MatrixXcd, 2>> Mx, My;
  std::vector<std::array<MatrixXcd, 2>> T;
  std::vector<std::array<MatrixXcd, 2>> K;
  std::vector<std::array<MatrixXcd, 2>> Uo, Ux, Uy;
  std::vector<std::array<VectorXcd, 2>> v;
  std::vector<VectorXd> log_eta;
  std::vector<std::array<VectorXcd, 2>> w;
  std::vector<std::array<Complex, 2>> c;

  /// Zero-initialized containers of the right shapes (log_eta = 0, c = 1,
  /// CompressedTensor factors = truncated identities).
  static RnnParams make(Variant variant, int num_sites, int chi);

  bool has_bias() const { return variant != Variant::Vanilla; }
  bool is_two_dimensional() const {
    return variant == Variant::TwoD || variant == Variant::Tensor ||
           variant == Variant::CompressedTensor;
  }

  Complex tensor_entry(int site, int spin, int s, int t, int u) const {
    return T[site][spin](s, t * chi + u);
  }

  /// eta = exp(log_eta) at one site.
  VectorXd eta(int site) const;

  /// Throws ShapeError if any per-site shape is inconsistent with
  /// (variant, num_sites, chi, chi_core); NumericalError if a Vanilla gamma
  /// fails the Hermitian PSD check (eigenvalues >= -1e-12 * scale).
  void validate() const;
};

}  // namespace mpsrnn

#endif  // MPSRNN_PARAMS_HPP
