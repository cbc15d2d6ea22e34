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

#include "mpsrnn/mps.hpp"

#include <Eigen/SVD>
#include <algorithm>

#include "mpsrnn/errors.hpp"

namespace mpsrnn {

int Mps::bond_dim(int b) const {
  if (b < 0 || b > num_sites()) throw ShapeError("bond index out of range");
  if (b < num_sites()) return static_cast<int>(site[b][0].cols());
  return static_cast<int>(site[b - 1][0].rows());
}

int Mps::max_bond_dim() const {
  int chi = 1;
  for (int b = 0; b <= num_sites(); ++b) chi = std::max(chi, bond_dim(b));
  return chi;
}

void Mps::validate() const {
  if (site.empty()) throw ShapeError("empty MPS");
  for (int i = 0; i < num_sites(); ++i) {
    if (site[i][0].rows() != site[i][1].rows() || site[i][0].cols() != site[i][1].cols())
      throw ShapeError("MPS: spin blocks differ in shape at site " + std::to_string(i));
    if (i + 1 < num_sites() && site[i + 1][0].cols() != site[i][0].rows())
      throw ShapeError("MPS: bond mismatch between sites " + std::to_string(i) + " and " +
                       std::to_string(i + 1));
  }
}

Complex contract_mps(const Mps &mps, const SpinConfig &sigma) {
  if (static_cast<int>(sigma.size()) != mps.num_sites())
    throw ShapeError("contract_mps: configuration has wrong length");
  VectorXcd h = VectorXcd::Ones(mps.bond_dim(0));
  for (int i = 0; i < mps.num_sites(); ++i) h = mps.site[i][sigma[i]] * h;
  return h.sum();
}

std::vector<MatrixXcd> gamma_from_mps(const Mps &mps) {
  mps.validate();
  const int V = mps.num_sites();
  std::vector<MatrixXcd> gamma(V);
  gamma[V - 1] = MatrixXcd::Ones(mps.bond_dim(V), mps.bond_dim(V));
  for (int i = V - 1; i >= 1; --i) {
    const auto &m = mps.site[i];
    gamma[i - 1] = m[0].adjoint() * gamma[i] * m[0] + m[1].adjoint() * gamma[i] * m[1];
  }
  return gamma;
}

Mps pad_to_uniform(const Mps &mps) {
  mps.validate();
  const int chi = mps.max_bond_dim();
  Mps out;
  out.site.resize(mps.num_sites());
  for (int i = 0; i < mps.num_sites(); ++i) {
    for (int s = 0; s < 2; ++s) {
      MatrixXcd padded = MatrixXcd::Zero(chi, chi);
      padded.topLeftCorner(mps.site[i][s].rows(), mps.site[i][s].cols()) = mps.site[i][s];
      out.site[i][s] = std::move(padded);
    }
  }
  return out;
}

Mps statevector_to_mps(const VectorXcd &psi, int chi_max,
                       std::vector<double> *discarded_weight) {
  if (chi_max < 1) throw ShapeError("chi_max must be >= 1");
  const auto dim = psi.size();
  if (dim < 2 || (dim & (dim - 1)) != 0)
    throw ShapeError("statevector length must be a power of two >= 2");
  int V = 0;
  while ((1LL << V) < dim) ++V;
  if (V > 20) throw ShapeError("statevector factorization limited to 20 sites");
  if (psi.norm() == 0.0) throw NumericalError("statevector is identically zero");

  if (discarded_weight) discarded_weight->assign(V - 1, 0.0);

  Mps mps;
  mps.site.resize(V);

  // carry(s_i, rest): column index runs over sigma_i (fast) and later spins
  MatrixXcd carry = psi.transpose();  // 1 x 2^V
  for (int i = 0; i + 1 < V; ++i) {
    const int chi_in = static_cast<int>(carry.rows());
    const auto cols = carry.cols() / 2;
    // rows become (s_i, sigma_i), sigma the slow index
    Eigen::Map<const MatrixXcd> folded(carry.data(), 2 * chi_in, cols);

    Eigen::BDCSVD<MatrixXcd> svd(folded, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const int avail = static_cast<int>(svd.singularValues().size());
    const int keep = std::min(chi_max, avail);
    if (discarded_weight)
      for (int k = keep; k < avail; ++k)
        (*discarded_weight)[i] += svd.singularValues()(k) * svd.singularValues()(k);

    for (int s = 0; s < 2; ++s)
      mps.site[i][s] = svd.matrixU().block(s * chi_in, 0, chi_in, keep).transpose();
    carry = svd.singularValues().head(keep).asDiagonal() *
            svd.matrixV().leftCols(keep).adjoint();
  }

  // last site: trivial top bond, no truncation possible
  for (int s = 0; s < 2; ++s) mps.site[V - 1][s] = carry.col(s).transpose();
  return mps;
}

}  // namespace mpsrnn
