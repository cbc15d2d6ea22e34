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

#include "mpsrnn/params.hpp"

#include <Eigen/Eigenvalues>

#include "mpsrnn/errors.hpp"

namespace mpsrnn {

std::string to_string(Variant v) {
  switch (v) {
    case Variant::Vanilla:
      return "vanilla";
    case Variant::OneD:
      return "1d";
    case Variant::TwoD:
      return "2d";
    case Variant::Tensor:
      return "tensor";
    case Variant::CompressedTensor:
      return "compressed";
  }
  return "?";
}

Variant variant_from_string(const std::string &name) {
  if (name == "vanilla") return Variant::Vanilla;
  if (name == "1d" || name == "oned") return Variant::OneD;
  if (name == "2d" || name == "twod") return Variant::TwoD;
  if (name == "tensor") return Variant::Tensor;
  if (name == "compressed" || name == "compressed-tensor") return Variant::CompressedTensor;
  throw ConfigError("unknown ansatz variant: " + name);
}

int tucker_core_dim(int chi) {
  if (chi < 1) throw ShapeError("chi must be >= 1");
  long long target = static_cast<long long>(chi) * chi;
  int k = 1;
  while (static_cast<long long>(k) * k * k < target) ++k;
  return k;
}

RnnParams RnnParams::make(Variant variant, int num_sites, int chi) {
  if (num_sites < 1) throw ShapeError("num_sites must be >= 1");
  if (chi < 1) throw ShapeError("chi must be >= 1");

  RnnParams p;
  p.variant = variant;
  p.num_sites = num_sites;
  p.chi = chi;
  p.phase_enabled = (variant != Variant::Vanilla);

  auto zero_mats = [&](int rows, int cols) {
    return std::vector<std::array<MatrixXcd, 2>>(
        num_sites, {MatrixXcd::Zero(rows, cols), MatrixXcd::Zero(rows, cols)});
  };
  auto zero_vecs = [&](int n) {
    return std::vector<std::array<VectorXcd, 2>>(
        num_sites, {VectorXcd::Zero(n), VectorXcd::Zero(n)});
  };

  switch (variant) {
    case Variant::Vanilla:
      p.M = zero_mats(chi, chi);
      p.gamma.assign(num_sites, MatrixXcd::Zero(chi, chi));
      break;
    case Variant::OneD:
      p.M = zero_mats(chi, chi);
      break;
    case Variant::TwoD:
      p.Mx = zero_mats(chi, chi);
      p.My = zero_mats(chi, chi);
      break;
    case Variant::Tensor:
      p.Mx = zero_mats(chi, chi);
      p.My = zero_mats(chi, chi);
      p.T = zero_mats(chi, chi * chi);
      break;
    case Variant::CompressedTensor: {
      p.chi_core = tucker_core_dim(chi);
      p.Mx = zero_mats(chi, chi);
      p.My = zero_mats(chi, chi);
      p.K = zero_mats(p.chi_core, p.chi_core * p.chi_core);
      MatrixXcd trunc_id = MatrixXcd::Identity(chi, p.chi_core);
      p.Uo.assign(num_sites, {trunc_id, trunc_id});
      p.Ux.assign(num_sites, {trunc_id, trunc_id});
      p.Uy.assign(num_sites, {trunc_id, trunc_id});
      break;
    }
  }

  if (variant != Variant::Vanilla) {
    p.v = zero_vecs(chi);
    p.log_eta.assign(num_sites, VectorXd::Zero(chi));
    p.w = zero_vecs(chi);
    p.c.assign(num_sites, {Complex(1.0, 0.0), Complex(1.0, 0.0)});
  }
  return p;
}

VectorXd RnnParams::eta(int site) const { return log_eta[site].array().exp(); }

namespace {

void check_site_mats(const std::vector<std::array<MatrixXcd, 2>> &mats, int num_sites,
                     int rows, int cols, const char *name) {
  if (static_cast<int>(mats.size()) != num_sites)
    throw ShapeError(std::string(name) + ": wrong site count");
  for (const auto &m : mats)
    for (int s = 0; s < 2; ++s)
      if (m[s].rows() != rows || m[s].cols() != cols)
        throw ShapeError(std::string(name) + ": wrong shape");
}

}  // namespace

void RnnParams::validate() const {
  if (num_sites < 1 || chi < 1) throw ShapeError("empty parameter set");

  switch (variant) {
    case Variant::Vanilla: {
      check_site_mats(M, num_sites, chi, chi, "M");
      if (static_cast<int>(gamma.size()) != num_sites)
        throw ShapeError("gamma: wrong site count");
      for (const auto &g : gamma) {
        if (g.rows() != chi || g.cols() != chi) throw ShapeError("gamma: wrong shape");
        double scale = g.cwiseAbs().maxCoeff();
        if ((g - g.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * std::max(scale, 1.0))
          throw NumericalError("gamma is not Hermitian");
        Eigen::SelfAdjointEigenSolver<MatrixXcd> es(g, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -1e-12 * std::max(scale, 1.0))
          throw NumericalError("gamma is not positive semidefinite");
      }
      return;
    }
    case Variant::OneD:
      check_site_mats(M, num_sites, chi, chi, "M");
      break;
    case Variant::TwoD:
      check_site_mats(Mx, num_sites, chi, chi, "Mx");
      check_site_mats(My, num_sites, chi, chi, "My");
      break;
    case Variant::Tensor:
      check_site_mats(Mx, num_sites, chi, chi, "Mx");
      check_site_mats(My, num_sites, chi, chi, "My");
      check_site_mats(T, num_sites, chi, chi * chi, "T");
      break;
    case Variant::CompressedTensor:
      if (chi_core != tucker_core_dim(chi))
        throw ShapeError("chi_core does not match ceil(chi^(2/3))");
      check_site_mats(Mx, num_sites, chi, chi, "Mx");
      check_site_mats(My, num_sites, chi, chi, "My");
      check_site_mats(K, num_sites, chi_core, chi_core * chi_core, "K");
      check_site_mats(Uo, num_sites, chi, chi_core, "Uo");
      check_site_mats(Ux, num_sites, chi, chi_core, "Ux");
      check_site_mats(Uy, num_sites, chi, chi_core, "Uy");
      break;
  }

  if (static_cast<int>(v.size()) != num_sites || static_cast<int>(log_eta.size()) != num_sites ||
      static_cast<int>(w.size()) != num_sites || static_cast<int>(c.size()) != num_sites)
    throw ShapeError("per-site vector arrays: wrong site count");
  for (int i = 0; i < num_sites; ++i) {
    if (log_eta[i].size() != chi) throw ShapeError("log_eta: wrong length");
    for (int s = 0; s < 2; ++s)
      if (v[i][s].size() != chi || w[i][s].size() != chi)
        throw ShapeError("v/w: wrong length");
  }
}

}  // namespace mpsrnn
