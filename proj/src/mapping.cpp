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

#include "mpsrnn/mapping.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

#include "mpsrnn/errors.hpp"
#include "mpsrnn/rng.hpp"

namespace mpsrnn {

namespace {

// eta eigenvalues are clamped here before the log so rank-deficient
// environments stay representable in the log parametrization
constexpr double kEtaFloor = 1e-30;

enum NoiseTag : std::uint64_t { kNoiseMx = 1, kNoiseMy = 2, kNoiseT = 3, kNoiseK = 4 };

std::uint64_t noise_stream(NoiseTag tag, int site, int spin) {
  return (static_cast<std::uint64_t>(tag) << 48) |
         (static_cast<std::uint64_t>(site) << 1) | static_cast<std::uint64_t>(spin);
}

void fill_gaussian(MatrixXcd &m, double std_dev, std::uint64_t seed, std::uint64_t stream) {
  if (std_dev == 0.0) {
    m.setZero();
    return;
  }
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      std::uint64_t k = 2 * static_cast<std::uint64_t>(i + m.rows() * j);
      m(i, j) = Complex(std_dev * counter_normal(seed, stream, k),
                        std_dev * counter_normal(seed, stream, k + 1));
    }
  }
}

void copy_readout(RnnParams &dst, const RnnParams &src) {
  dst.v = src.v;
  dst.log_eta = src.log_eta;
  dst.w = src.w;
  dst.c = src.c;
  dst.phase_enabled = src.phase_enabled;
}

}  // namespace

RnnParams mps_to_vanilla(const Mps &mps) {
  Mps uniform = pad_to_uniform(mps);
  const int V = uniform.num_sites();
  const int chi = uniform.bond_dim(0);

  RnnParams params = RnnParams::make(Variant::Vanilla, V, chi);
  params.M = uniform.site;
  params.gamma = gamma_from_mps(uniform);
  return params;
}

RnnParams gauge_absorb(const RnnParams &vanilla) {
  if (vanilla.variant != Variant::Vanilla)
    throw ShapeError("gauge_absorb expects a vanilla ansatz");
  const int V = vanilla.num_sites;
  const int chi = vanilla.chi;

  RnnParams out = RnnParams::make(Variant::OneD, V, chi);
  out.phase_enabled = true;

  // gamma^(i) = U^dag diag(eta) U with U = P^dag from the eigendecomposition
  MatrixXcd u_prev = MatrixXcd::Identity(chi, chi);
  for (int i = 0; i < V; ++i) {
    const MatrixXcd &g = vanilla.gamma[i];
    double scale = g.cwiseAbs().maxCoeff();
    if ((g - g.adjoint()).cwiseAbs().maxCoeff() > 1e-8 * std::max(scale, 1.0))
      throw NumericalError("gamma is not Hermitian at site " + std::to_string(i));
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(g);
    MatrixXcd u = es.eigenvectors().adjoint();

    for (int k = 0; k < chi; ++k)
      out.log_eta[i](k) = std::log(std::max(es.eigenvalues()(k), kEtaFloor));
    for (int s = 0; s < 2; ++s) out.M[i][s] = u * vanilla.M[i][s] * u_prev.adjoint();

    if (i == V - 1) {
      // keep the final-site readout: arg(ones^T h) = arg(conj(U 1)^T h')
      VectorXcd w_last = (u * VectorXcd::Ones(chi)).conjugate();
      out.w[i] = {w_last, w_last};
      out.c[i] = {Complex(0, 0), Complex(0, 0)};
    }
    u_prev = std::move(u);
  }
  return out;
}

RnnParams absorb_bias(const RnnParams &one_d) {
  if (one_d.variant != Variant::OneD) throw ShapeError("absorb_bias expects a 1D ansatz");
  const int V = one_d.num_sites;
  const int chi = one_d.chi;

  RnnParams out = RnnParams::make(Variant::OneD, V, chi + 1);
  out.phase_enabled = one_d.phase_enabled;
  for (int i = 0; i < V; ++i) {
    out.log_eta[i].head(chi) = one_d.log_eta[i];
    out.log_eta[i](chi) = std::log(kEtaFloor);  // auxiliary slot carries no weight
    for (int s = 0; s < 2; ++s) {
      MatrixXcd m = MatrixXcd::Zero(chi + 1, chi + 1);
      m.topLeftCorner(chi, chi) = one_d.M[i][s];
      m.col(chi).head(chi) = one_d.v[i][s];
      m(chi, chi) = 1.0;
      out.M[i][s] = std::move(m);
      out.w[i][s].head(chi) = one_d.w[i][s];
      out.w[i][s](chi) = one_d.c[i][s];
      out.c[i][s] = Complex(0, 0);
    }
  }
  return out;
}

RnnParams lift_1d_to_2d(const RnnParams &one_d, const Lattice &lattice,
                        double noise_std, std::uint64_t seed) {
  if (one_d.variant != Variant::OneD) throw ShapeError("lift_1d_to_2d expects a 1D ansatz");
  if (lattice.num_rows() < 2)
    throw ShapeError("lift_1d_to_2d needs a two-dimensional lattice");
  if (lattice.num_sites() != one_d.num_sites)
    throw ShapeError("lift_1d_to_2d: lattice size does not match parameters");

  RnnParams out = RnnParams::make(Variant::TwoD, one_d.num_sites, one_d.chi);
  copy_readout(out, one_d);
  for (int i = 0; i < one_d.num_sites; ++i) {
    const bool vertical = lattice.snake_step_is_vertical(i);
    for (int s = 0; s < 2; ++s) {
      auto &snake_mat = vertical ? out.My[i][s] : out.Mx[i][s];
      auto &other_mat = vertical ? out.Mx[i][s] : out.My[i][s];
      snake_mat = one_d.M[i][s];
      fill_gaussian(other_mat, noise_std, seed,
                    noise_stream(vertical ? kNoiseMx : kNoiseMy, i, s));
    }
  }
  return out;
}

RnnParams lift_2d_to_tensor(const RnnParams &two_d, double noise_std, std::uint64_t seed) {
  if (two_d.variant != Variant::TwoD) throw ShapeError("lift_2d_to_tensor expects a 2D ansatz");
  RnnParams out = RnnParams::make(Variant::Tensor, two_d.num_sites, two_d.chi);
  copy_readout(out, two_d);
  out.Mx = two_d.Mx;
  out.My = two_d.My;
  for (int i = 0; i < two_d.num_sites; ++i)
    for (int s = 0; s < 2; ++s)
      fill_gaussian(out.T[i][s], noise_std, seed, noise_stream(kNoiseT, i, s));
  return out;
}

RnnParams lift_2d_to_compressed(const RnnParams &two_d, double noise_std,
                                std::uint64_t seed) {
  if (two_d.variant != Variant::TwoD)
    throw ShapeError("lift_2d_to_compressed expects a 2D ansatz");
  RnnParams out = RnnParams::make(Variant::CompressedTensor, two_d.num_sites, two_d.chi);
  copy_readout(out, two_d);
  out.Mx = two_d.Mx;
  out.My = two_d.My;
  // Uo/Ux/Uy stay the truncated identities from make()
  for (int i = 0; i < two_d.num_sites; ++i)
    for (int s = 0; s < 2; ++s)
      fill_gaussian(out.K[i][s], noise_std, seed, noise_stream(kNoiseK, i, s));
  return out;
}

RnnParams simulate_2d_as_1d(const RnnParams &two_d, const Lattice &lattice) {
  if (two_d.variant != Variant::TwoD)
    throw ShapeError("simulate_2d_as_1d expects a 2D ansatz");
  if (lattice.num_rows() < 2 || lattice.num_sites() != two_d.num_sites)
    throw ShapeError("simulate_2d_as_1d: lattice does not match parameters");
  for (int i = 0; i < two_d.num_sites; ++i)
    for (int s = 0; s < 2; ++s)
      if (two_d.v[i][s].cwiseAbs().maxCoeff() != 0.0)
        throw ShapeError(
            "simulate_2d_as_1d requires v = 0 (run absorb_bias on the rows first)");

  const int L = lattice.L();
  const int chi = two_d.chi;
  const int big = L * chi;

  RnnParams out = RnnParams::make(Variant::OneD, two_d.num_sites, big);
  out.phase_enabled = two_d.phase_enabled;

  for (int i = 0; i < two_d.num_sites; ++i) {
    auto [x, y] = lattice.site_coords(i);
    auto [ph, pv] = lattice.predecessors(x, y);

    out.log_eta[i].setConstant(std::log(kEtaFloor));
    out.log_eta[i].segment(x * chi, chi) = two_d.log_eta[i];

    for (int s = 0; s < 2; ++s) {
      MatrixXcd m = MatrixXcd::Zero(big, big);
      for (int j = 0; j < L; ++j)
        if (j != x) m.block(j * chi, j * chi, chi, chi).setIdentity();
      if (pv.is_site()) m.block(x * chi, x * chi, chi, chi) = two_d.My[i][s];
      if (ph.is_site()) {
        auto [hx_col, hy_unused] = lattice.site_coords(ph.site);
        (void)hy_unused;
        m.block(x * chi, hx_col * chi, chi, chi) = two_d.Mx[i][s];
      } else if (ph.tag == PredRef::Tag::Ones) {
        // site (0,0): the horizontal input is the all-ones boundary, which
        // the concatenated chain provides in every block; read block 0
        m.block(0, 0, chi, chi) = two_d.Mx[i][s];
      }
      out.M[i][s] = std::move(m);

      out.w[i][s].segment(x * chi, chi) = two_d.w[i][s];
      out.c[i][s] = two_d.c[i][s];
    }
  }
  return out;
}

RnnParams tucker_compress(const RnnParams &tensor) {
  if (tensor.variant != Variant::Tensor) throw ShapeError("tucker_compress expects tensor-RNN");
  const int V = tensor.num_sites;
  const int chi = tensor.chi;

  RnnParams out = RnnParams::make(Variant::CompressedTensor, V, chi);
  const int chi_c = out.chi_core;
  copy_readout(out, tensor);
  out.Mx = tensor.Mx;
  out.My = tensor.My;

  MatrixXcd mode1(chi, chi * chi), mode2(chi, chi * chi);
  for (int i = 0; i < V; ++i) {
    for (int s = 0; s < 2; ++s) {
      const MatrixXcd &mode0 = tensor.T[i][s];  // (s; t,u) unfolding
      for (int a = 0; a < chi; ++a)
        for (int t = 0; t < chi; ++t)
          for (int u = 0; u < chi; ++u) {
            mode1(t, a * chi + u) = mode0(a, t * chi + u);
            mode2(u, a * chi + t) = mode0(a, t * chi + u);
          }

      Eigen::BDCSVD<MatrixXcd> svd0(mode0, Eigen::ComputeThinU);
      Eigen::BDCSVD<MatrixXcd> svd1(mode1, Eigen::ComputeThinU);
      Eigen::BDCSVD<MatrixXcd> svd2(mode2, Eigen::ComputeThinU);
      out.Uo[i][s] = svd0.matrixU().leftCols(chi_c);
      out.Ux[i][s] = svd1.matrixU().leftCols(chi_c);
      out.Uy[i][s] = svd2.matrixU().leftCols(chi_c);

      // core K = T x0 Uo^dag x1 Ux^dag x2 Uy^dag
      MatrixXcd b = out.Uo[i][s].adjoint() * mode0;  // (chi_c, chi^2)
      for (int a = 0; a < chi_c; ++a) {
        VectorXcd brow = b.row(a);
        Eigen::Map<const MatrixXcd> bs_ut(brow.data(), chi, chi);  // (u, t) view
        MatrixXcd ks = out.Ux[i][s].adjoint() * bs_ut.transpose() * out.Uy[i][s].conjugate();
        for (int t = 0; t < chi_c; ++t)
          for (int u = 0; u < chi_c; ++u) out.K[i][s](a, t * chi_c + u) = ks(t, u);
      }
    }
  }
  return out;
}

RnnParams tucker_expand(const RnnParams &compressed) {
  if (compressed.variant != Variant::CompressedTensor)
    throw ShapeError("tucker_expand expects compressed tensor-RNN");
  const int V = compressed.num_sites;
  const int chi = compressed.chi;
  const int chi_c = compressed.chi_core;

  RnnParams out = RnnParams::make(Variant::Tensor, V, chi);
  copy_readout(out, compressed);
  out.Mx = compressed.Mx;
  out.My = compressed.My;

  for (int i = 0; i < V; ++i) {
    for (int s = 0; s < 2; ++s) {
      for (int a = 0; a < chi_c; ++a) {
        VectorXcd krow = compressed.K[i][s].row(a);
        Eigen::Map<const MatrixXcd> ks_ut(krow.data(), chi_c, chi_c);
        // g(t, u) for core slice a; plain (unconjugated) factors as in the
        // reconstruction sum
        MatrixXcd g = compressed.Ux[i][s] * ks_ut.transpose() * compressed.Uy[i][s].transpose();
        for (int so = 0; so < chi; ++so) {
          Complex coeff = compressed.Uo[i][s](so, a);
          for (int t = 0; t < chi; ++t)
            for (int u = 0; u < chi; ++u)
              out.T[i][s](so, t * chi + u) += coeff * g(t, u);
        }
      }
    }
  }
  return out;
}

RnnParams build_area_law_params(int L) {
  if (L < 2 || L % 2 != 0) throw ConfigError("area-law construction requires even L >= 2");
  Lattice lattice(LatticeKind::Square, L);
  const int V = L * L;

  RnnParams p = RnnParams::make(Variant::Tensor, V, 2);
  p.phase_enabled = true;

  for (int i = 0; i < V; ++i) {
    auto [x, y] = lattice.site_coords(i);
    for (int s = 0; s < 2; ++s) {
      if (y == L - 1) {
        p.log_eta[i] = VectorXd::Zero(2);
        p.log_eta[i](1) = std::log(kEtaFloor);  // eta = (1, ~0): read slot 0
        if (x < L - 1) {
          p.T[i][s](0, 0 * 2 + s) = 1.0;  // delta(s_out,0) delta(t,0) delta(u,spin)
        } else {
          p.My[i][s](0, s) = 1.0;  // delta(s_out,0) delta(t,spin)
        }
      } else if (y == 0) {
        p.v[i][s](s) = 1.0;  // delta(s_out,spin)
      } else {
        p.My[i][s].setIdentity();
      }
      // local phases: trivial everywhere except a single readout at the
      // final site (0, L-1)
      if (x == 0 && y == L - 1) {
        p.w[i][s](0) = 1.0;
        p.c[i][s] = Complex(0, 0);
      }
    }
  }
  return p;
}

}  // namespace mpsrnn
