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

#include "mpsrnn/gradient.hpp"

#include <type_traits>

#include "mpsrnn/engine.hpp"
#include "mpsrnn/errors.hpp"

namespace mpsrnn {

namespace {

enum class Blk { M, Gamma, Mx, My, T, K, Uo, Ux, Uy, V, LogEta, W, C };

// Single source of truth for the flat ordering. f(blk, site, spin, array)
// receives MatrixXcd&, VectorXcd&, VectorXd& or Complex& (const-qualified
// to match P).
template <typename P, typename F>
void walk_params(P &p, F &&f) {
  const bool phase = p.phase_enabled;
  for (int i = 0; i < p.num_sites; ++i) {
    switch (p.variant) {
      case Variant::Vanilla:
        f(Blk::M, i, 0, p.M[i][0]);
        f(Blk::M, i, 1, p.M[i][1]);
        f(Blk::Gamma, i, 0, p.gamma[i]);
        continue;  // vanilla has no bias/readout tail
      case Variant::OneD:
        f(Blk::M, i, 0, p.M[i][0]);
        f(Blk::M, i, 1, p.M[i][1]);
        break;
      case Variant::TwoD:
        break;
      case Variant::Tensor:
        f(Blk::T, i, 0, p.T[i][0]);
        f(Blk::T, i, 1, p.T[i][1]);
        break;
      case Variant::CompressedTensor:
        f(Blk::K, i, 0, p.K[i][0]);
        f(Blk::K, i, 1, p.K[i][1]);
        f(Blk::Uo, i, 0, p.Uo[i][0]);
        f(Blk::Uo, i, 1, p.Uo[i][1]);
        f(Blk::Ux, i, 0, p.Ux[i][0]);
        f(Blk::Ux, i, 1, p.Ux[i][1]);
        f(Blk::Uy, i, 0, p.Uy[i][0]);
        f(Blk::Uy, i, 1, p.Uy[i][1]);
        break;
    }
    if (p.is_two_dimensional()) {
      f(Blk::Mx, i, 0, p.Mx[i][0]);
      f(Blk::Mx, i, 1, p.Mx[i][1]);
      f(Blk::My, i, 0, p.My[i][0]);
      f(Blk::My, i, 1, p.My[i][1]);
    }
    f(Blk::V, i, 0, p.v[i][0]);
    f(Blk::V, i, 1, p.v[i][1]);
    f(Blk::LogEta, i, 0, p.log_eta[i]);
    if (phase) {
      f(Blk::W, i, 0, p.w[i][0]);
      f(Blk::W, i, 1, p.w[i][1]);
      f(Blk::C, i, 0, p.c[i][0]);
      f(Blk::C, i, 1, p.c[i][1]);
    }
  }
}

}  // namespace

ParamLayout::ParamLayout(const RnnParams &params) {
  const int n = params.num_sites;
  phase_ = params.phase_enabled;
  auto init = [n](std::vector<long> &offs, int per_site) { offs.assign(per_site * n, -1); };
  init(m_, 2);
  init(gamma_, 1);
  init(mx_, 2);
  init(my_, 2);
  init(t_, 2);
  init(k_, 2);
  init(uo_, 2);
  init(ux_, 2);
  init(uy_, 2);
  init(v_, 2);
  init(log_eta_, 1);
  init(w_, 2);
  init(c_, 2);

  walk_params(params, [this](Blk blk, int site, int spin, const auto &array) {
    long offset = size_;
    switch (blk) {
      case Blk::M: m_[2 * site + spin] = offset; break;
      case Blk::Gamma: gamma_[site] = offset; break;
      case Blk::Mx: mx_[2 * site + spin] = offset; break;
      case Blk::My: my_[2 * site + spin] = offset; break;
      case Blk::T: t_[2 * site + spin] = offset; break;
      case Blk::K: k_[2 * site + spin] = offset; break;
      case Blk::Uo: uo_[2 * site + spin] = offset; break;
      case Blk::Ux: ux_[2 * site + spin] = offset; break;
      case Blk::Uy: uy_[2 * site + spin] = offset; break;
      case Blk::V: v_[2 * site + spin] = offset; break;
      case Blk::LogEta: log_eta_[site] = offset; break;
      case Blk::W: w_[2 * site + spin] = offset; break;
      case Blk::C: c_[2 * site + spin] = offset; break;
    }
    if constexpr (std::is_same_v<std::decay_t<decltype(array)>, Complex>)
      size_ += 2;
    else if constexpr (std::is_same_v<std::decay_t<decltype(*array.data())>, Complex>)
      size_ += 2 * array.size();
    else
      size_ += array.size();
  });
}

VectorXd ParamLayout::pack(const RnnParams &params) const {
  VectorXd flat(size_);
  long pos = 0;
  walk_params(params, [&](Blk, int, int, const auto &array) {
    if constexpr (std::is_same_v<std::decay_t<decltype(array)>, Complex>) {
      flat(pos++) = array.real();
      flat(pos++) = array.imag();
    } else if constexpr (std::is_same_v<std::decay_t<decltype(*array.data())>, Complex>) {
      for (long k = 0; k < static_cast<long>(array.size()); ++k) {
        flat(pos++) = array.data()[k].real();
        flat(pos++) = array.data()[k].imag();
      }
    } else {
      for (long k = 0; k < static_cast<long>(array.size()); ++k) flat(pos++) = array.data()[k];
    }
  });
  if (pos != size_) throw ShapeError("layout mismatch in pack");
  return flat;
}

void ParamLayout::unpack(const VectorXd &flat, RnnParams &params) const {
  if (flat.size() != size_) throw ShapeError("flat vector has wrong length");
  long pos = 0;
  walk_params(params, [&](Blk, int, int, auto &array) {
    if constexpr (std::is_same_v<std::decay_t<decltype(array)>, Complex>) {
      array = Complex(flat(pos), flat(pos + 1));
      pos += 2;
    } else if constexpr (std::is_same_v<std::decay_t<decltype(*array.data())>, Complex>) {
      for (long k = 0; k < static_cast<long>(array.size()); ++k) {
        array.data()[k] = Complex(flat(pos), flat(pos + 1));
        pos += 2;
      }
    } else {
      for (long k = 0; k < static_cast<long>(array.size()); ++k) array.data()[k] = flat(pos++);
    }
  });
  if (pos != size_) throw ShapeError("layout mismatch in unpack");
}

VectorXcd log_derivatives(const RnnParams &params, const Lattice &lattice,
                          const SpinConfig &sigma) {
  Engine engine(params, lattice);
  ParamLayout layout(params);

  SpinMatrix configs(params.num_sites, 1);
  for (int i = 0; i < params.num_sites; ++i) configs(i, 0) = sigma[i];
  Engine::Forward fwd = engine.forward(configs, true);
  if (std::isinf(fwd.log_abs(0)))
    throw NumericalError("log_derivatives: psi(sigma) = 0");

  VectorXd one = VectorXd::Ones(1), zero = VectorXd::Zero(1);
  VectorXd g_abs = VectorXd::Zero(layout.size());
  VectorXd g_phase = VectorXd::Zero(layout.size());
  engine.backward(fwd, one, zero, layout, g_abs);
  engine.backward(fwd, zero, one, layout, g_phase);

  VectorXcd out(layout.size());
  out.real() = g_abs;
  out.imag() = g_phase;
  return out;
}

}  // namespace mpsrnn
