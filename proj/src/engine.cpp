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

#include "mpsrnn/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mpsrnn/errors.hpp"
#include "mpsrnn/rng.hpp"

namespace mpsrnn {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// adjoint of phi = arg(z): d/dRe + i d/dIm = i z / |z|^2
inline Complex arg_adjoint(Complex z) {
  double a2 = std::norm(z);
  if (a2 == 0.0) return {0, 0};
  return Complex(0, 1) * z / a2;
}

void add_complex_block(VectorXd &grad, long offset, const MatrixXcd &g) {
  const Complex *data = g.data();
  for (long k = 0; k < g.size(); ++k) {
    grad(offset + 2 * k) += data[k].real();
    grad(offset + 2 * k + 1) += data[k].imag();
  }
}

void add_complex_block(VectorXd &grad, long offset, const VectorXcd &g) {
  for (long k = 0; k < g.size(); ++k) {
    grad(offset + 2 * k) += g(k).real();
    grad(offset + 2 * k + 1) += g(k).imag();
  }
}

}  // namespace

Engine::Engine(const RnnParams &params, const Lattice &lattice)
    : params_(&params), lattice_(&lattice) {
  if (lattice.num_sites() != params.num_sites)
    throw ShapeError("engine: lattice size does not match parameters");
  params.validate();

  const int V = params.num_sites;
  plan_.resize(V);
  if (params.is_two_dimensional()) {
    if (lattice.num_rows() < 2)
      throw ShapeError("engine: 2D ansatz needs a two-dimensional lattice");
    for (int i = 0; i < V; ++i) {
      auto [x, y] = lattice.site_coords(i);
      auto [hx, hy] = lattice.predecessors(x, y);
      plan_[i] = {hx, hy, false};
    }
  } else {
    for (int i = 0; i < V; ++i)
      plan_[i] = {lattice.snake_predecessor(i), PredRef::zero(), true};
  }

  if (params.variant != Variant::Vanilla) {
    eta_.resize(V);
    for (int i = 0; i < V; ++i) eta_[i] = params.eta(i);
  }
}

Engine::Forward Engine::forward(const SpinMatrix &configs, bool keep_internals) const {
  if (configs.rows() != params_->num_sites)
    throw ShapeError("engine: configuration matrix has wrong number of rows");
  Forward fwd;
  fwd.spins = configs;
  fwd.has_internals = keep_internals;
  run_sites(fwd, false, 0, 0);
  return fwd;
}

Engine::Forward Engine::sample_forward(long num_samples, std::uint64_t seed,
                                       std::uint64_t first_index) const {
  Forward fwd;
  fwd.spins.resize(params_->num_sites, num_samples);
  fwd.has_internals = true;
  run_sites(fwd, true, seed, first_index);
  return fwd;
}

void Engine::run_sites(Forward &fwd, bool sampling, std::uint64_t seed,
                       std::uint64_t first_index) const {
  const int V = params_->num_sites;
  const int chi = params_->chi;
  const long B = fwd.spins.cols();
  const bool vanilla = params_->variant == Variant::Vanilla;
  const bool tensor = params_->variant == Variant::Tensor;
  const bool compressed = params_->variant == Variant::CompressedTensor;
  const bool phase = params_->phase_enabled && !vanilla;

  const MatrixXcd ones_mat = MatrixXcd::Ones(chi, B);
  const MatrixXcd zero_mat = MatrixXcd::Zero(chi, B);
  auto source = [&](const PredRef &ref) -> const MatrixXcd & {
    if (ref.is_site()) return fwd.h_out[ref.site];
    return ref.tag == PredRef::Tag::Ones ? ones_mat : zero_mat;
  };

  fwd.cond = MatrixXd::Ones(V, B);
  fwd.phi = MatrixXd::Zero(V, B);
  fwd.h_out.assign(V, MatrixXcd());
  if (fwd.has_internals) {
    fwd.h_tilde.assign(V, {});
    fwd.q = {MatrixXd::Zero(V, B), MatrixXd::Zero(V, B)};
    fwd.norm = MatrixXd::Zero(V, B);
    fwd.z = MatrixXcd::Zero(V, B);
    if (tensor) fwd.kron.assign(V, MatrixXcd());
    if (compressed) {
      fwd.px.assign(V, {});
      fwd.py.assign(V, {});
      fwd.core.assign(V, {});
    }
  }

  VectorXd sum_log_p = VectorXd::Zero(B);
  VectorXd phase_acc = VectorXd::Zero(B);
  std::vector<char> alive(B, 1), frozen(B, 0);

  std::array<MatrixXcd, 2> ht;
  std::array<VectorXd, 2> q;
  MatrixXcd kron, gamma_h;
  std::array<MatrixXcd, 2> px, py, core;

  for (int i = 0; i < V; ++i) {
    const MatrixXcd &hx = source(plan_[i].hx);
    const MatrixXcd &hy = source(plan_[i].hy);

    if (tensor) {
      kron.resize(chi * chi, B);
      for (int t = 0; t < chi; ++t)
        for (int u = 0; u < chi; ++u)
          kron.row(t * chi + u) = hx.row(t).cwiseProduct(hy.row(u));
    }

    for (int s = 0; s < 2; ++s) {
      ht[s].resize(chi, B);
      if (vanilla || params_->variant == Variant::OneD) {
        ht[s].noalias() = params_->M[i][s] * hx;
        if (!vanilla) ht[s].colwise() += params_->v[i][s];
      } else {
        ht[s].noalias() = params_->Mx[i][s] * hx;
        ht[s].noalias() += params_->My[i][s] * hy;
        ht[s].colwise() += params_->v[i][s];
        if (tensor) {
          ht[s].noalias() += params_->T[i][s] * kron;
        } else if (compressed) {
          const int cc = params_->chi_core;
          px[s].resize(cc, B);
          py[s].resize(cc, B);
          core[s].resize(cc, B);
          px[s].noalias() = params_->Ux[i][s].transpose() * hx;
          py[s].noalias() = params_->Uy[i][s].transpose() * hy;
          MatrixXcd kr(cc * cc, B);
          for (int t = 0; t < cc; ++t)
            for (int u = 0; u < cc; ++u)
              kr.row(t * cc + u) = px[s].row(t).cwiseProduct(py[s].row(u));
          core[s].noalias() = params_->K[i][s] * kr;
          ht[s].noalias() += params_->Uo[i][s] * core[s];
        }
      }

      if (vanilla) {
        gamma_h.resize(chi, B);
        gamma_h.noalias() = params_->gamma[i] * ht[s];
        q[s] = ht[s].conjugate().cwiseProduct(gamma_h).colwise().sum().real().transpose();
      } else {
        q[s] = (eta_[i].asDiagonal() * ht[s].cwiseAbs2()).colwise().sum().transpose();
      }
    }

    // branch statistics, spin selection, normalization per column
    MatrixXcd &h_new = fwd.h_out[i];
    h_new.resize(chi, B);
    for (long b = 0; b < B; ++b) {
      if (frozen[b]) {
        h_new.col(b).setZero();
        continue;  // cond stays 1, phi stays 0
      }
      const double total = q[0](b) + q[1](b);
      if (total == 0.0) {
        if (alive[b])
          throw DegenerateStateError("zero conditional weight on both branches", i, b);
        frozen[b] = 1;
        h_new.col(b).setZero();
        continue;
      }

      int s;
      if (sampling) {
        const double p_up = q[0](b) / total;
        const double u = counter_uniform(seed, sample_stream(seed, first_index + b), i);
        s = (u < p_up) ? 0 : 1;
        fwd.spins(i, b) = static_cast<std::uint8_t>(s);
      } else {
        s = fwd.spins(i, b);
      }

      const double p = q[s](b) / total;
      fwd.cond(i, b) = p;
      if (p == 0.0) {
        alive[b] = 0;
        sum_log_p(b) = kNegInf;
      } else if (alive[b]) {
        sum_log_p(b) += std::log(p);
      }

      double n = vanilla ? ht[s].col(b).norm()
                         : std::sqrt(ht[0].col(b).squaredNorm() + ht[1].col(b).squaredNorm());
      if (fwd.has_internals) fwd.norm(i, b) = n;
      if (n > 0.0)
        h_new.col(b) = ht[s].col(b) / n;
      else
        h_new.col(b).setZero();

      if (phase) {
        Complex z = params_->w[i][s].transpose() * h_new.col(b);
        z += params_->c[i][s];
        if (fwd.has_internals) fwd.z(i, b) = z;
        const double ph = (z == Complex(0, 0)) ? 0.0 : std::arg(z);
        fwd.phi(i, b) = ph;
        phase_acc(b) += ph;
      }
    }

    if (fwd.has_internals) {
      fwd.h_tilde[i] = {std::move(ht[0]), std::move(ht[1])};
      fwd.q[0].row(i) = q[0].transpose();
      fwd.q[1].row(i) = q[1].transpose();
      if (tensor) fwd.kron[i] = std::move(kron);
      if (compressed) {
        fwd.px[i] = {std::move(px[0]), std::move(px[1])};
        fwd.py[i] = {std::move(py[0]), std::move(py[1])};
        fwd.core[i] = {std::move(core[0]), std::move(core[1])};
      }
    }
  }

  if (vanilla) {
    for (long b = 0; b < B; ++b) {
      if (frozen[b]) continue;
      Complex z = fwd.h_out[V - 1].col(b).sum();
      if (fwd.has_internals) fwd.z(V - 1, b) = z;
      const double ph = (z == Complex(0, 0)) ? 0.0 : std::arg(z);
      fwd.phi(V - 1, b) = ph;
      phase_acc(b) = ph;
    }
  }

  fwd.log_abs.resize(B);
  for (long b = 0; b < B; ++b)
    fwd.log_abs(b) = alive[b] ? 0.5 * sum_log_p(b) : kNegInf;
  fwd.phase = std::move(phase_acc);
}

void Engine::backward(const Forward &fwd, const VectorXd &seed_log_abs,
                      const VectorXd &seed_phase, const ParamLayout &layout,
                      VectorXd &grad) const {
  if (!fwd.has_internals) throw ShapeError("backward needs a taped forward pass");
  const int V = params_->num_sites;
  const int chi = params_->chi;
  const long B = fwd.spins.cols();
  if (seed_log_abs.size() != B || seed_phase.size() != B)
    throw ShapeError("backward: seed length mismatch");
  if (grad.size() != layout.size()) throw ShapeError("backward: gradient length mismatch");

  const bool vanilla = params_->variant == Variant::Vanilla;
  const bool one_d = params_->variant == Variant::OneD;
  const bool tensor = params_->variant == Variant::Tensor;
  const bool compressed = params_->variant == Variant::CompressedTensor;
  const bool phase = params_->phase_enabled && !vanilla;

  const MatrixXcd ones_mat = MatrixXcd::Ones(chi, B);
  const MatrixXcd zero_mat = MatrixXcd::Zero(chi, B);
  auto source = [&](const PredRef &ref) -> const MatrixXcd & {
    if (ref.is_site()) return fwd.h_out[ref.site];
    return ref.tag == PredRef::Tag::Ones ? ones_mat : zero_mat;
  };

  // cotangents of h_out per site
  std::vector<MatrixXcd> g_out(V);
  auto g_at = [&](int site) -> MatrixXcd & {
    if (g_out[site].size() == 0) g_out[site] = MatrixXcd::Zero(chi, B);
    return g_out[site];
  };

  std::array<MatrixXcd, 2> gt;        // cotangents of h_tilde branches
  std::array<VectorXd, 2> gq;         // cotangents of q branches
  VectorXcd gz(B);                    // cotangent of phase readout z

  for (int i = V - 1; i >= 0; --i) {
    const auto &ht = fwd.h_tilde[i];
    MatrixXcd &gi = g_at(i);

    // local phase phi = arg(z), z = w^T h_out + c (or sum h_out for vanilla)
    if (phase || (vanilla && i == V - 1)) {
      gz.setZero();
      for (long b = 0; b < B; ++b) {
        if (seed_phase(b) != 0.0) gz(b) = seed_phase(b) * arg_adjoint(fwd.z(i, b));
      }
      if (vanilla) {
        gi.noalias() += VectorXcd::Ones(chi) * gz.transpose();
      } else {
        for (int s = 0; s < 2; ++s) {
          VectorXcd gz_s = gz;
          for (long b = 0; b < B; ++b)
            if (fwd.spins(i, b) != s) gz_s(b) = Complex(0, 0);
          if (gz_s.isZero(0)) continue;
          gi.noalias() += params_->w[i][s].conjugate() * gz_s.transpose();
          add_complex_block(grad, layout.offset_w(i, s),
                            VectorXcd(fwd.h_out[i].conjugate() * gz_s));
          VectorXcd gc(1);
          gc(0) = gz_s.sum();
          add_complex_block(grad, layout.offset_c(i, s), gc);
        }
      }
    }

    // conditional p = q_real / (q_up + q_down)
    gq[0] = VectorXd::Zero(B);
    gq[1] = VectorXd::Zero(B);
    for (long b = 0; b < B; ++b) {
      const double a = seed_log_abs(b);
      if (a == 0.0) continue;
      const double p = fwd.cond(i, b);
      if (p <= 0.0) continue;  // dead column, no contribution
      const double gp = 0.5 * a / p;
      const int s = fwd.spins(i, b);
      const double q_r = fwd.q[s](i, b), q_o = fwd.q[1 - s](i, b);
      const double inv_s2 = 1.0 / ((q_r + q_o) * (q_r + q_o));
      gq[s](b) += gp * q_o * inv_s2;
      gq[1 - s](b) -= gp * q_r * inv_s2;
    }

    // h_out = h_tilde[realized] / n and the norm contributions
    gt[0] = MatrixXcd::Zero(chi, B);
    gt[1] = MatrixXcd::Zero(chi, B);
    VectorXd gm = VectorXd::Zero(B);
    for (long b = 0; b < B; ++b) {
      const double n = fwd.norm(i, b);
      if (n == 0.0) continue;
      const int s = fwd.spins(i, b);
      gt[s].col(b) = gi.col(b) / n;
      const double gn =
          -(gi.col(b).cwiseProduct(ht[s].col(b).conjugate())).sum().real() / (n * n);
      gm(b) = gn / (2 * n);
    }
    if (vanilla) {
      for (long b = 0; b < B; ++b) {
        const int s = fwd.spins(i, b);
        if (gm(b) != 0.0) gt[s].col(b) += (2 * gm(b)) * ht[s].col(b);
      }
    } else {
      for (int s = 0; s < 2; ++s)
        gt[s].noalias() += ht[s] * (2.0 * gm).asDiagonal();
    }

    // q backward
    if (vanilla) {
      const MatrixXcd gamma_sym = params_->gamma[i] + params_->gamma[i].adjoint();
      MatrixXcd g_gamma = MatrixXcd::Zero(chi, chi);
      for (int s = 0; s < 2; ++s) {
        if (gq[s].isZero(0)) continue;
        MatrixXcd scaled = ht[s] * gq[s].asDiagonal();
        gt[s].noalias() += gamma_sym * scaled;
        g_gamma.noalias() += scaled * ht[s].adjoint();
      }
      add_complex_block(grad, layout.offset_gamma(i), g_gamma);
    } else {
      VectorXd g_log_eta = VectorXd::Zero(chi);
      for (int s = 0; s < 2; ++s) {
        if (gq[s].isZero(0)) continue;
        gt[s].noalias() += 2.0 * (eta_[i].asDiagonal() * (ht[s] * gq[s].asDiagonal()));
        g_log_eta.array() +=
            eta_[i].array() * (ht[s].cwiseAbs2() * gq[s]).array();
      }
      for (int k = 0; k < chi; ++k) grad(layout.offset_log_eta(i) + k) += g_log_eta(k);
    }

    // update rule backward
    const MatrixXcd &hx = source(plan_[i].hx);
    const MatrixXcd &hy = source(plan_[i].hy);
    MatrixXcd ghx = MatrixXcd::Zero(chi, B);
    MatrixXcd ghy;
    if (params_->is_two_dimensional()) ghy = MatrixXcd::Zero(chi, B);

    for (int s = 0; s < 2; ++s) {
      if (gt[s].isZero(0)) continue;
      if (vanilla || one_d) {
        add_complex_block(grad, layout.offset_M(i, s), MatrixXcd(gt[s] * hx.adjoint()));
        ghx.noalias() += params_->M[i][s].adjoint() * gt[s];
        if (one_d) add_complex_block(grad, layout.offset_v(i, s), VectorXcd(gt[s].rowwise().sum()));
        continue;
      }

      add_complex_block(grad, layout.offset_Mx(i, s), MatrixXcd(gt[s] * hx.adjoint()));
      add_complex_block(grad, layout.offset_My(i, s), MatrixXcd(gt[s] * hy.adjoint()));
      add_complex_block(grad, layout.offset_v(i, s), VectorXcd(gt[s].rowwise().sum()));
      ghx.noalias() += params_->Mx[i][s].adjoint() * gt[s];
      ghy.noalias() += params_->My[i][s].adjoint() * gt[s];

      if (tensor) {
        add_complex_block(grad, layout.offset_T(i, s),
                          MatrixXcd(gt[s] * fwd.kron[i].adjoint()));
        MatrixXcd gw = params_->T[i][s].adjoint() * gt[s];  // chi^2 x B
        for (int t = 0; t < chi; ++t)
          for (int u = 0; u < chi; ++u) {
            ghx.row(t) += gw.row(t * chi + u).cwiseProduct(hy.row(u).conjugate());
            ghy.row(u) += gw.row(t * chi + u).cwiseProduct(hx.row(t).conjugate());
          }
      } else if (compressed) {
        const int cc = params_->chi_core;
        const MatrixXcd &pxs = fwd.px[i][s];
        const MatrixXcd &pys = fwd.py[i][s];
        add_complex_block(grad, layout.offset_Uo(i, s),
                          MatrixXcd(gt[s] * fwd.core[i][s].adjoint()));
        MatrixXcd gcore = params_->Uo[i][s].adjoint() * gt[s];  // cc x B
        MatrixXcd kr(cc * cc, B);
        for (int t = 0; t < cc; ++t)
          for (int u = 0; u < cc; ++u)
            kr.row(t * cc + u) = pxs.row(t).cwiseProduct(pys.row(u));
        add_complex_block(grad, layout.offset_K(i, s), MatrixXcd(gcore * kr.adjoint()));
        MatrixXcd gwc = params_->K[i][s].adjoint() * gcore;  // cc^2 x B
        MatrixXcd gpx = MatrixXcd::Zero(cc, B), gpy = MatrixXcd::Zero(cc, B);
        for (int t = 0; t < cc; ++t)
          for (int u = 0; u < cc; ++u) {
            gpx.row(t) += gwc.row(t * cc + u).cwiseProduct(pys.row(u).conjugate());
            gpy.row(u) += gwc.row(t * cc + u).cwiseProduct(pxs.row(t).conjugate());
          }
        add_complex_block(grad, layout.offset_Ux(i, s),
                          MatrixXcd(hx.conjugate() * gpx.transpose()));
        add_complex_block(grad, layout.offset_Uy(i, s),
                          MatrixXcd(hy.conjugate() * gpy.transpose()));
        ghx.noalias() += params_->Ux[i][s].conjugate() * gpx;
        ghy.noalias() += params_->Uy[i][s].conjugate() * gpy;
      }
    }

    if (plan_[i].hx.is_site()) g_at(plan_[i].hx.site).noalias() += ghx;
    if (plan_[i].hy.is_site()) g_at(plan_[i].hy.site).noalias() += ghy;
    g_out[i].resize(0, 0);  // release
  }
}

void Engine::connected_forward(const Forward &parent, const std::vector<int> &parent_col,
                               const SpinMatrix &configs, const std::vector<int> &start_site,
                               VectorXd &out_log_abs, VectorXd &out_phase) const {
  if (!parent.has_internals)
    throw ShapeError("connected_forward needs a taped parent batch");
  const int V = params_->num_sites;
  const int chi = params_->chi;
  const long C = configs.cols();
  if (static_cast<long>(parent_col.size()) != C ||
      static_cast<long>(start_site.size()) != C || configs.rows() != V)
    throw ShapeError("connected_forward: inconsistent inputs");

  const bool vanilla = params_->variant == Variant::Vanilla;
  const bool tensor = params_->variant == Variant::Tensor;
  const bool compressed = params_->variant == Variant::CompressedTensor;
  const bool phase = params_->phase_enabled && !vanilla;

  // process columns in order of ascending start site
  std::vector<long> order(C);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](long a, long b) { return start_site[a] < start_site[b]; });

  // cumulative prefix sums of the parent logs
  const long PB = parent.spins.cols();
  MatrixXd cum_logp = MatrixXd::Zero(V, PB), cum_phi = MatrixXd::Zero(V, PB);
  for (int i = 0; i < V; ++i) {
    for (long b = 0; b < PB; ++b) {
      const double lp = std::log(parent.cond(i, b));
      cum_logp(i, b) = (i ? cum_logp(i - 1, b) : 0.0) + lp;
      cum_phi(i, b) = (i ? cum_phi(i - 1, b) : 0.0) + parent.phi(i, b);
    }
  }

  std::vector<MatrixXcd> hw(V);  // recomputed memories (sorted column order)
  VectorXd sum_log_p = VectorXd::Zero(C), phase_acc = VectorXd::Zero(C);
  std::vector<char> alive(C, 1), frozen(C, 0);
  for (long j = 0; j < C; ++j) {
    const long c = order[j];
    const int s0 = start_site[c];
    if (s0 > 0) {
      sum_log_p(j) = cum_logp(s0 - 1, parent_col[c]);
      phase_acc(j) = cum_phi(s0 - 1, parent_col[c]);
    }
  }

  MatrixXcd hx_g(chi, C), hy_g(chi, C), kron, gamma_h;
  std::array<MatrixXcd, 2> ht, px, py, core;
  std::array<VectorXd, 2> q;

  long active = 0;
  for (int i = 0; i < V; ++i) {
    while (active < C && start_site[order[active]] <= i) ++active;
    if (active == 0) continue;

    auto gather = [&](const PredRef &ref, MatrixXcd &dst) {
      if (ref.tag == PredRef::Tag::Ones) {
        dst.leftCols(active).setOnes();
        return;
      }
      if (ref.tag == PredRef::Tag::Zero) {
        dst.leftCols(active).setZero();
        return;
      }
      const int site = ref.site;
      for (long j = 0; j < active; ++j) {
        const long c = order[j];
        if (site >= start_site[c])
          dst.col(j) = hw[site].col(j);
        else
          dst.col(j) = parent.h_out[site].col(parent_col[c]);
      }
    };
    gather(plan_[i].hx, hx_g);
    if (params_->is_two_dimensional()) gather(plan_[i].hy, hy_g);

    auto hxa = hx_g.leftCols(active);
    auto hya = hy_g.leftCols(active);

    if (tensor) {
      kron.resize(chi * chi, active);
      for (int t = 0; t < chi; ++t)
        for (int u = 0; u < chi; ++u)
          kron.row(t * chi + u) = hxa.row(t).cwiseProduct(hya.row(u));
    }

    for (int s = 0; s < 2; ++s) {
      ht[s].resize(chi, active);
      if (vanilla || params_->variant == Variant::OneD) {
        ht[s].noalias() = params_->M[i][s] * hxa;
        if (!vanilla) ht[s].colwise() += params_->v[i][s];
      } else {
        ht[s].noalias() = params_->Mx[i][s] * hxa;
        ht[s].noalias() += params_->My[i][s] * hya;
        ht[s].colwise() += params_->v[i][s];
        if (tensor) {
          ht[s].noalias() += params_->T[i][s] * kron;
        } else if (compressed) {
          const int cc = params_->chi_core;
          px[s].resize(cc, active);
          py[s].resize(cc, active);
          core[s].resize(cc, active);
          px[s].noalias() = params_->Ux[i][s].transpose() * hxa;
          py[s].noalias() = params_->Uy[i][s].transpose() * hya;
          MatrixXcd kr(cc * cc, active);
          for (int t = 0; t < cc; ++t)
            for (int u = 0; u < cc; ++u)
              kr.row(t * cc + u) = px[s].row(t).cwiseProduct(py[s].row(u));
          core[s].noalias() = params_->K[i][s] * kr;
          ht[s].noalias() += params_->Uo[i][s] * core[s];
        }
      }
      if (vanilla) {
        gamma_h.resize(chi, active);
        gamma_h.noalias() = params_->gamma[i] * ht[s];
        q[s] = ht[s].conjugate().cwiseProduct(gamma_h).colwise().sum().real().transpose();
      } else {
        q[s] = (eta_[i].asDiagonal() * ht[s].cwiseAbs2()).colwise().sum().transpose();
      }
    }

    hw[i].resize(chi, C);
    for (long j = 0; j < active; ++j) {
      const long c = order[j];
      if (frozen[j]) {
        hw[i].col(j).setZero();
        continue;
      }
      const double total = q[0](j) + q[1](j);
      if (total == 0.0) {
        if (alive[j])
          throw DegenerateStateError("zero conditional weight on both branches", i, c);
        frozen[j] = 1;
        hw[i].col(j).setZero();
        continue;
      }
      const int s = configs(i, c);
      const double p = q[s](j) / total;
      if (p == 0.0) {
        alive[j] = 0;
        sum_log_p(j) = kNegInf;
      } else if (alive[j]) {
        sum_log_p(j) += std::log(p);
      }

      const double n = vanilla
                           ? ht[s].col(j).norm()
                           : std::sqrt(ht[0].col(j).squaredNorm() + ht[1].col(j).squaredNorm());
      if (n > 0.0)
        hw[i].col(j) = ht[s].col(j) / n;
      else
        hw[i].col(j).setZero();

      if (phase) {
        Complex z = params_->w[i][s].transpose() * hw[i].col(j);
        z += params_->c[i][s];
        phase_acc(j) += (z == Complex(0, 0)) ? 0.0 : std::arg(z);
      }
    }
  }

  if (vanilla) {
    for (long j = 0; j < C; ++j) {
      if (frozen[j]) continue;
      Complex z = hw[V - 1].col(j).sum();
      phase_acc(j) = (z == Complex(0, 0)) ? 0.0 : std::arg(z);
    }
  }

  out_log_abs.resize(C);
  out_phase.resize(C);
  for (long j = 0; j < C; ++j) {
    const long c = order[j];
    out_log_abs(c) = alive[j] ? 0.5 * sum_log_p(j) : kNegInf;
    out_phase(c) = phase_acc(j);
  }
}

}  // namespace mpsrnn
