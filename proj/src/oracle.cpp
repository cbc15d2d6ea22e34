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

#include "mpsrnn/oracle.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "mpsrnn/engine.hpp"
#include "mpsrnn/errors.hpp"
#include "mpsrnn/rng.hpp"

namespace mpsrnn {

namespace {

long checked_dim(int num_sites, int max_sites) {
  if (num_sites < 1 || num_sites > max_sites)
    throw ShapeError("system size outside the supported oracle range");
  return 1L << num_sites;
}

// real symmetric matvec in the z-basis (all our terms are real)
void apply_real(const Hamiltonian &h, const VectorXd &x, VectorXd &y) {
  const long dim = x.size();
  y.setZero();
  for (const auto &term : h.terms) {
    switch (term.kind) {
      case TermKind::HeisenbergBond: {
        const std::uint64_t mi = 1ULL << term.site_i, mj = 1ULL << term.site_j;
        const double off = 0.5 * term.coeff * (term.marshall_flip ? -1.0 : 1.0);
        for (long n = 0; n < dim; ++n) {
          const bool bi = n & mi, bj = n & mj;
          if (bi == bj) {
            y(n) += 0.25 * term.coeff * x(n);
          } else {
            y(n) -= 0.25 * term.coeff * x(n);
            y(n ^ (mi | mj)) += off * x(n);
          }
        }
        break;
      }
      case TermKind::ZzBond: {
        const std::uint64_t mi = 1ULL << term.site_i, mj = 1ULL << term.site_j;
        for (long n = 0; n < dim; ++n) {
          const bool bi = n & mi, bj = n & mj;
          y(n) += (bi == bj ? term.coeff : -term.coeff) * x(n);
        }
        break;
      }
      case TermKind::XField: {
        const std::uint64_t mi = 1ULL << term.site_i;
        for (long n = 0; n < dim; ++n) y(n ^ mi) += term.coeff * x(n);
        break;
      }
    }
  }
}

std::pair<double, VectorXd> lanczos_ground(const Hamiltonian &h, long dim, double tol) {
  const int max_basis = 80;
  const int max_restarts = 60;

  VectorXd v(dim);
  for (long n = 0; n < dim; ++n) v(n) = counter_uniform(0x5eedULL, 7, n) - 0.5;
  v.normalize();

  VectorXd hv(dim), ritz(dim);
  std::vector<VectorXd> basis;
  double theta = 0;

  for (int restart = 0; restart < max_restarts; ++restart) {
    basis.clear();
    basis.push_back(v);
    std::vector<double> alpha, beta;
    for (int j = 0; j < max_basis; ++j) {
      apply_real(h, basis[j], hv);
      double a = basis[j].dot(hv);
      alpha.push_back(a);
      hv -= a * basis[j];
      if (j > 0) hv -= beta[j - 1] * basis[j - 1];
      // full reorthogonalization keeps the basis clean at this scale
      for (const auto &u : basis) hv -= u.dot(hv) * u;
      double b = hv.norm();
      if (b < 1e-13) break;
      beta.push_back(b);
      basis.push_back(hv / b);
    }

    const int m = static_cast<int>(alpha.size());
    MatrixXd tri = MatrixXd::Zero(m, m);
    for (int j = 0; j < m; ++j) {
      tri(j, j) = alpha[j];
      if (j + 1 < m) tri(j, j + 1) = tri(j + 1, j) = beta[j];
    }
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(tri);
    theta = es.eigenvalues()(0);
    ritz.setZero();
    for (int j = 0; j < m; ++j) ritz += es.eigenvectors()(j, 0) * basis[j];
    ritz.normalize();

    apply_real(h, ritz, hv);
    const double residual = (hv - theta * ritz).norm();
    if (residual <= tol) return {theta, ritz};
    v = ritz;
  }
  throw NumericalError("Lanczos did not converge to the requested residual");
}

}  // namespace

VectorXcd enumerate_wavefunction(const RnnParams &params, const Lattice &lattice) {
  const long dim = checked_dim(params.num_sites, 20);
  Engine engine(params, lattice);
  const int V = params.num_sites;

  VectorXcd psi(dim);
  constexpr long kChunk = 4096;
  SpinMatrix configs(V, std::min(kChunk, dim));
  for (long first = 0; first < dim; first += kChunk) {
    const long count = std::min(kChunk, dim - first);
    configs.resize(V, count);
    for (long k = 0; k < count; ++k)
      for (int i = 0; i < V; ++i) configs(i, k) = ((first + k) >> i) & 1;
    Engine::Forward fwd = engine.forward(configs, false);
    for (long k = 0; k < count; ++k) {
      if (std::isinf(fwd.log_abs(k)))
        psi(first + k) = Complex(0, 0);
      else
        psi(first + k) = std::exp(fwd.log_abs(k)) *
                         Complex(std::cos(fwd.phase(k)), std::sin(fwd.phase(k)));
    }
  }
  return psi;
}

VectorXcd apply_hamiltonian(const Hamiltonian &h, const VectorXcd &psi) {
  checked_dim(h.num_sites, 24);
  if (psi.size() != (1L << h.num_sites))
    throw ShapeError("apply_hamiltonian: statevector length mismatch");
  VectorXd re = psi.real(), im = psi.imag(), out_re(psi.size()), out_im(psi.size());
  apply_real(h, re, out_re);
  apply_real(h, im, out_im);
  VectorXcd out(psi.size());
  out.real() = out_re;
  out.imag() = out_im;
  return out;
}

double expectation_value(const Hamiltonian &h, const VectorXcd &psi) {
  const double nrm2 = psi.squaredNorm();
  if (nrm2 == 0.0) throw NumericalError("expectation_value: zero state");
  VectorXcd hpsi = apply_hamiltonian(h, psi);
  return psi.dot(hpsi).real() / nrm2;
}

std::pair<double, VectorXcd> exact_ground_state(const Hamiltonian &h, int num_sites,
                                                double tol) {
  const long dim = checked_dim(num_sites, 24);
  if (h.num_sites != num_sites) throw ShapeError("exact_ground_state: size mismatch");

  VectorXd ground;
  double energy;
  if (dim <= (1L << 12)) {
    MatrixXd dense = MatrixXd::Zero(dim, dim);
    VectorXd unit = VectorXd::Zero(dim), col(dim);
    for (long n = 0; n < dim; ++n) {
      unit(n) = 1.0;
      apply_real(h, unit, col);
      dense.col(n) = col;
      unit(n) = 0.0;
    }
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(dense);
    energy = es.eigenvalues()(0);
    ground = es.eigenvectors().col(0);
  } else {
    auto [e, v] = lanczos_ground(h, dim, tol);
    energy = e;
    ground = std::move(v);
  }

  VectorXcd psi(dim);
  psi.real() = ground;
  psi.imag().setZero();
  return {energy, psi};
}

double cut_entropy(const VectorXcd &psi, const std::vector<int> &region, int num_sites) {
  const long dim = checked_dim(num_sites, 20);
  if (psi.size() != dim) throw ShapeError("cut_entropy: statevector length mismatch");
  if (region.empty() || static_cast<int>(region.size()) >= num_sites)
    throw ShapeError("cut_entropy: region must be a nonempty proper subset");

  std::vector<char> in_region(num_sites, 0);
  for (int s : region) {
    if (s < 0 || s >= num_sites || in_region[s])
      throw ShapeError("cut_entropy: invalid or duplicate site in region");
    in_region[s] = 1;
  }
  // entropy is symmetric under complementation for pure states
  if (2 * static_cast<int>(region.size()) > num_sites)
    for (int s = 0; s < num_sites; ++s) in_region[s] ^= 1;

  std::vector<int> a_sites, b_sites;
  for (int s = 0; s < num_sites; ++s) (in_region[s] ? a_sites : b_sites).push_back(s);
  if (a_sites.size() > 13) throw ShapeError("cut_entropy: region too large");

  const long dim_a = 1L << a_sites.size();
  const long dim_b = 1L << b_sites.size();
  MatrixXcd m(dim_a, dim_b);
  for (long n = 0; n < dim; ++n) {
    long a = 0, b = 0;
    for (std::size_t k = 0; k < a_sites.size(); ++k)
      if ((n >> a_sites[k]) & 1) a |= 1L << k;
    for (std::size_t k = 0; k < b_sites.size(); ++k)
      if ((n >> b_sites[k]) & 1) b |= 1L << k;
    m(a, b) = psi(n);
  }
  m /= psi.norm();

  MatrixXcd rho = m * m.adjoint();
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
  double entropy = 0;
  for (long k = 0; k < es.eigenvalues().size(); ++k) {
    const double lambda = es.eigenvalues()(k);
    if (lambda > 1e-15) entropy -= lambda * std::log(lambda);
  }
  return entropy;
}

double sampler_total_variation(const SampleBatch &batch, const VectorXcd &psi) {
  const long dim = psi.size();
  if (dim == 0 || (dim & (dim - 1)) != 0) throw ShapeError("statevector length not a power of 2");
  VectorXd counts = VectorXd::Zero(dim);
  for (const auto &sigma : batch.configs) {
    const std::uint64_t n = config_to_bits(sigma);
    if (n >= static_cast<std::uint64_t>(dim))
      throw ShapeError("sample configuration outside the statevector space");
    counts(n) += 1.0;
  }
  counts /= static_cast<double>(batch.size());
  VectorXd probs = psi.cwiseAbs2();
  probs /= probs.sum();
  return 0.5 * (counts - probs).cwiseAbs().sum();
}

}  // namespace mpsrnn
