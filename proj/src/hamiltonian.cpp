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

#include "mpsrnn/hamiltonian.hpp"

#include <cmath>

#include "mpsrnn/errors.hpp"

namespace mpsrnn {

namespace {

bool sublattice_changes(const Lattice &lattice, int a, int b) {
  auto [xa, ya] = lattice.site_coords(a);
  auto [xb, yb] = lattice.site_coords(b);
  return ((xa + ya) & 1) != ((xb + yb) & 1);
}

}  // namespace

Hamiltonian build_afhm(const Lattice &lattice, bool marshall) {
  Hamiltonian h;
  h.num_sites = lattice.num_sites();
  h.marshall = marshall;
  for (auto [a, b] : lattice.edges()) {
    HamTerm term;
    term.kind = TermKind::HeisenbergBond;
    term.site_i = a;
    term.site_j = b;
    term.coeff = 1.0;
    term.marshall_flip = marshall && sublattice_changes(lattice, a, b);
    h.terms.push_back(term);
  }
  return h;
}

Hamiltonian build_tfim(const Lattice &lattice, double g) {
  Hamiltonian h;
  h.num_sites = lattice.num_sites();
  for (auto [a, b] : lattice.edges())
    h.terms.push_back({TermKind::ZzBond, a, b, -1.0, false});
  for (int i = 0; i < lattice.num_sites(); ++i)
    h.terms.push_back({TermKind::XField, i, -1, -g, false});
  return h;
}

std::vector<std::pair<SpinConfig, Complex>> connected_elements(const Hamiltonian &h,
                                                               const SpinConfig &sigma) {
  if (static_cast<int>(sigma.size()) != h.num_sites)
    throw ShapeError("connected_elements: configuration has wrong length");

  std::vector<std::pair<SpinConfig, Complex>> out;
  double diag = 0;
  out.emplace_back(sigma, Complex(0, 0));

  for (const auto &term : h.terms) {
    switch (term.kind) {
      case TermKind::HeisenbergBond: {
        const int zi = 1 - 2 * sigma[term.site_i];
        const int zj = 1 - 2 * sigma[term.site_j];
        diag += 0.25 * term.coeff * zi * zj;
        if (zi != zj) {
          SpinConfig flipped = sigma;
          flipped[term.site_i] ^= 1;
          flipped[term.site_j] ^= 1;
          double amp = 0.5 * term.coeff * (term.marshall_flip ? -1.0 : 1.0);
          out.emplace_back(std::move(flipped), Complex(amp, 0));
        }
        break;
      }
      case TermKind::ZzBond: {
        const int zi = 1 - 2 * sigma[term.site_i];
        const int zj = 1 - 2 * sigma[term.site_j];
        diag += term.coeff * zi * zj;
        break;
      }
      case TermKind::XField: {
        SpinConfig flipped = sigma;
        flipped[term.site_i] ^= 1;
        out.emplace_back(std::move(flipped), Complex(term.coeff, 0));
        break;
      }
    }
  }
  out[0].second = Complex(diag, 0);
  return out;
}

Complex local_energy(const RnnParams &params, const Lattice &lattice,
                     const Hamiltonian &h, const SpinConfig &sigma) {
  AmplitudeTrace ref = evaluate_amplitude(params, lattice, sigma);
  if (std::isinf(ref.log_abs)) throw NumericalError("local_energy: psi(sigma) = 0");

  auto elements = connected_elements(h, sigma);
  Complex e = elements[0].second;  // diagonal, ratio 1
  for (std::size_t k = 1; k < elements.size(); ++k) {
    AmplitudeTrace t = evaluate_amplitude(params, lattice, elements[k].first);
    if (std::isinf(t.log_abs)) continue;  // psi(sigma') = 0 contributes nothing
    double ratio = std::exp(t.log_abs - ref.log_abs);
    double dphi = t.phase - ref.phase;
    e += elements[k].second * ratio * Complex(std::cos(dphi), std::sin(dphi));
  }
  return e;
}

}  // namespace mpsrnn
