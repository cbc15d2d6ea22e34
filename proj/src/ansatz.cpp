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

#include "mpsrnn/ansatz.hpp"

#include <cmath>
#include <limits>

#include "mpsrnn/errors.hpp"

namespace mpsrnn {

namespace {

constexpr double kPi = 3.141592653589793238462643;

double wrap_phase(double phi) {
  phi = std::fmod(phi, 2 * kPi);
  if (phi > kPi) phi -= 2 * kPi;
  if (phi <= -kPi) phi += 2 * kPi;
  return phi;
}

}  // namespace

Complex AmplitudeTrace::psi() const {
  if (std::isinf(log_abs) && log_abs < 0) return Complex(0, 0);
  return std::exp(log_abs) * Complex(std::cos(phase), std::sin(phase));
}

VectorXcd memory_update(const RnnParams &params, int site, int spin,
                        const VectorXcd &h_horizontal, const VectorXcd &h_vertical) {
  const int chi = params.chi;
  if (h_horizontal.size() != chi)
    throw ShapeError("memory_update: horizontal input has wrong length");
  if (params.is_two_dimensional() && h_vertical.size() != chi)
    throw ShapeError("memory_update: vertical input has wrong length");

  switch (params.variant) {
    case Variant::Vanilla:
      return params.M[site][spin] * h_horizontal;
    case Variant::OneD:
      return params.M[site][spin] * h_horizontal + params.v[site][spin];
    default:
      break;
  }

  VectorXcd out = VectorXcd::Zero(chi);
  if (params.variant == Variant::Tensor) {
    // T <hx, hy>: mode-0 unfolding times the Kronecker column hx (x) hy
    VectorXcd khh(chi * chi);
    for (int t = 0; t < chi; ++t)
      for (int u = 0; u < chi; ++u) khh(t * chi + u) = h_horizontal(t) * h_vertical(u);
    out = params.T[site][spin] * khh;
  } else if (params.variant == Variant::CompressedTensor) {
    const int chi_c = params.chi_core;
    VectorXcd px = params.Ux[site][spin].transpose() * h_horizontal;
    VectorXcd py = params.Uy[site][spin].transpose() * h_vertical;
    VectorXcd kpp(chi_c * chi_c);
    for (int t = 0; t < chi_c; ++t)
      for (int u = 0; u < chi_c; ++u) kpp(t * chi_c + u) = px(t) * py(u);
    out = params.Uo[site][spin] * (params.K[site][spin] * kpp);
  }
  out += params.Mx[site][spin] * h_horizontal;
  out += params.My[site][spin] * h_vertical;
  out += params.v[site][spin];
  return out;
}

std::pair<VectorXcd, VectorXcd> normalize_memory(const VectorXcd &h_up,
                                                 const VectorXcd &h_down) {
  double norm2 = h_up.squaredNorm() + h_down.squaredNorm();
  if (norm2 == 0.0)
    throw DegenerateStateError("both spin branches of the memory vanished", -1);
  double inv = 1.0 / std::sqrt(norm2);
  return {h_up * inv, h_down * inv};
}

std::pair<double, double> conditional_from_eta(const VectorXd &eta,
                                               const VectorXcd &h_up,
                                               const VectorXcd &h_down) {
  double q_up = (eta.array() * h_up.array().abs2()).sum();
  double q_down = (eta.array() * h_down.array().abs2()).sum();
  double total = q_up + q_down;
  if (total == 0.0)
    throw DegenerateStateError("zero conditional weight on both branches", -1);
  return {q_up / total, q_down / total};
}

std::pair<double, double> conditional_from_gamma(const MatrixXcd &gamma,
                                                 const VectorXcd &h_up,
                                                 const VectorXcd &h_down) {
  // Re[.] keeps the form well-defined (and Hermitizes gamma implicitly).
  double q_up = (h_up.adjoint() * gamma * h_up)(0).real();
  double q_down = (h_down.adjoint() * gamma * h_down)(0).real();
  double total = q_up + q_down;
  if (total == 0.0)
    throw DegenerateStateError("zero conditional weight on both branches", -1);
  return {q_up / total, q_down / total};
}

std::pair<double, bool> site_phase(const VectorXcd &w, Complex c, const VectorXcd &h) {
  Complex z = w.transpose() * h;
  z += c;
  if (z == Complex(0, 0)) return {0.0, true};
  return {std::arg(z), false};
}

AmplitudeTrace evaluate_amplitude(const RnnParams &params, const Lattice &lattice,
                                  const SpinConfig &sigma) {
  const int V = params.num_sites;
  const int chi = params.chi;
  if (lattice.num_sites() != V)
    throw ShapeError("evaluate_amplitude: lattice size does not match parameters");
  if (static_cast<int>(sigma.size()) != V)
    throw ShapeError("evaluate_amplitude: configuration has wrong length");

  const bool two_d = params.is_two_dimensional();
  const bool vanilla = params.variant == Variant::Vanilla;
  const VectorXcd ones = VectorXcd::Ones(chi);
  const VectorXcd zero = VectorXcd::Zero(chi);

  AmplitudeTrace trace;
  trace.cond_prob = VectorXd::Ones(V);
  trace.site_phase = VectorXd::Zero(V);

  std::vector<VectorXcd> memory(V);  // realized-branch output per site
  double sum_log_p = 0;
  double sum_phase = 0;
  bool dead = false;        // amplitude is exactly zero from some earlier site
  bool short_circuit = false;

  for (int i = 0; i < V; ++i) {
    const VectorXcd *hx = &ones;
    const VectorXcd *hy = &zero;
    if (two_d) {
      auto [x, y] = lattice.site_coords(i);
      auto [ph, pv] = lattice.predecessors(x, y);
      hx = ph.is_site() ? &memory[ph.site] : (ph.tag == PredRef::Tag::Ones ? &ones : &zero);
      hy = pv.is_site() ? &memory[pv.site] : (pv.tag == PredRef::Tag::Ones ? &ones : &zero);
    } else {
      PredRef pred = lattice.snake_predecessor(i);
      hx = pred.is_site() ? &memory[pred.site] : &ones;
    }

    VectorXcd h_up = memory_update(params, i, 0, *hx, *hy);
    VectorXcd h_dn = memory_update(params, i, 1, *hx, *hy);

    double q_up, q_dn;
    if (vanilla) {
      q_up = (h_up.adjoint() * params.gamma[i] * h_up)(0).real();
      q_dn = (h_dn.adjoint() * params.gamma[i] * h_dn)(0).real();
    } else {
      VectorXd eta = params.eta(i);
      q_up = (eta.array() * h_up.array().abs2()).sum();
      q_dn = (eta.array() * h_dn.array().abs2()).sum();
    }
    double total = q_up + q_dn;
    if (total == 0.0) {
      if (dead) {  // zero-amplitude configuration, remaining p_i moot
        short_circuit = true;
        break;
      }
      throw DegenerateStateError("zero conditional weight on both branches", i);
    }

    const int s = sigma[i];
    const double p = (s == 0 ? q_up : q_dn) / total;
    trace.cond_prob(i) = p;
    if (p == 0.0) {
      dead = true;
      sum_log_p = -std::numeric_limits<double>::infinity();
    } else if (!dead) {
      sum_log_p += std::log(p);
    }

    // advance with the realized branch
    VectorXcd &h_real = (s == 0) ? h_up : h_dn;
    if (vanilla) {
      double n = h_real.norm();
      memory[i] = (n == 0.0) ? VectorXcd(zero) : VectorXcd(h_real / n);
    } else {
      double n = std::sqrt(h_up.squaredNorm() + h_dn.squaredNorm());
      memory[i] = h_real / n;  // n > 0: total was nonzero and eta > 0
    }

    if (!vanilla && params.phase_enabled) {
      auto [phi, flagged] = site_phase(params.w[i][s], params.c[i][s], memory[i]);
      trace.site_phase(i) = phi;
      sum_phase += phi;
      trace.phase_flagged |= flagged;
    }
  }

  if (vanilla && !short_circuit) {
    auto [phi, flagged] = site_phase(VectorXcd::Ones(chi), Complex(0, 0), memory[V - 1]);
    trace.site_phase(V - 1) = phi;
    sum_phase = phi;
    trace.phase_flagged |= flagged;
  }

  trace.log_abs = dead ? -std::numeric_limits<double>::infinity() : 0.5 * sum_log_p;
  trace.phase = wrap_phase(sum_phase);
  return trace;
}

}  // namespace mpsrnn
