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

#include "mpsrnn/diagnostics.hpp"

#include <cmath>

#include "mpsrnn/ansatz.hpp"
#include "mpsrnn/errors.hpp"

namespace mpsrnn {

CorrelationResult connected_correlations(const SampleBatch &batch, int ref_site) {
  if (batch.size() < 1) throw ConfigError("connected_correlations: empty batch");
  const int V = static_cast<int>(batch.configs[0].size());
  if (ref_site < 0 || ref_site >= V)
    throw ShapeError("connected_correlations: ref_site out of range");
  const double n = static_cast<double>(batch.size());

  VectorXd mean_z = VectorXd::Zero(V);
  VectorXd mean_zz = VectorXd::Zero(V);
  for (const auto &sigma : batch.configs) {
    const double zr = 1.0 - 2.0 * sigma[ref_site];
    for (int i = 0; i < V; ++i) {
      const double zi = 1.0 - 2.0 * sigma[i];
      mean_z(i) += zi;
      mean_zz(i) += zr * zi;
    }
  }
  mean_z /= n;
  mean_zz /= n;

  CorrelationResult out;
  out.value = mean_zz - mean_z(ref_site) * mean_z;
  out.std_error = VectorXd::Zero(V);
  for (const auto &sigma : batch.configs) {
    const double zr = 1.0 - 2.0 * sigma[ref_site];
    for (int i = 0; i < V; ++i) {
      const double zi = 1.0 - 2.0 * sigma[i];
      const double u = zr * zi - zr * mean_z(i) - zi * mean_z(ref_site) +
                       mean_z(ref_site) * mean_z(i) - out.value(i);
      out.std_error(i) += u * u;
    }
  }
  out.std_error = (out.std_error / (n * n)).cwiseSqrt();
  return out;
}

TermShares term_contributions(const RnnParams &params, const Lattice &lattice,
                              const SampleBatch &batch) {
  if (params.variant != Variant::TwoD && params.variant != Variant::Tensor)
    throw ShapeError("term_contributions expects a 2D or tensor ansatz");
  if (batch.size() < 1) throw ConfigError("term_contributions: empty batch");
  const int V = params.num_sites;
  const int chi = params.chi;
  const bool has_tensor = params.variant == Variant::Tensor;
  const VectorXcd ones = VectorXcd::Ones(chi);
  const VectorXcd zero = VectorXcd::Zero(chi);

  MatrixXd sums = MatrixXd::Zero(V, 4);
  std::vector<VectorXcd> memory(V);

  for (const auto &sigma : batch.configs) {
    for (int i = 0; i < V; ++i) {
      auto [x, y] = lattice.site_coords(i);
      auto [ph, pv] = lattice.predecessors(x, y);
      const VectorXcd &hx =
          ph.is_site() ? memory[ph.site] : (ph.tag == PredRef::Tag::Ones ? ones : zero);
      const VectorXcd &hy =
          pv.is_site() ? memory[pv.site] : (pv.tag == PredRef::Tag::Ones ? ones : zero);
      const int s = sigma[i];
      const VectorXd eta = params.eta(i);

      VectorXcd term_t = VectorXcd::Zero(chi);
      if (has_tensor) {
        for (int t = 0; t < chi; ++t)
          for (int u = 0; u < chi; ++u)
            term_t += params.T[i][s].col(t * chi + u) * (hx(t) * hy(u));
      }
      VectorXcd term_x = params.Mx[i][s] * hx;
      VectorXcd term_y = params.My[i][s] * hy;
      const VectorXcd &term_v = params.v[i][s];

      auto weighted = [&](const VectorXcd &a) {
        return std::sqrt((eta.array() * a.array().abs2()).sum());
      };
      sums(i, 0) += weighted(term_t);
      sums(i, 1) += weighted(term_x);
      sums(i, 2) += weighted(term_y);
      sums(i, 3) += weighted(term_v);

      // advance the recurrence; the normalizer needs both branches
      VectorXcd h_up = memory_update(params, i, 0, hx, hy);
      VectorXcd h_dn = memory_update(params, i, 1, hx, hy);
      const double n2 = h_up.squaredNorm() + h_dn.squaredNorm();
      if (n2 == 0.0)
        throw DegenerateStateError("both spin branches vanished", i);
      memory[i] = (s == 0 ? h_up : h_dn) / std::sqrt(n2);
    }
  }

  TermShares out;
  out.shares = MatrixXd::Zero(V, 4);
  out.flagged.assign(V, 0);
  for (int i = 0; i < V; ++i) {
    const double total = sums.row(i).sum();
    if (total == 0.0) {
      out.flagged[i] = 1;
      continue;
    }
    out.shares.row(i) = sums.row(i) / total;
  }
  return out;
}

double relative_error(double e, double e_ref) {
  if (e_ref == 0.0) throw ConfigError("relative_error: zero reference");
  return std::abs(e - e_ref) / std::abs(e_ref);
}

}  // namespace mpsrnn
