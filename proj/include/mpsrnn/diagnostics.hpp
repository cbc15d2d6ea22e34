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

#ifndef MPSRNN_DIAGNOSTICS_HPP
#define MPSRNN_DIAGNOSTICS_HPP

#include <vector>

#include "mpsrnn/lattice.hpp"
#include "mpsrnn/params.hpp"
#include "mpsrnn/sampling.hpp"
#include "mpsrnn/types.hpp"

namespace mpsrnn {

struct CorrelationResult {
  VectorXd value;      // C(i) = <z_ref z_i> - <z_ref><z_i>, z = +-1
  VectorXd std_error;  // influence-function standard errors
};

/// Connected z-basis spin correlations of every site with ref_site,
/// estimated from the batch.
CorrelationResult connected_correlations(const SampleBatch &batch, int ref_site);

/// Relative contributions of the four memory-update terms, per site.
/// Column order: tensor, matrix-x, matrix-y, vector. Each term's magnitude
/// is sqrt(sum_s eta_s |a_s|^2) at the realized spin, averaged over the
/// batch and normalized per site to sum 1. Sites where all four averages
/// vanish are flagged and left as zeros.
struct TermShares {
  MatrixXd shares;  // V x 4
  std::vector<char> flagged;
};

TermShares term_contributions(const RnnParams &params, const Lattice &lattice,
                              const SampleBatch &batch);

/// |E - E_ref| / |E_ref|.
double relative_error(double e, double e_ref);

}  // namespace mpsrnn

#endif  // MPSRNN_DIAGNOSTICS_HPP
