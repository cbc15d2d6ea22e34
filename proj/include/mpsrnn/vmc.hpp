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

#ifndef MPSRNN_VMC_HPP
#define MPSRNN_VMC_HPP

#include <functional>
#include <string>
#include <vector>

#include "mpsrnn/gradient.hpp"
#include "mpsrnn/hamiltonian.hpp"
#include "mpsrnn/lattice.hpp"
#include "mpsrnn/params.hpp"
#include "mpsrnn/sampling.hpp"
#include "mpsrnn/types.hpp"

namespace mpsrnn {

struct LrStage {
  long steps;
  double rate;
};

struct VmcConfig {
  long batch_size = 1024;
  std::vector<LrStage> lr_schedule;  // empty = default_schedule(chi)
  double clip_norm = 1.0;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  std::uint64_t seed = 0;
  long eval_samples = 1000000;
  long max_steps = -1;  // caps the schedule when >= 0 (0 = do not train)

  // automatic replacement for hand-tuned learning-rate drops: when the
  // batch energy rises above the window median by spike_factor * |median|,
  // the learning rate is divided by 10 for the rest of the run
  double spike_factor = 10.0;
  int spike_window = 50;

  /// 1e-2/1e-3/1e-4 over 10k/10k/20k steps for chi <= 10; rates start one
  /// decade lower for larger chi.
  static std::vector<LrStage> default_schedule(int chi);

  long total_steps(int chi) const;
  double rate_at(long step, int chi) const;

  /// Multiplies every stage length by ratio (rounded, at least 1 step).
  static std::vector<LrStage> scale_schedule(const std::vector<LrStage> &schedule,
                                             double ratio);
};

struct OptimizerState {
  VectorXd first_moment;
  VectorXd second_moment;
  long step = 0;

  explicit OptimizerState(long num_params)
      : first_moment(VectorXd::Zero(num_params)),
        second_moment(VectorXd::Zero(num_params)) {}
};

/// Scales the vector down to the given l2 norm if it exceeds it.
VectorXd clip_global_norm(const VectorXd &grad, double max_norm);

/// Bias-corrected Adam update; returns the parameter delta.
VectorXd adam_step(OptimizerState &state, const VectorXd &grad, double lr,
                   double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);

struct EnergyGradient {
  Complex energy_mean;
  double energy_variance = 0;
  VectorXd grad;       // layout order
  long excluded = 0;   // samples dropped by the low-weight guard
};

/// Batch estimate of <H> and its parameter gradient
/// grad_k = 2 Re[<E_loc conj(O_k)> - <E_loc><conj(O_k)>].
/// Samples whose |psi| is below 1e-30 of the batch maximum are excluded.
EnergyGradient energy_and_gradient(const RnnParams &params, const Lattice &lattice,
                                   const Hamiltonian &h, const SampleBatch &batch);

struct StepMetrics {
  long step = 0;
  Complex energy;
  double variance = 0;
  double grad_norm = 0;
  double lr = 0;
  double wall_ms = 0;
  long excluded = 0;
};

struct TrainResult {
  RnnParams params;
  std::vector<StepMetrics> metrics;
  bool aborted = false;
  std::string abort_reason;
  long lr_reductions = 0;
};

/// Sample -> local energies -> gradient -> clip -> Adam, with the spike
/// safeguard and a checkpoint of the last finite state on abort.
/// `on_step` (if set) receives every metrics row as it is produced;
/// `should_stop` (if set) is polled after each step and ends training early.
TrainResult train(const RnnParams &initial, const Lattice &lattice, const Hamiltonian &h,
                  const VmcConfig &config,
                  const std::function<void(const StepMetrics &)> &on_step = {},
                  const std::function<bool(long, const RnnParams &)> &should_stop = {});

}  // namespace mpsrnn

#endif  // MPSRNN_VMC_HPP
