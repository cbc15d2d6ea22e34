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

#include "mpsrnn/vmc.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>

#include "mpsrnn/engine.hpp"
#include "mpsrnn/errors.hpp"
#include "mpsrnn/rng.hpp"

namespace mpsrnn {

std::vector<LrStage> VmcConfig::default_schedule(int chi) {
  const double base = (chi <= 10) ? 1e-2 : 1e-3;
  return {{10000, base}, {10000, base * 1e-1}, {20000, base * 1e-2}};
}

long VmcConfig::total_steps(int chi) const {
  const auto &sched = lr_schedule.empty() ? default_schedule(chi) : lr_schedule;
  long total = 0;
  for (const auto &stage : sched) total += stage.steps;
  if (max_steps >= 0) total = std::min(total, max_steps);
  return total;
}

double VmcConfig::rate_at(long step, int chi) const {
  const auto sched = lr_schedule.empty() ? default_schedule(chi) : lr_schedule;
  long passed = 0;
  for (const auto &stage : sched) {
    passed += stage.steps;
    if (step < passed) return stage.rate;
  }
  return sched.back().rate;
}

std::vector<LrStage> VmcConfig::scale_schedule(const std::vector<LrStage> &schedule,
                                               double ratio) {
  std::vector<LrStage> out;
  for (const auto &stage : schedule) {
    long steps = std::max(1L, std::lround(stage.steps * ratio));
    out.push_back({steps, stage.rate});
  }
  return out;
}

VectorXd clip_global_norm(const VectorXd &grad, double max_norm) {
  if (max_norm <= 0) throw ConfigError("clip_global_norm: max_norm must be positive");
  const double norm = grad.norm();
  if (norm <= max_norm) return grad;
  return grad * (max_norm / norm);
}

VectorXd adam_step(OptimizerState &state, const VectorXd &grad, double lr, double beta1,
                   double beta2, double eps) {
  if (grad.size() != state.first_moment.size())
    throw ShapeError("adam_step: gradient length mismatch");
  state.step += 1;
  state.first_moment = beta1 * state.first_moment + (1 - beta1) * grad;
  state.second_moment =
      beta2 * state.second_moment.array() + (1 - beta2) * grad.array().square();
  const double bc1 = 1 - std::pow(beta1, static_cast<double>(state.step));
  const double bc2 = 1 - std::pow(beta2, static_cast<double>(state.step));
  VectorXd m_hat = state.first_moment / bc1;
  VectorXd v_hat = state.second_moment / bc2;
  return (-lr) * m_hat.array() / (v_hat.array().sqrt() + eps);
}

EnergyGradient energy_and_gradient(const RnnParams &params, const Lattice &lattice,
                                   const Hamiltonian &h, const SampleBatch &batch) {
  if (batch.size() < 1) throw ConfigError("energy_and_gradient: empty batch");
  const int V = params.num_sites;
  const long B = batch.size();

  Engine engine(params, lattice);
  ParamLayout layout(params);

  SpinMatrix configs(V, B);
  for (long b = 0; b < B; ++b)
    for (int i = 0; i < V; ++i) configs(i, b) = batch.configs[b][i];
  Engine::Forward fwd = engine.forward(configs, true);

  // low-weight guard: amplitude ratios against these samples are unreliable
  const double max_log = fwd.log_abs.maxCoeff();
  const double cutoff = max_log + std::log(1e-30);
  std::vector<char> included(B, 1);
  long excluded = 0;
  for (long b = 0; b < B; ++b) {
    if (!(fwd.log_abs(b) > cutoff)) {
      included[b] = 0;
      ++excluded;
    }
  }
  if (excluded == B) throw NumericalError("energy_and_gradient: all samples excluded");

  // local energies via prefix-reusing batched evaluation
  VectorXcd e_loc = VectorXcd::Zero(B);
  std::vector<int> parent_col, start_site;
  std::vector<Complex> amp;
  std::vector<SpinConfig> conn;
  for (long b = 0; b < B; ++b) {
    if (!included[b]) continue;
    auto elements = connected_elements(h, batch.configs[b]);
    e_loc(b) = elements[0].second;
    for (std::size_t k = 1; k < elements.size(); ++k) {
      int start = 0;
      while (elements[k].first[start] == batch.configs[b][start]) ++start;
      parent_col.push_back(static_cast<int>(b));
      start_site.push_back(start);
      amp.push_back(elements[k].second);
      conn.push_back(std::move(elements[k].first));
    }
  }

  constexpr long kChunk = 4096;
  const long total = static_cast<long>(conn.size());
  VectorXd la, ph;
  for (long first = 0; first < total; first += kChunk) {
    const long count = std::min(kChunk, total - first);
    SpinMatrix cc(V, count);
    std::vector<int> pc(count), ss(count);
    for (long k = 0; k < count; ++k) {
      for (int i = 0; i < V; ++i) cc(i, k) = conn[first + k][i];
      pc[k] = parent_col[first + k];
      ss[k] = start_site[first + k];
    }
    engine.connected_forward(fwd, pc, cc, ss, la, ph);
    for (long k = 0; k < count; ++k) {
      if (std::isinf(la(k))) continue;  // psi(sigma') = 0
      const long b = pc[k];
      const double ratio = std::exp(la(k) - fwd.log_abs(b));
      const double dphi = ph(k) - fwd.phase(b);
      e_loc(b) += amp[first + k] * ratio * Complex(std::cos(dphi), std::sin(dphi));
    }
  }

  const long n_inc = B - excluded;
  Complex e_mean(0, 0);
  for (long b = 0; b < B; ++b)
    if (included[b]) e_mean += e_loc(b);
  e_mean /= static_cast<double>(n_inc);
  double e_var = 0;
  for (long b = 0; b < B; ++b)
    if (included[b]) e_var += std::norm(e_loc(b) - e_mean);
  e_var /= static_cast<double>(n_inc);

  // grad_k = sum_b 2 Re[conj(lambda_b) O_k(b)], lambda_b = (E_b - Emean)/N
  VectorXd seed_log(B), seed_phase(B);
  for (long b = 0; b < B; ++b) {
    if (!included[b]) {
      seed_log(b) = seed_phase(b) = 0;
      continue;
    }
    const Complex lambda = (e_loc(b) - e_mean) / static_cast<double>(n_inc);
    seed_log(b) = 2 * lambda.real();
    seed_phase(b) = 2 * lambda.imag();
  }

  EnergyGradient result;
  result.energy_mean = e_mean;
  result.energy_variance = e_var;
  result.excluded = excluded;
  result.grad = VectorXd::Zero(layout.size());
  engine.backward(fwd, seed_log, seed_phase, layout, result.grad);
  return result;
}

TrainResult train(const RnnParams &initial, const Lattice &lattice, const Hamiltonian &h,
                  const VmcConfig &config,
                  const std::function<void(const StepMetrics &)> &on_step,
                  const std::function<bool(long, const RnnParams &)> &should_stop) {
  if (config.batch_size < 2) throw ConfigError("train: batch_size must be >= 2");

  TrainResult result;
  result.params = initial;
  ParamLayout layout(initial);
  VectorXd theta = layout.pack(initial);
  OptimizerState opt(layout.size());

  const long total = config.total_steps(initial.chi);
  double lr_divisor = 1.0;
  std::deque<double> window;

  using Clock = std::chrono::steady_clock;
  for (long step = 0; step < total; ++step) {
    const auto t0 = Clock::now();
    const double lr = config.rate_at(step, initial.chi) / lr_divisor;

    const std::uint64_t step_seed = counter_bits(config.seed, 0x57e9, step);
    SampleBatch batch =
        sample_batch(result.params, lattice, config.batch_size, step_seed);
    EnergyGradient eg = energy_and_gradient(result.params, lattice, h, batch);

    if (!std::isfinite(eg.energy_mean.real()) || !std::isfinite(eg.energy_mean.imag()) ||
        !eg.grad.allFinite()) {
      result.aborted = true;
      result.abort_reason = "non-finite energy or gradient at step " + std::to_string(step);
      break;  // result.params still holds the last good state
    }

    VectorXd clipped = clip_global_norm(eg.grad, config.clip_norm);
    VectorXd delta = adam_step(opt, clipped, lr, config.adam_beta1, config.adam_beta2,
                               config.adam_eps);
    VectorXd theta_next = theta + delta;
    if (!theta_next.allFinite()) {
      result.aborted = true;
      result.abort_reason = "non-finite parameters at step " + std::to_string(step);
      break;
    }
    theta = std::move(theta_next);
    layout.unpack(theta, result.params);

    StepMetrics m;
    m.step = step;
    m.energy = eg.energy_mean;
    m.variance = eg.energy_variance;
    m.grad_norm = eg.grad.norm();
    m.lr = lr;
    m.excluded = eg.excluded;
    m.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    result.metrics.push_back(m);
    if (on_step) on_step(m);

    // spike safeguard: energy far above the recent median drops the rate
    const double e_re = eg.energy_mean.real();
    if (static_cast<int>(window.size()) >= config.spike_window) {
      std::vector<double> sorted(window.begin(), window.end());
      std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
      const double median = sorted[sorted.size() / 2];
      if (e_re > median + config.spike_factor * std::max(std::abs(median), 1.0)) {
        lr_divisor = std::min(lr_divisor * 10.0, 1e12);
        result.lr_reductions += 1;
        window.clear();
      }
    }
    window.push_back(e_re);
    while (static_cast<int>(window.size()) > config.spike_window) window.pop_front();

    if (should_stop && should_stop(step, result.params)) break;
  }
  return result;
}

}  // namespace mpsrnn
