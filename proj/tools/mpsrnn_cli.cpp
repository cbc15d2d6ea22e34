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

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <random>

#include "mpsrnn/checkpoint.hpp"
#include "mpsrnn/config.hpp"
#include "mpsrnn/diagnostics.hpp"
#include "mpsrnn/engine.hpp"
#include "mpsrnn/errors.hpp"
#include "mpsrnn/mapping.hpp"
#include "mpsrnn/oracle.hpp"
#include "mpsrnn/pipeline.hpp"
#include "mpsrnn/sampling.hpp"
#include "mpsrnn/vmc.hpp"

namespace {

using namespace mpsrnn;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

CheckpointMeta make_meta(const RnnParams &params, LatticeKind kind, int L,
                         std::uint64_t seed = 0, long step = 0) {
  CheckpointMeta meta;
  meta.variant = params.variant;
  meta.lattice_kind = kind;
  meta.L = L;
  meta.chi = params.chi;
  meta.chi_core = params.chi_core;
  meta.phase_enabled = params.phase_enabled;
  meta.seed = seed;
  meta.step = step;
  return meta;
}

std::ofstream open_out(const std::string &path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path + " for writing");
  return os;
}

// ----- map: statevector or MPS file -> vanilla / 1D checkpoint -----

struct MapArgs {
  std::string statevector, mps_file, out, to = "1d", lattice = "chain";
  int L = 0;
  int chi = 8;
  bool no_phase = false;
};

int run_map(const MapArgs &a) {
  Lattice lattice(lattice_kind_from_string(a.lattice), a.L);
  Mps mps;
  if (!a.statevector.empty()) {
    VectorXcd psi = import_statevector(a.statevector);
    if (psi.size() != (1L << lattice.num_sites()))
      throw ConfigError("statevector length does not match the lattice");
    mps = statevector_to_mps(psi, a.chi);
  } else if (!a.mps_file.empty()) {
    mps = import_mps(a.mps_file);
    if (mps.num_sites() != lattice.num_sites())
      throw ConfigError("MPS site count does not match the lattice");
  } else {
    throw ConfigError("map needs --statevector or --mps");
  }

  RnnParams params;
  if (a.to == "vanilla") {
    params = mps_to_vanilla(mps);
  } else if (a.to == "1d") {
    params = one_d_from_mps(mps, !a.no_phase);
  } else {
    throw ConfigError("map target must be vanilla or 1d");
  }
  save_checkpoint(a.out, params, make_meta(params, lattice.kind(), a.L));
  std::cout << "wrote " << to_string(params.variant) << " checkpoint (chi=" << params.chi
            << ") to " << a.out << "\n";
  return kExitOk;
}

// ----- lift: hierarchy step with fresh-term noise -----

struct LiftArgs {
  std::string in, out, to = "2d";
  double noise_std = 1e-7;
  std::uint64_t seed = 0;
};

int run_lift(const LiftArgs &a) {
  auto [params, meta] = load_checkpoint(a.in);
  Lattice lattice(meta.lattice_kind, meta.L);
  RnnParams lifted;
  if (a.to == "2d") {
    lifted = lift_1d_to_2d(params, lattice, a.noise_std, a.seed);
  } else if (a.to == "tensor") {
    lifted = lift_2d_to_tensor(params, a.noise_std, a.seed);
  } else if (a.to == "compressed") {
    lifted = lift_2d_to_compressed(params, a.noise_std, a.seed);
  } else {
    throw ConfigError("lift target must be 2d, tensor or compressed");
  }
  save_checkpoint(a.out, lifted, make_meta(lifted, meta.lattice_kind, meta.L, a.seed));
  std::cout << "lifted " << to_string(params.variant) << " -> " << to_string(lifted.variant)
            << ", wrote " << a.out << "\n";
  return kExitOk;
}

// ----- train -----

struct TrainArgs {
  std::string config, out, metrics;
};

int run_train(const TrainArgs &a) {
  RunConfig cfg = parse_config_file(a.config);
  Lattice lattice = cfg.make_lattice();
  Hamiltonian ham = cfg.make_hamiltonian(lattice);

  RnnParams params;
  if (!cfg.init_from.empty()) {
    // the checkpoint is authoritative for variant and chi
    auto [loaded, meta] = load_checkpoint(cfg.init_from);
    if (meta.lattice_kind != lattice.kind() || meta.L != lattice.L())
      throw ConfigError("checkpoint lattice does not match the config");
    params = std::move(loaded);
  } else {
    if (cfg.chi < 1) throw ConfigError("ansatz.chi is required without init.from");
    if (cfg.variant == Variant::Vanilla)
      throw ConfigError("vanilla training needs init.from (map an MPS first)");
    params = RnnParams::make(cfg.variant, lattice.num_sites(), cfg.chi);
    // small random start
    std::mt19937_64 rng(cfg.vmc.seed);
    std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(cfg.chi));
    ParamLayout layout(params);
    VectorXd flat = layout.pack(params);
    for (long k = 0; k < flat.size(); ++k) flat(k) = normal(rng);
    layout.unpack(flat, params);
    for (auto &le : params.log_eta) le.setZero();
  }

  std::ofstream metrics_file;
  if (!a.metrics.empty()) {
    metrics_file = open_out(a.metrics);
    metrics_file << "step,energy_re,energy_im,variance,grad_norm,lr,wall_ms\n";
  }
  auto on_step = [&](const StepMetrics &m) {
    if (metrics_file.is_open()) {
      metrics_file << m.step << "," << m.energy.real() << "," << m.energy.imag() << ","
                   << m.variance << "," << m.grad_norm << "," << m.lr << "," << m.wall_ms
                   << "\n";
    }
    if (m.step % 100 == 0)
      std::cout << "step " << m.step << "  E = " << m.energy.real()
                << "  var = " << m.variance << "  lr = " << m.lr << "\n";
  };

  TrainResult result = train(params, lattice, ham, cfg.vmc, on_step);
  save_checkpoint(a.out, result.params,
                  make_meta(result.params, lattice.kind(), lattice.L(), cfg.vmc.seed,
                            static_cast<long>(result.metrics.size())));
  if (result.aborted) {
    std::cerr << "training aborted: " << result.abort_reason
              << " (last good state written to " << a.out << ")\n";
    return kExitNumerical;
  }
  std::cout << "trained " << result.metrics.size() << " steps, wrote " << a.out << "\n";
  return kExitOk;
}

// ----- sample -----

struct SampleArgs {
  std::string in, out;
  long n = 1024;
  std::uint64_t seed = 0;
};

int run_sample(const SampleArgs &a) {
  auto [params, meta] = load_checkpoint(a.in);
  Lattice lattice(meta.lattice_kind, meta.L);
  SampleBatch batch = sample_batch(params, lattice, a.n, a.seed);
  std::ofstream os = open_out(a.out);
  os << "config,log_prob\n";
  for (long b = 0; b < batch.size(); ++b) {
    for (int i = 0; i < lattice.num_sites(); ++i)
      os << static_cast<int>(batch.configs[b][i]);
    os << "," << batch.log_probs(b) << "\n";
  }
  std::cout << "wrote " << a.n << " samples to " << a.out << "\n";
  return kExitOk;
}

// ----- evaluate -----

struct EvaluateArgs {
  std::string in, config;
};

int run_evaluate(const EvaluateArgs &a) {
  RunConfig cfg = parse_config_file(a.config);
  auto [params, meta] = load_checkpoint(a.in);
  Lattice lattice(meta.lattice_kind, meta.L);
  if (cfg.L != 0 && (cfg.L != meta.L || cfg.lattice_kind != meta.lattice_kind))
    throw ConfigError("checkpoint lattice does not match the config");
  Hamiltonian ham = cfg.make_hamiltonian(lattice);

  const long n = cfg.vmc.eval_samples;
  SampleBatch batch = sample_batch(params, lattice, n, cfg.vmc.seed);
  EnergyGradient eg = energy_and_gradient(params, lattice, ham, batch);
  const double std_error = std::sqrt(eg.energy_variance / static_cast<double>(n));
  std::cout << "samples = " << n << "\n"
            << "energy_re = " << eg.energy_mean.real() << "\n"
            << "energy_im = " << eg.energy_mean.imag() << "\n"
            << "std_error = " << std_error << "\n"
            << "variance = " << eg.energy_variance << "\n"
            << "excluded = " << eg.excluded << "\n";
  return kExitOk;
}

// ----- oracle -----

struct OracleArgs {
  std::string config, tv_checkpoint;
  int entropy_rows = 0;
  long tv_samples = 100000;
  std::uint64_t seed = 0;
};

int run_oracle(const OracleArgs &a) {
  RunConfig cfg = parse_config_file(a.config);
  Lattice lattice = cfg.make_lattice();
  Hamiltonian ham = cfg.make_hamiltonian(lattice);

  auto [e0, psi0] = exact_ground_state(ham, lattice.num_sites());
  std::cout << "ground_energy = " << e0 << "\n";

  if (a.entropy_rows > 0) {
    std::vector<int> region;
    for (int i = 0; i < a.entropy_rows * lattice.L(); ++i) region.push_back(i);
    std::cout << "entropy_rows_" << a.entropy_rows << " = "
              << cut_entropy(psi0, region, lattice.num_sites()) << "\n";
  }
  if (!a.tv_checkpoint.empty()) {
    auto [params, meta] = load_checkpoint(a.tv_checkpoint);
    Lattice model_lat(meta.lattice_kind, meta.L);
    VectorXcd psi = enumerate_wavefunction(params, model_lat);
    SampleBatch batch = sample_batch(params, model_lat, a.tv_samples, a.seed);
    std::cout << "sampler_tv = " << sampler_total_variation(batch, psi) << "\n";
  }
  return kExitOk;
}

// ----- arealaw -----

struct AreaLawArgs {
  std::string out;
  int L = 4;
};

int run_arealaw(const AreaLawArgs &a) {
  RnnParams params = build_area_law_params(a.L);
  Lattice lattice(LatticeKind::Square, a.L);

  const int V = lattice.num_sites();
  if (V <= 16) {
    VectorXcd psi = enumerate_wavefunction(params, lattice);
    long support = 0;
    double max_dev = 0;
    bool support_exact = true;
    const double expect = std::pow(2.0, -(V - a.L));
    for (std::uint64_t n = 0; n < (1ULL << V); ++n) {
      SpinConfig sigma = config_from_bits(n, V);
      bool match = true;
      for (int x = 0; x < a.L; ++x)
        match = match && sigma[lattice.snake_index(x, 0)] ==
                             sigma[lattice.snake_index(x, a.L - 1)];
      if (match) {
        ++support;
        max_dev = std::max(max_dev, std::abs(std::norm(psi(n)) - expect));
      } else if (std::norm(psi(n)) != 0.0) {
        support_exact = false;
      }
    }
    std::cout << "support_states = " << support << " (expected " << (1L << (V - a.L))
              << ")\n"
              << "support_exact = " << (support_exact ? "yes" : "no") << "\n"
              << "max_weight_deviation = " << max_dev << "\n";
    for (int rows = 1; rows < a.L - 1; ++rows) {
      std::vector<int> region;
      for (int i = 0; i < rows * a.L; ++i) region.push_back(i);
      std::cout << "entropy_rows_" << rows << " = " << cut_entropy(psi, region, V)
                << "  (L ln 2 = " << a.L * std::log(2.0) << ")\n";
    }
  }
  if (!a.out.empty()) {
    save_checkpoint(a.out, params, make_meta(params, LatticeKind::Square, a.L));
    std::cout << "wrote " << a.out << "\n";
  }
  return kExitOk;
}

// ----- diagnose -----

struct DiagnoseArgs {
  std::string in, correlations, terms;
  long n = 4096;
  std::uint64_t seed = 0;
  int ref_site = 0;
};

int run_diagnose(const DiagnoseArgs &a) {
  auto [params, meta] = load_checkpoint(a.in);
  Lattice lattice(meta.lattice_kind, meta.L);
  SampleBatch batch = sample_batch(params, lattice, a.n, a.seed);

  if (!a.correlations.empty()) {
    CorrelationResult corr = connected_correlations(batch, a.ref_site);
    std::ofstream os = open_out(a.correlations);
    os << "site,x,y,value,std_error\n";
    for (int i = 0; i < lattice.num_sites(); ++i) {
      auto [x, y] = lattice.site_coords(i);
      os << i << "," << x << "," << y << "," << corr.value(i) << "," << corr.std_error(i)
         << "\n";
    }
    std::cout << "wrote " << a.correlations << "\n";
  }
  if (!a.terms.empty()) {
    TermShares shares = term_contributions(params, lattice, batch);
    std::ofstream os = open_out(a.terms);
    os << "site,x,y,tensor,matrix_x,matrix_y,vector,flagged\n";
    for (int i = 0; i < lattice.num_sites(); ++i) {
      auto [x, y] = lattice.site_coords(i);
      os << i << "," << x << "," << y << "," << shares.shares(i, 0) << ","
         << shares.shares(i, 1) << "," << shares.shares(i, 2) << "," << shares.shares(i, 3)
         << "," << static_cast<int>(shares.flagged[i]) << "\n";
    }
    std::cout << "wrote " << a.terms << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"MPS-RNN / tensorial RNN variational quantum states"};
  app.require_subcommand(1);

  MapArgs map_args;
  auto *map_cmd = app.add_subcommand("map", "factorize a state into an MPS-RNN checkpoint");
  map_cmd->add_option("--statevector", map_args.statevector, "statevector container input");
  map_cmd->add_option("--mps", map_args.mps_file, "MPS container input");
  map_cmd->add_option("--lattice", map_args.lattice, "chain | square | triangular")
      ->required();
  map_cmd->add_option("--L", map_args.L, "linear lattice size")->required();
  map_cmd->add_option("--chi", map_args.chi, "max bond dimension for the factorization");
  map_cmd->add_option("--to", map_args.to, "vanilla | 1d (default 1d)");
  map_cmd->add_flag("--no-phase", map_args.no_phase, "fix the phase to zero");
  map_cmd->add_option("--out", map_args.out, "output checkpoint")->required();

  LiftArgs lift_args;
  auto *lift_cmd = app.add_subcommand("lift", "hierarchical initialization step");
  lift_cmd->add_option("--in", lift_args.in, "input checkpoint")->required();
  lift_cmd->add_option("--out", lift_args.out, "output checkpoint")->required();
  lift_cmd->add_option("--to", lift_args.to, "2d | tensor | compressed")->required();
  lift_cmd->add_option("--noise-std", lift_args.noise_std,
                       "std of the fresh-term Gaussian noise (default 1e-7)");
  lift_cmd->add_option("--seed", lift_args.seed, "noise seed");

  TrainArgs train_args;
  auto *train_cmd = app.add_subcommand("train", "VMC optimization");
  train_cmd->add_option("--config", train_args.config, "run configuration file")->required();
  train_cmd->add_option("--out", train_args.out, "output checkpoint")->required();
  train_cmd->add_option("--metrics", train_args.metrics, "metrics CSV path");

  SampleArgs sample_args;
  auto *sample_cmd = app.add_subcommand("sample", "draw exact samples");
  sample_cmd->add_option("--in", sample_args.in, "checkpoint")->required();
  sample_cmd->add_option("-n", sample_args.n, "number of samples");
  sample_cmd->add_option("--seed", sample_args.seed, "sampling seed");
  sample_cmd->add_option("--out", sample_args.out, "CSV output")->required();

  EvaluateArgs eval_args;
  auto *eval_cmd = app.add_subcommand("evaluate", "estimate the energy from samples");
  eval_cmd->add_option("--in", eval_args.in, "checkpoint")->required();
  eval_cmd->add_option("--config", eval_args.config, "run configuration file")->required();

  OracleArgs oracle_args;
  auto *oracle_cmd = app.add_subcommand("oracle", "exact diagnostics at desk scale");
  oracle_cmd->add_option("--config", oracle_args.config, "run configuration file")->required();
  oracle_cmd->add_option("--entropy-rows", oracle_args.entropy_rows,
                         "entropy of the first k rows of the ED ground state");
  oracle_cmd->add_option("--tv", oracle_args.tv_checkpoint,
                         "checkpoint for a sampler total-variation check");
  oracle_cmd->add_option("--tv-samples", oracle_args.tv_samples, "samples for the TV check");
  oracle_cmd->add_option("--seed", oracle_args.seed, "sampling seed");

  AreaLawArgs area_args;
  auto *area_cmd = app.add_subcommand("arealaw", "build and verify the area-law state");
  area_cmd->add_option("--L", area_args.L, "even lattice size")->required();
  area_cmd->add_option("--out", area_args.out, "optional output checkpoint");

  DiagnoseArgs diag_args;
  auto *diag_cmd = app.add_subcommand("diagnose", "correlation and term-share CSVs");
  diag_cmd->add_option("--in", diag_args.in, "checkpoint")->required();
  diag_cmd->add_option("-n", diag_args.n, "number of samples");
  diag_cmd->add_option("--seed", diag_args.seed, "sampling seed");
  diag_cmd->add_option("--ref-site", diag_args.ref_site, "correlation reference site");
  diag_cmd->add_option("--correlations", diag_args.correlations, "correlations CSV path");
  diag_cmd->add_option("--terms", diag_args.terms, "term-contribution CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (map_cmd->parsed()) return run_map(map_args);
    if (lift_cmd->parsed()) return run_lift(lift_args);
    if (train_cmd->parsed()) return run_train(train_args);
    if (sample_cmd->parsed()) return run_sample(sample_args);
    if (eval_cmd->parsed()) return run_evaluate(eval_args);
    if (oracle_cmd->parsed()) return run_oracle(oracle_args);
    if (area_cmd->parsed()) return run_arealaw(area_args);
    if (diag_cmd->parsed()) return run_diagnose(diag_args);
  } catch (const ConfigError &e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ShapeError &e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const FormatError &e) {
    std::cerr << "format error: " << e.what() << "\n";
    return kExitIo;
  } catch (const IoError &e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const NumericalError &e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitConfig;
}
