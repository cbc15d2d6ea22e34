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

#ifndef MPSRNN_CHECKPOINT_HPP
#define MPSRNN_CHECKPOINT_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mpsrnn/lattice.hpp"
#include "mpsrnn/mps.hpp"
#include "mpsrnn/params.hpp"
#include "mpsrnn/types.hpp"

namespace mpsrnn {

// Self-describing binary tensor container, shared by checkpoints, MPS files
// and statevector files:
//   ASCII line "MPSRNN 1\n"
//   UTF-8 "key=value" metadata lines, terminated by one blank line
//   records: u32-LE name length, name bytes, u8 rank, rank x u64-LE dims,
//            u8 dtype (0 = float64, 1 = complex128 as interleaved re/im),
//            row-major payload
struct TensorRecord {
  std::string name;
  std::vector<std::uint64_t> dims;
  bool is_complex = true;
  std::vector<double> payload;  // interleaved re/im when complex

  std::uint64_t element_count() const;
};

struct TensorContainer {
  std::map<std::string, std::string> meta;
  std::vector<TensorRecord> records;

  void add_complex(const std::string &name, const std::vector<std::uint64_t> &dims,
                   const Complex *data_row_major);
  void add_matrix(const std::string &name, const MatrixXcd &m);  // row-major on disk
  void add_vector(const std::string &name, const VectorXcd &v);
  void add_scalar(const std::string &name, Complex value);
  void add_real_vector(const std::string &name, const VectorXd &v);

  const TensorRecord *find(const std::string &name) const;
  const TensorRecord &require(const std::string &name) const;
  MatrixXcd matrix(const std::string &name) const;
  VectorXcd vector(const std::string &name) const;
  Complex scalar(const std::string &name) const;
  VectorXd real_vector(const std::string &name) const;

  void save(const std::string &path) const;
  static TensorContainer load(const std::string &path);
};

struct CheckpointMeta {
  Variant variant = Variant::OneD;
  LatticeKind lattice_kind = LatticeKind::Chain;
  int L = 0;
  int chi = 0;
  int chi_core = 0;
  bool phase_enabled = true;
  std::uint64_t seed = 0;
  long step = 0;
};

/// Parameters and metadata, bit-exact on roundtrip. Loading validates the
/// header, every shape and the finiteness of log_eta; unknown metadata keys
/// are rejected as a version error.
void save_checkpoint(const std::string &path, const RnnParams &params,
                     const CheckpointMeta &meta);
std::pair<RnnParams, CheckpointMeta> load_checkpoint(const std::string &path);

/// MPS container with per-site records M_{i}_{s}, s in {0,1}.
void export_mps(const std::string &path, const Mps &mps);
Mps import_mps(const std::string &path);

/// Statevector container with a single rank-1 complex record "psi".
void export_statevector(const std::string &path, const VectorXcd &psi);
VectorXcd import_statevector(const std::string &path);

}  // namespace mpsrnn

#endif  // MPSRNN_CHECKPOINT_HPP
