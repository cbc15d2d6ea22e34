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

#include "mpsrnn/checkpoint.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <set>

#include "mpsrnn/errors.hpp"

namespace mpsrnn {

namespace {

constexpr char kMagic[] = "MPSRNN 1";

void write_u32(std::ostream &os, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
  os.write(reinterpret_cast<const char *>(b), 4);
}

void write_u64(std::ostream &os, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
  os.write(reinterpret_cast<const char *>(b), 8);
}

bool read_exact(std::istream &is, void *dst, std::size_t n) {
  is.read(reinterpret_cast<char *>(dst), static_cast<std::streamsize>(n));
  return static_cast<std::size_t>(is.gcount()) == n;
}

std::uint32_t read_u32(std::istream &is) {
  unsigned char b[4];
  if (!read_exact(is, b, 4)) throw FormatError(FormatError::Code::Truncated, "truncated record header");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

std::uint64_t read_u64(std::istream &is) {
  unsigned char b[8];
  if (!read_exact(is, b, 8)) throw FormatError(FormatError::Code::Truncated, "truncated record dims");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

}  // namespace

std::uint64_t TensorRecord::element_count() const {
  std::uint64_t n = 1;
  for (auto d : dims) n *= d;
  return n;
}

void TensorContainer::add_complex(const std::string &name,
                                  const std::vector<std::uint64_t> &dims,
                                  const Complex *data_row_major) {
  TensorRecord rec;
  rec.name = name;
  rec.dims = dims;
  rec.is_complex = true;
  rec.payload.resize(2 * rec.element_count());
  for (std::uint64_t k = 0; k < rec.element_count(); ++k) {
    rec.payload[2 * k] = data_row_major[k].real();
    rec.payload[2 * k + 1] = data_row_major[k].imag();
  }
  records.push_back(std::move(rec));
}

void TensorContainer::add_matrix(const std::string &name, const MatrixXcd &m) {
  Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = m;
  add_complex(name, {static_cast<std::uint64_t>(m.rows()), static_cast<std::uint64_t>(m.cols())},
              rm.data());
}

void TensorContainer::add_vector(const std::string &name, const VectorXcd &v) {
  add_complex(name, {static_cast<std::uint64_t>(v.size())}, v.data());
}

void TensorContainer::add_scalar(const std::string &name, Complex value) {
  add_complex(name, {}, &value);
}

void TensorContainer::add_real_vector(const std::string &name, const VectorXd &v) {
  TensorRecord rec;
  rec.name = name;
  rec.dims = {static_cast<std::uint64_t>(v.size())};
  rec.is_complex = false;
  rec.payload.assign(v.data(), v.data() + v.size());
  records.push_back(std::move(rec));
}

const TensorRecord *TensorContainer::find(const std::string &name) const {
  for (const auto &rec : records)
    if (rec.name == name) return &rec;
  return nullptr;
}

const TensorRecord &TensorContainer::require(const std::string &name) const {
  const TensorRecord *rec = find(name);
  if (!rec) throw FormatError(FormatError::Code::MissingEntry, "missing record: " + name);
  return *rec;
}

MatrixXcd TensorContainer::matrix(const std::string &name) const {
  const TensorRecord &rec = require(name);
  if (rec.dims.size() != 2 || !rec.is_complex)
    throw FormatError(FormatError::Code::BadShape, name + " is not a complex matrix");
  MatrixXcd m(rec.dims[0], rec.dims[1]);
  for (std::uint64_t r = 0; r < rec.dims[0]; ++r)
    for (std::uint64_t c = 0; c < rec.dims[1]; ++c) {
      const std::uint64_t k = r * rec.dims[1] + c;
      m(r, c) = Complex(rec.payload[2 * k], rec.payload[2 * k + 1]);
    }
  return m;
}

VectorXcd TensorContainer::vector(const std::string &name) const {
  const TensorRecord &rec = require(name);
  if (rec.dims.size() != 1 || !rec.is_complex)
    throw FormatError(FormatError::Code::BadShape, name + " is not a complex vector");
  VectorXcd v(rec.dims[0]);
  for (std::uint64_t k = 0; k < rec.dims[0]; ++k)
    v(k) = Complex(rec.payload[2 * k], rec.payload[2 * k + 1]);
  return v;
}

Complex TensorContainer::scalar(const std::string &name) const {
  const TensorRecord &rec = require(name);
  if (!rec.dims.empty() || !rec.is_complex)
    throw FormatError(FormatError::Code::BadShape, name + " is not a complex scalar");
  return {rec.payload[0], rec.payload[1]};
}

VectorXd TensorContainer::real_vector(const std::string &name) const {
  const TensorRecord &rec = require(name);
  if (rec.dims.size() != 1 || rec.is_complex)
    throw FormatError(FormatError::Code::BadShape, name + " is not a real vector");
  VectorXd v(rec.dims[0]);
  for (std::uint64_t k = 0; k < rec.dims[0]; ++k) v(k) = rec.payload[k];
  return v;
}

void TensorContainer::save(const std::string &path) const {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open " + path + " for writing");
  os << kMagic << "\n";
  for (const auto &[key, value] : meta) os << key << "=" << value << "\n";
  os << "\n";
  for (const auto &rec : records) {
    write_u32(os, static_cast<std::uint32_t>(rec.name.size()));
    os.write(rec.name.data(), static_cast<std::streamsize>(rec.name.size()));
    const unsigned char rank = static_cast<unsigned char>(rec.dims.size());
    os.write(reinterpret_cast<const char *>(&rank), 1);
    for (auto d : rec.dims) write_u64(os, d);
    const unsigned char dtype = rec.is_complex ? 1 : 0;
    os.write(reinterpret_cast<const char *>(&dtype), 1);
    os.write(reinterpret_cast<const char *>(rec.payload.data()),
             static_cast<std::streamsize>(rec.payload.size() * sizeof(double)));
  }
  if (!os) throw IoError("write failure on " + path);
}

TensorContainer TensorContainer::load(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path);

  std::string line;
  if (!std::getline(is, line) || line != kMagic) {
    if (line.rfind("MPSRNN ", 0) == 0)
      throw FormatError(FormatError::Code::BadVersion, "unsupported format version: " + line);
    throw FormatError(FormatError::Code::BadMagic, "not a tensor container: " + path);
  }

  TensorContainer tc;
  while (std::getline(is, line)) {
    if (line.empty()) break;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw FormatError(FormatError::Code::BadValue, "malformed metadata line: " + line);
    tc.meta[line.substr(0, eq)] = line.substr(eq + 1);
  }

  while (true) {
    int peek = is.peek();
    if (peek == std::char_traits<char>::eof()) break;
    TensorRecord rec;
    const std::uint32_t name_len = read_u32(is);
    if (name_len > (1u << 20))
      throw FormatError(FormatError::Code::BadValue, "implausible record name length");
    rec.name.resize(name_len);
    if (!read_exact(is, rec.name.data(), name_len))
      throw FormatError(FormatError::Code::Truncated, "truncated record name");
    unsigned char rank;
    if (!read_exact(is, &rank, 1))
      throw FormatError(FormatError::Code::Truncated, "truncated record rank");
    rec.dims.resize(rank);
    for (int k = 0; k < rank; ++k) rec.dims[k] = read_u64(is);
    unsigned char dtype;
    if (!read_exact(is, &dtype, 1))
      throw FormatError(FormatError::Code::Truncated, "truncated record dtype");
    if (dtype > 1) throw FormatError(FormatError::Code::BadValue, "unknown dtype tag");
    rec.is_complex = dtype == 1;
    const std::uint64_t doubles = rec.element_count() * (rec.is_complex ? 2 : 1);
    if (doubles > (1ULL << 32))
      throw FormatError(FormatError::Code::BadValue, "implausible record size");
    rec.payload.resize(doubles);
    if (!read_exact(is, rec.payload.data(), doubles * sizeof(double)))
      throw FormatError(FormatError::Code::Truncated, "truncated payload in " + rec.name);
    tc.records.push_back(std::move(rec));
  }
  return tc;
}

namespace {

std::string site_name(const char *base, int i, int s) {
  return std::string(base) + "_" + std::to_string(i) + "_" + std::to_string(s);
}

void add_rank3(TensorContainer &tc, const std::string &name, const MatrixXcd &unfolded,
               int dim) {
  // in-memory mode-0 unfolding (s; t,u) -> row-major (s, t, u) payload
  std::vector<Complex> data(static_cast<std::size_t>(dim) * dim * dim);
  for (int s = 0; s < dim; ++s)
    for (int t = 0; t < dim; ++t)
      for (int u = 0; u < dim; ++u)
        data[(static_cast<std::size_t>(s) * dim + t) * dim + u] = unfolded(s, t * dim + u);
  tc.add_complex(name, {static_cast<std::uint64_t>(dim), static_cast<std::uint64_t>(dim),
                        static_cast<std::uint64_t>(dim)},
                 data.data());
}

MatrixXcd rank3_unfolded(const TensorContainer &tc, const std::string &name, int dim) {
  const TensorRecord &rec = tc.require(name);
  if (rec.dims.size() != 3 || !rec.is_complex ||
      rec.dims[0] != static_cast<std::uint64_t>(dim) || rec.dims[1] != rec.dims[0] ||
      rec.dims[2] != rec.dims[0])
    throw FormatError(FormatError::Code::BadShape, name + " has wrong shape");
  MatrixXcd m(dim, dim * dim);
  for (int s = 0; s < dim; ++s)
    for (int t = 0; t < dim; ++t)
      for (int u = 0; u < dim; ++u) {
        const std::size_t k = (static_cast<std::size_t>(s) * dim + t) * dim + u;
        m(s, t * dim + u) = Complex(rec.payload[2 * k], rec.payload[2 * k + 1]);
      }
  return m;
}

MatrixXcd checked_matrix(const TensorContainer &tc, const std::string &name, int rows,
                         int cols) {
  MatrixXcd m = tc.matrix(name);
  if (m.rows() != rows || m.cols() != cols)
    throw FormatError(FormatError::Code::BadShape, name + " has wrong shape");
  return m;
}

VectorXcd checked_vector(const TensorContainer &tc, const std::string &name, int n) {
  VectorXcd v = tc.vector(name);
  if (v.size() != n) throw FormatError(FormatError::Code::BadShape, name + " has wrong length");
  return v;
}

const std::set<std::string> kKnownMetaKeys = {"kind",  "variant", "lattice", "L",
                                              "chi",   "chi_core", "phase_enabled",
                                              "seed",  "step"};

}  // namespace

void save_checkpoint(const std::string &path, const RnnParams &params,
                     const CheckpointMeta &meta) {
  params.validate();
  TensorContainer tc;
  tc.meta["kind"] = "checkpoint";
  tc.meta["variant"] = to_string(params.variant);
  tc.meta["lattice"] = to_string(meta.lattice_kind);
  tc.meta["L"] = std::to_string(meta.L);
  tc.meta["chi"] = std::to_string(params.chi);
  tc.meta["chi_core"] = std::to_string(params.chi_core);
  tc.meta["phase_enabled"] = params.phase_enabled ? "1" : "0";
  tc.meta["seed"] = std::to_string(meta.seed);
  tc.meta["step"] = std::to_string(meta.step);

  for (int i = 0; i < params.num_sites; ++i) {
    for (int s = 0; s < 2; ++s) {
      switch (params.variant) {
        case Variant::Vanilla:
        case Variant::OneD:
          tc.add_matrix(site_name("M", i, s), params.M[i][s]);
          break;
        case Variant::TwoD:
          break;
        case Variant::Tensor:
          add_rank3(tc, site_name("T", i, s), params.T[i][s], params.chi);
          break;
        case Variant::CompressedTensor:
          add_rank3(tc, site_name("K", i, s), params.K[i][s], params.chi_core);
          tc.add_matrix(site_name("Uo", i, s), params.Uo[i][s]);
          tc.add_matrix(site_name("Ux", i, s), params.Ux[i][s]);
          tc.add_matrix(site_name("Uy", i, s), params.Uy[i][s]);
          break;
      }
      if (params.is_two_dimensional()) {
        tc.add_matrix(site_name("Mx", i, s), params.Mx[i][s]);
        tc.add_matrix(site_name("My", i, s), params.My[i][s]);
      }
      if (params.variant == Variant::Vanilla) continue;
      tc.add_vector(site_name("v", i, s), params.v[i][s]);
      tc.add_vector(site_name("w", i, s), params.w[i][s]);
      tc.add_scalar(site_name("c", i, s), params.c[i][s]);
    }
    if (params.variant == Variant::Vanilla)
      tc.add_matrix("gamma_" + std::to_string(i), params.gamma[i]);
    else
      tc.add_real_vector("log_eta_" + std::to_string(i), params.log_eta[i]);
  }
  tc.save(path);
}

std::pair<RnnParams, CheckpointMeta> load_checkpoint(const std::string &path) {
  TensorContainer tc = TensorContainer::load(path);
  auto meta_at = [&](const std::string &key) -> const std::string & {
    auto it = tc.meta.find(key);
    if (it == tc.meta.end())
      throw FormatError(FormatError::Code::MissingEntry, "missing metadata key: " + key);
    return it->second;
  };
  if (meta_at("kind") != "checkpoint")
    throw FormatError(FormatError::Code::BadValue, "container is not a checkpoint");
  for (const auto &[key, value] : tc.meta) {
    (void)value;
    if (!kKnownMetaKeys.count(key))
      throw FormatError(FormatError::Code::BadVersion,
                        "unknown checkpoint field (newer format?): " + key);
  }

  CheckpointMeta meta;
  meta.variant = variant_from_string(meta_at("variant"));
  meta.lattice_kind = lattice_kind_from_string(meta_at("lattice"));
  meta.L = std::stoi(meta_at("L"));
  meta.chi = std::stoi(meta_at("chi"));
  meta.chi_core = std::stoi(meta_at("chi_core"));
  meta.phase_enabled = meta_at("phase_enabled") == "1";
  meta.seed = std::stoull(meta_at("seed"));
  meta.step = std::stol(meta_at("step"));

  Lattice lattice(meta.lattice_kind, meta.L);
  const int V = lattice.num_sites();
  const int chi = meta.chi;
  RnnParams params = RnnParams::make(meta.variant, V, chi);
  params.phase_enabled = meta.phase_enabled;
  if (params.variant == Variant::CompressedTensor && params.chi_core != meta.chi_core)
    throw FormatError(FormatError::Code::BadShape, "chi_core inconsistent with chi");

  for (int i = 0; i < V; ++i) {
    for (int s = 0; s < 2; ++s) {
      switch (params.variant) {
        case Variant::Vanilla:
        case Variant::OneD:
          params.M[i][s] = checked_matrix(tc, site_name("M", i, s), chi, chi);
          break;
        case Variant::TwoD:
          break;
        case Variant::Tensor:
          params.T[i][s] = rank3_unfolded(tc, site_name("T", i, s), chi);
          break;
        case Variant::CompressedTensor:
          params.K[i][s] = rank3_unfolded(tc, site_name("K", i, s), params.chi_core);
          params.Uo[i][s] = checked_matrix(tc, site_name("Uo", i, s), chi, params.chi_core);
          params.Ux[i][s] = checked_matrix(tc, site_name("Ux", i, s), chi, params.chi_core);
          params.Uy[i][s] = checked_matrix(tc, site_name("Uy", i, s), chi, params.chi_core);
          break;
      }
      if (params.is_two_dimensional()) {
        params.Mx[i][s] = checked_matrix(tc, site_name("Mx", i, s), chi, chi);
        params.My[i][s] = checked_matrix(tc, site_name("My", i, s), chi, chi);
      }
      if (params.variant == Variant::Vanilla) continue;
      params.v[i][s] = checked_vector(tc, site_name("v", i, s), chi);
      params.w[i][s] = checked_vector(tc, site_name("w", i, s), chi);
      params.c[i][s] = tc.scalar(site_name("c", i, s));
    }
    if (params.variant == Variant::Vanilla) {
      params.gamma[i] = checked_matrix(tc, "gamma_" + std::to_string(i), chi, chi);
    } else {
      VectorXd le = tc.real_vector("log_eta_" + std::to_string(i));
      if (le.size() != chi)
        throw FormatError(FormatError::Code::BadShape, "log_eta has wrong length");
      if (!le.allFinite())
        throw FormatError(FormatError::Code::BadValue,
                          "log_eta not finite: eta would not be positive");
      params.log_eta[i] = le;
    }
  }
  params.validate();
  return {params, meta};
}

void export_mps(const std::string &path, const Mps &mps) {
  mps.validate();
  TensorContainer tc;
  tc.meta["kind"] = "mps";
  tc.meta["sites"] = std::to_string(mps.num_sites());
  for (int i = 0; i < mps.num_sites(); ++i)
    for (int s = 0; s < 2; ++s) tc.add_matrix(site_name("M", i, s), mps.site[i][s]);
  tc.save(path);
}

Mps import_mps(const std::string &path) {
  TensorContainer tc = TensorContainer::load(path);
  Mps mps;
  for (int i = 0;; ++i) {
    const TensorRecord *up = tc.find(site_name("M", i, 0));
    if (!up) {
      if (i == 0) throw FormatError(FormatError::Code::MissingEntry, "no MPS records found");
      break;
    }
    mps.site.push_back({tc.matrix(site_name("M", i, 0)), tc.matrix(site_name("M", i, 1))});
  }
  try {
    mps.validate();
  } catch (const ShapeError &e) {
    throw FormatError(FormatError::Code::BadShape, e.what());
  }
  return mps;
}

void export_statevector(const std::string &path, const VectorXcd &psi) {
  TensorContainer tc;
  tc.meta["kind"] = "statevector";
  tc.add_vector("psi", psi);
  tc.save(path);
}

VectorXcd import_statevector(const std::string &path) {
  TensorContainer tc = TensorContainer::load(path);
  return tc.vector("psi");
}

}  // namespace mpsrnn
