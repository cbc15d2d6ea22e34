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

#include "mpsrnn/mps.hpp"

#include <random>

#include "doctest.h"
#include "mpsrnn/errors.hpp"
#include "test_util.hpp"

using namespace mpsrnn;
using mpsrnn::testing::random_mps;

namespace {

// independent oracle: sum over all bond indices of the matrix-element product
Complex contract_by_index_loops(const Mps &mps, const SpinConfig &sigma) {
  const int V = mps.num_sites();
  std::vector<int> bonds(V + 1);
  for (int b = 0; b <= V; ++b) bonds[b] = mps.bond_dim(b);

  std::vector<int> idx(V + 1, 0);
  Complex total(0, 0);
  while (true) {
    Complex prod(1, 0);
    for (int i = 0; i < V; ++i) prod *= mps.site[i][sigma[i]](idx[i + 1], idx[i]);
    total += prod;
    int k = 0;
    while (k <= V && ++idx[k] == bonds[k]) idx[k++] = 0;
    if (k > V) break;
  }
  return total;
}

}  // namespace

TEST_CASE("contract_mps basics") {
  SUBCASE("single site") {
    Mps mps;
    mps.site.resize(1);
    mps.site[0][0] = MatrixXcd::Constant(1, 1, Complex(2, 0));
    mps.site[0][1] = MatrixXcd::Constant(1, 1, Complex(3, 0));
    CHECK(contract_mps(mps, {0}) == Complex(2, 0));
    CHECK(contract_mps(mps, {1}) == Complex(3, 0));
  }

  SUBCASE("identity matrices give psi = 1") {
    Mps mps;
    mps.site.resize(2);
    for (int i = 0; i < 2; ++i)
      for (int s = 0; s < 2; ++s) mps.site[i][s] = MatrixXcd::Identity(1, 1);
    for (std::uint64_t n = 0; n < 4; ++n)
      CHECK(contract_mps(mps, config_from_bits(n, 2)) == Complex(1, 0));
  }

  SUBCASE("random V=6 chi=4 equals brute-force index loops") {
    Mps mps = random_mps(6, 4, 7);
    std::mt19937_64 rng(9);
    for (int rep = 0; rep < 5; ++rep) {
      SpinConfig sigma = mpsrnn::testing::random_config(6, rng);
      Complex fast = contract_mps(mps, sigma);
      Complex slow = contract_by_index_loops(mps, sigma);
      CHECK(std::abs(fast - slow) <= 1e-10 * std::max(1.0, std::abs(slow)));
    }
  }
}

TEST_CASE("gamma_from_mps") {
  SUBCASE("seed is the all-ones matrix") {
    Mps mps = random_mps(3, 2, 13);
    auto gamma = gamma_from_mps(mps);
    CHECK(gamma[2].isApprox(MatrixXcd::Ones(2, 2)));
  }

  SUBCASE("single-term recursion at chi=1") {
    Mps mps;
    mps.site.resize(2);
    const Complex a(0.4, 0.3), b(-1.2, 0.8);
    mps.site[0][0] = MatrixXcd::Constant(1, 1, Complex(1, 0));
    mps.site[0][1] = MatrixXcd::Constant(1, 1, Complex(1, 0));
    mps.site[1][0] = MatrixXcd::Constant(1, 1, a);
    mps.site[1][1] = MatrixXcd::Constant(1, 1, b);
    auto gamma = gamma_from_mps(mps);
    CHECK(gamma[0](0, 0).real() == doctest::Approx(std::norm(a) + std::norm(b)));
    CHECK(gamma[0](0, 0).imag() == doctest::Approx(0.0));
  }

  SUBCASE("recursion equals the exhaustive traced-out sum") {
    const int V = 5, chi = 3;
    Mps mps = random_mps(V, chi, 17);
    auto gamma = gamma_from_mps(mps);

    for (int i = 0; i < V; ++i) {
      // direct: sum over all spin strings sigma_{i+1..V-1} of
      // conj(ones^T P)_t (ones^T P)_s with P the product of the traced sites
      MatrixXcd direct = MatrixXcd::Zero(chi, chi);
      const int tail = V - 1 - i;
      for (std::uint64_t bits = 0; bits < (1ULL << tail); ++bits) {
        Eigen::RowVectorXcd row = Eigen::RowVectorXcd::Ones(chi);
        for (int j = V - 1; j > i; --j) row = row * mps.site[j][(bits >> (j - i - 1)) & 1];
        direct += row.adjoint() * row;
      }
      CHECK((gamma[i] - direct).cwiseAbs().maxCoeff() <
            1e-10 * std::max(1.0, direct.cwiseAbs().maxCoeff()));
    }
  }

  SUBCASE("every gamma is Hermitian PSD") {
    Mps mps = random_mps(4, 3, 19);
    for (const auto &g : gamma_from_mps(mps)) {
      CHECK((g - g.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
      Eigen::SelfAdjointEigenSolver<MatrixXcd> es(g, Eigen::EigenvaluesOnly);
      CHECK(es.eigenvalues().minCoeff() > -1e-12);
    }
  }
}

TEST_CASE("statevector_to_mps") {
  SUBCASE("product state factorizes exactly at chi_max = 1") {
    const int V = 5;
    std::mt19937_64 rng(23);
    std::vector<std::array<Complex, 2>> local(V);
    for (int i = 0; i < V; ++i)
      for (int s = 0; s < 2; ++s) local[i][s] = mpsrnn::testing::random_cplx(rng);
    VectorXcd psi(1 << V);
    for (std::uint64_t n = 0; n < (1ULL << V); ++n) {
      Complex a(1, 0);
      for (int i = 0; i < V; ++i) a *= local[i][(n >> i) & 1];
      psi(n) = a;
    }
    Mps mps = statevector_to_mps(psi, 1);
    CHECK(mps.max_bond_dim() == 1);
    for (std::uint64_t n = 0; n < (1ULL << V); ++n) {
      Complex got = contract_mps(mps, config_from_bits(n, V));
      CHECK(std::abs(got - psi(n)) < 1e-12);
    }
  }

  SUBCASE("Bell pair: exact at chi 2, fidelity 1/2 at chi 1") {
    VectorXcd bell = VectorXcd::Zero(4);
    bell(0) = 1.0 / std::sqrt(2.0);  // |up,up>
    bell(3) = 1.0 / std::sqrt(2.0);  // |down,down>

    Mps exact = statevector_to_mps(bell, 2);
    for (std::uint64_t n = 0; n < 4; ++n)
      CHECK(std::abs(contract_mps(exact, config_from_bits(n, 2)) - bell(n)) < 1e-12);

    std::vector<double> discarded;
    Mps truncated = statevector_to_mps(bell, 1, &discarded);
    REQUIRE(discarded.size() == 1);
    CHECK(discarded[0] == doctest::Approx(0.5));  // one Schmidt value dropped
    VectorXcd approx(4);
    for (std::uint64_t n = 0; n < 4; ++n)
      approx(n) = contract_mps(truncated, config_from_bits(n, 2));
    const double fidelity2 = std::norm(bell.dot(approx)) / approx.squaredNorm();
    CHECK(fidelity2 == doctest::Approx(0.5).epsilon(1e-10));
  }

  SUBCASE("random V=8 state reconstructs exactly at chi_max = 16") {
    std::mt19937_64 rng(29);
    VectorXcd psi(1 << 8);
    for (int n = 0; n < (1 << 8); ++n) psi(n) = mpsrnn::testing::random_cplx(rng);
    Mps mps = statevector_to_mps(psi, 16);
    for (int n = 0; n < (1 << 8); ++n) {
      Complex got = contract_mps(mps, config_from_bits(n, 8));
      CHECK(std::abs(got - psi(n)) <= 1e-10 * psi.cwiseAbs().maxCoeff());
    }
  }

  SUBCASE("rejects bad input") {
    CHECK_THROWS_AS(statevector_to_mps(VectorXcd::Zero(8), 4), NumericalError);
    CHECK_THROWS_AS(statevector_to_mps(VectorXcd::Ones(8), 0), ShapeError);
    CHECK_THROWS_AS(statevector_to_mps(VectorXcd::Ones(6), 2), ShapeError);
  }
}

TEST_CASE("pad_to_uniform preserves amplitudes") {
  VectorXcd psi(1 << 4);
  std::mt19937_64 rng(31);
  for (int n = 0; n < (1 << 4); ++n) psi(n) = mpsrnn::testing::random_cplx(rng);
  Mps mps = statevector_to_mps(psi, 3);  // rectangular bonds
  Mps uniform = pad_to_uniform(mps);
  CHECK(uniform.bond_dim(0) == uniform.max_bond_dim());
  std::mt19937_64 rng2(33);
  for (int rep = 0; rep < 8; ++rep) {
    SpinConfig sigma = mpsrnn::testing::random_config(4, rng2);
    CHECK(std::abs(contract_mps(mps, sigma) - contract_mps(uniform, sigma)) < 1e-12);
  }
}
