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

#include "mpsrnn/mapping.hpp"

#include <cmath>
#include <random>

#include "doctest.h"
#include "mpsrnn/ansatz.hpp"
#include "mpsrnn/errors.hpp"
#include "test_util.hpp"

using namespace mpsrnn;
using mpsrnn::testing::random_config;
using mpsrnn::testing::random_mps;
using mpsrnn::testing::random_params;

namespace {

VectorXcd enumerate_amplitudes(const RnnParams &p, const Lattice &lat) {
  VectorXcd psi(1LL << p.num_sites);
  for (std::uint64_t n = 0; n < (1ULL << p.num_sites); ++n)
    psi(n) = evaluate_amplitude(p, lat, config_from_bits(n, p.num_sites)).psi();
  return psi;
}

VectorXcd enumerate_mps(const Mps &mps) {
  const int V = mps.num_sites();
  VectorXcd psi(1LL << V);
  for (std::uint64_t n = 0; n < (1ULL << V); ++n)
    psi(n) = contract_mps(mps, config_from_bits(n, V));
  return psi;
}

double max_conditional_difference(const RnnParams &a, const Lattice &lat_a,
                                  const RnnParams &b, const Lattice &lat_b) {
  const int V = a.num_sites;
  double worst = 0;
  for (std::uint64_t n = 0; n < (1ULL << V); ++n) {
    SpinConfig sigma = config_from_bits(n, V);
    AmplitudeTrace ta = evaluate_amplitude(a, lat_a, sigma);
    AmplitudeTrace tb = evaluate_amplitude(b, lat_b, sigma);
    worst = std::max(worst, (ta.cond_prob - tb.cond_prob).cwiseAbs().maxCoeff());
  }
  return worst;
}

// independent oracle: conditionals of the pure linear 2D recurrence, the
// object the block-transfer simulation reproduces
VectorXd linear_2d_conditionals(const RnnParams &p, const Lattice &lat,
                                const SpinConfig &sigma) {
  const int V = p.num_sites, chi = p.chi;
  std::vector<VectorXcd> u(V);
  const VectorXcd ones = VectorXcd::Ones(chi), zero = VectorXcd::Zero(chi);
  VectorXd cond(V);
  for (int i = 0; i < V; ++i) {
    auto [x, y] = lat.site_coords(i);
    auto [ph, pv] = lat.predecessors(x, y);
    const VectorXcd &hx =
        ph.is_site() ? u[ph.site] : (ph.tag == PredRef::Tag::Ones ? ones : zero);
    const VectorXcd &hy =
        pv.is_site() ? u[pv.site] : (pv.tag == PredRef::Tag::Ones ? ones : zero);
    VectorXcd up = p.Mx[i][0] * hx + p.My[i][0] * hy;
    VectorXcd dn = p.Mx[i][1] * hx + p.My[i][1] * hy;
    VectorXd eta = p.eta(i);
    const double q0 = (eta.array() * up.array().abs2()).sum();
    const double q1 = (eta.array() * dn.array().abs2()).sum();
    cond(i) = (sigma[i] == 0 ? q0 : q1) / (q0 + q1);
    u[i] = sigma[i] == 0 ? up : dn;
  }
  return cond;
}

double max_sim_error_vs_linear(const RnnParams &two_d, const RnnParams &sim,
                               const Lattice &lat) {
  double worst = 0;
  for (std::uint64_t n = 0; n < (1ULL << two_d.num_sites); ++n) {
    SpinConfig sigma = config_from_bits(n, two_d.num_sites);
    VectorXd want = linear_2d_conditionals(two_d, lat, sigma);
    AmplitudeTrace got = evaluate_amplitude(sim, lat, sigma);
    worst = std::max(worst, (got.cond_prob - want).cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace

TEST_CASE("mps_to_vanilla reproduces the normalized MPS, phase included") {
  SUBCASE("product state") {
    Mps mps;
    mps.site.resize(3);
    std::mt19937_64 rng(3);
    for (int i = 0; i < 3; ++i)
      for (int s = 0; s < 2; ++s)
        mps.site[i][s] = MatrixXcd::Constant(1, 1, mpsrnn::testing::random_cplx(rng));
    RnnParams vanilla = mps_to_vanilla(mps);
    Lattice lat(LatticeKind::Chain, 3);
    for (std::uint64_t n = 0; n < 8; ++n) {
      SpinConfig sigma = config_from_bits(n, 3);
      AmplitudeTrace t = evaluate_amplitude(vanilla, lat, sigma);
      for (int i = 0; i < 3; ++i) {
        const double a0 = std::norm(mps.site[i][0](0, 0));
        const double a1 = std::norm(mps.site[i][1](0, 0));
        const double expect = (sigma[i] == 0 ? a0 : a1) / (a0 + a1);
        CHECK(t.cond_prob(i) == doctest::Approx(expect).epsilon(1e-12));
      }
    }
  }

  SUBCASE("random MPS V=8 chi=4 over full enumeration") {
    Mps mps = random_mps(8, 4, 5);
    Lattice lat(LatticeKind::Chain, 8);
    RnnParams vanilla = mps_to_vanilla(mps);
    VectorXcd direct = enumerate_mps(mps);
    direct /= direct.norm();
    VectorXcd mapped = enumerate_amplitudes(vanilla, lat);
    const double scale = direct.cwiseAbs().maxCoeff();
    CHECK((mapped - direct).cwiseAbs().maxCoeff() <= 1e-10 * scale);
  }

  SUBCASE("rectangular MPS is padded and still exact") {
    VectorXcd psi(1 << 5);
    std::mt19937_64 rng(7);
    for (int n = 0; n < (1 << 5); ++n) psi(n) = mpsrnn::testing::random_cplx(rng);
    Mps mps = statevector_to_mps(psi, 4);
    RnnParams vanilla = mps_to_vanilla(mps);
    Lattice lat(LatticeKind::Chain, 5);
    VectorXcd mapped = enumerate_amplitudes(vanilla, lat);
    VectorXcd reference = psi / psi.norm();
    CHECK((mapped - reference).cwiseAbs().maxCoeff() <= 1e-10);
  }

  SUBCASE("attached gammas are PSD") {
    RnnParams vanilla = mps_to_vanilla(random_mps(6, 3, 9));
    for (const auto &g : vanilla.gamma) {
      Eigen::SelfAdjointEigenSolver<MatrixXcd> es(g, Eigen::EigenvaluesOnly);
      CHECK(es.eigenvalues().minCoeff() > -1e-12 * es.eigenvalues().cwiseAbs().maxCoeff());
    }
  }
}

TEST_CASE("gauge_absorb preserves conditionals and phases") {
  SUBCASE("diagonal gamma: eta are its entries") {
    RnnParams vanilla = RnnParams::make(Variant::Vanilla, 2, 2);
    vanilla.M[0][0] = MatrixXcd::Identity(2, 2);
    vanilla.M[0][1] = 2 * MatrixXcd::Identity(2, 2);
    vanilla.M[1][0] = MatrixXcd::Identity(2, 2);
    vanilla.M[1][1] = MatrixXcd::Identity(2, 2);
    vanilla.gamma[0] = Eigen::Vector2d(0.5, 2.0).asDiagonal();
    vanilla.gamma[1] = MatrixXcd::Ones(2, 2);
    RnnParams one_d = gauge_absorb(vanilla);
    VectorXd eta0 = one_d.eta(0);
    std::sort(eta0.data(), eta0.data() + 2);
    CHECK(eta0(0) == doctest::Approx(0.5));
    CHECK(eta0(1) == doctest::Approx(2.0));
  }

  SUBCASE("all-ones gamma has eigenvalues (chi, 0...)") {
    const int chi = 3;
    RnnParams vanilla = random_params(Variant::Vanilla, 2, chi, 11);
    vanilla.gamma[0] = MatrixXcd::Ones(chi, chi);
    RnnParams one_d = gauge_absorb(vanilla);
    VectorXd eta0 = one_d.eta(0);
    std::sort(eta0.data(), eta0.data() + chi);
    CHECK(eta0(chi - 1) == doctest::Approx(static_cast<double>(chi)));
    CHECK(eta0(0) < 1e-12);  // clamped rank-deficient directions
  }

  SUBCASE("random vanilla V=6 chi=3: amplitudes preserved by enumeration") {
    RnnParams vanilla = mps_to_vanilla(random_mps(6, 3, 13));
    RnnParams one_d = gauge_absorb(vanilla);
    Lattice lat(LatticeKind::Chain, 6);
    VectorXcd a = enumerate_amplitudes(vanilla, lat);
    VectorXcd b = enumerate_amplitudes(one_d, lat);
    CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(max_conditional_difference(vanilla, lat, one_d, lat) <= 1e-10);
  }
}

TEST_CASE("absorb_bias") {
  Lattice lat(LatticeKind::Chain, 6);

  SUBCASE("v = 0: block embedding leaves amplitudes bit-equal") {
    RnnParams one_d = gauge_absorb(mps_to_vanilla(random_mps(6, 2, 15)));
    REQUIRE(one_d.v[0][0].cwiseAbs().maxCoeff() == 0.0);
    RnnParams augmented = absorb_bias(one_d);
    CHECK(augmented.chi == 3);
    VectorXcd a = enumerate_amplitudes(one_d, lat);
    VectorXcd b = enumerate_amplitudes(augmented, lat);
    CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-12);
  }

  SUBCASE("pure-bias chain is the equivalent product state") {
    RnnParams one_d = RnnParams::make(Variant::OneD, 3, 1);
    std::mt19937_64 rng(17);
    for (int i = 0; i < 3; ++i)
      for (int s = 0; s < 2; ++s) one_d.v[i][s](0) = mpsrnn::testing::random_cplx(rng);
    one_d.phase_enabled = false;
    RnnParams augmented = absorb_bias(one_d);
    Lattice lat3(LatticeKind::Chain, 3);
    for (std::uint64_t n = 0; n < 8; ++n) {
      SpinConfig sigma = config_from_bits(n, 3);
      AmplitudeTrace t = evaluate_amplitude(augmented, lat3, sigma);
      for (int i = 0; i < 3; ++i) {
        const double q0 = std::norm(one_d.v[i][0](0)) * one_d.eta(i)(0);
        const double q1 = std::norm(one_d.v[i][1](0)) * one_d.eta(i)(0);
        const double expect = (sigma[i] == 0 ? q0 : q1) / (q0 + q1);
        CHECK(t.cond_prob(i) == doctest::Approx(expect).epsilon(1e-12));
      }
    }
  }

  // The augmented model is linear, so per-step normalization provably cannot
  // change it; the exact reference for v != 0 is therefore the plain affine
  // recurrence u_i = M u_{i-1} + v (no per-step normalization), evaluated
  // here as an independent oracle.
  SUBCASE("v != 0: equals the affine recurrence it embeds") {
    RnnParams one_d = random_params(Variant::OneD, 6, 2, 19);
    RnnParams augmented = absorb_bias(one_d);

    for (std::uint64_t n = 0; n < (1ULL << 6); ++n) {
      SpinConfig sigma = config_from_bits(n, 6);
      AmplitudeTrace got = evaluate_amplitude(augmented, lat, sigma);

      // oracle: unnormalized affine recurrence
      VectorXcd u = VectorXcd::Ones(2);
      double sum_phase = 0;
      VectorXd cond(6);
      for (int i = 0; i < 6; ++i) {
        VectorXcd u_up = one_d.M[i][0] * u + one_d.v[i][0];
        VectorXcd u_dn = one_d.M[i][1] * u + one_d.v[i][1];
        VectorXd eta = one_d.eta(i);
        const double q0 = (eta.array() * u_up.array().abs2()).sum();
        const double q1 = (eta.array() * u_dn.array().abs2()).sum();
        cond(i) = (sigma[i] == 0 ? q0 : q1) / (q0 + q1);
        u = sigma[i] == 0 ? u_up : u_dn;
        Complex z = one_d.w[i][sigma[i]].transpose() * u;
        z += one_d.c[i][sigma[i]];
        sum_phase += std::arg(z);
      }
      CHECK((got.cond_prob - cond).cwiseAbs().maxCoeff() <= 1e-12);
      const double dphi =
          std::remainder(got.phase - sum_phase, 2 * 3.14159265358979323846);
      CHECK(std::abs(dphi) <= 1e-10);
    }
  }
}

TEST_CASE("hierarchy lifts") {
  Lattice lat(LatticeKind::Square, 3);
  RnnParams one_d = random_params(Variant::OneD, 9, 2, 21);

  SUBCASE("1D -> 2D at zero noise is exact") {
    RnnParams two_d = lift_1d_to_2d(one_d, lat, 0.0, 1);
    VectorXcd a = enumerate_amplitudes(one_d, lat);
    VectorXcd b = enumerate_amplitudes(two_d, lat);
    CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("1D -> 2D with 1e-7 noise stays within 1e-5 relative") {
    RnnParams two_d = lift_1d_to_2d(one_d, lat, 1e-7, 1);
    VectorXcd a = enumerate_amplitudes(one_d, lat);
    VectorXcd b = enumerate_amplitudes(two_d, lat);
    const double scale = a.cwiseAbs().maxCoeff();
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-5 * scale);
    CHECK((a - b).cwiseAbs().maxCoeff() > 0.0);
  }

  SUBCASE("lifts are seed-reproducible") {
    RnnParams a = lift_1d_to_2d(one_d, lat, 1e-7, 42);
    RnnParams b = lift_1d_to_2d(one_d, lat, 1e-7, 42);
    RnnParams c = lift_1d_to_2d(one_d, lat, 1e-7, 43);
    bool equal = true, differs = false;
    for (int i = 0; i < 9; ++i)
      for (int s = 0; s < 2; ++s) {
        equal = equal && a.Mx[i][s] == b.Mx[i][s] && a.My[i][s] == b.My[i][s];
        differs = differs || a.Mx[i][s] != c.Mx[i][s] || a.My[i][s] != c.My[i][s];
      }
    CHECK(equal);
    CHECK(differs);
  }

  SUBCASE("2D -> tensor at zero noise is exact, small noise drifts slightly") {
    RnnParams two_d = lift_1d_to_2d(one_d, lat, 1e-7, 1);
    RnnParams tensor0 = lift_2d_to_tensor(two_d, 0.0, 2);
    VectorXcd a = enumerate_amplitudes(two_d, lat);
    VectorXcd b = enumerate_amplitudes(tensor0, lat);
    CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);

    RnnParams tensor = lift_2d_to_tensor(two_d, 1e-7, 2);
    VectorXcd c = enumerate_amplitudes(tensor, lat);
    CHECK((a - c).cwiseAbs().maxCoeff() < 1e-4);
    CHECK((a - c).cwiseAbs().maxCoeff() > 0.0);
  }

  SUBCASE("2D -> compressed tensor at zero noise is exact") {
    RnnParams two_d = lift_1d_to_2d(one_d, lat, 1e-7, 1);
    RnnParams comp = lift_2d_to_compressed(two_d, 0.0, 3);
    CHECK(comp.chi_core == tucker_core_dim(two_d.chi));
    VectorXcd a = enumerate_amplitudes(two_d, lat);
    VectorXcd b = enumerate_amplitudes(comp, lat);
    CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("chi = 8 lifts to chi' = 4") {
    RnnParams one_d8 = random_params(Variant::OneD, 9, 8, 23);
    RnnParams two_d8 = lift_1d_to_2d(one_d8, lat, 0.0, 1);
    RnnParams comp8 = lift_2d_to_compressed(two_d8, 0.0, 1);
    CHECK(comp8.chi_core == 4);
  }
}

TEST_CASE("simulate_2d_as_1d") {
  // The block construction reproduces the linear 2D recurrence exactly. In a
  // chain the per-step normalization rescales the single memory by a common
  // positive factor, so the simulation evaluated normally still yields the
  // linear recurrence's conditionals; the 2D evaluator itself mixes two
  // memories with different accumulated normalizers and is compared through
  // the linear oracle.
  SUBCASE("scalar (chi=1) blocks pass through") {
    Lattice lat(LatticeKind::Square, 2);
    RnnParams two_d = RnnParams::make(Variant::TwoD, 4, 1);
    for (int i = 0; i < 4; ++i)
      for (int s = 0; s < 2; ++s) {
        two_d.Mx[i][s](0, 0) = Complex(1 + 0.1 * i + 0.2 * s, 0);
        two_d.My[i][s](0, 0) = Complex(0.3 + 0.05 * i - 0.1 * s, 0);
      }
    two_d.phase_enabled = false;
    RnnParams sim = simulate_2d_as_1d(two_d, lat);
    CHECK(sim.chi == 2);
    CHECK(max_sim_error_vs_linear(two_d, sim, lat) <= 1e-12);
  }

  SUBCASE("random 3x3 chi=2: conditionals equal over all 512 configs") {
    Lattice lat(LatticeKind::Square, 3);
    RnnParams two_d = random_params(Variant::TwoD, 9, 2, 25);
    for (int i = 0; i < 9; ++i)
      for (int s = 0; s < 2; ++s) two_d.v[i][s].setZero();
    RnnParams sim = simulate_2d_as_1d(two_d, lat);
    CHECK(sim.chi == 3 * 2);  // bond dimension exactly L * chi
    CHECK(max_sim_error_vs_linear(two_d, sim, lat) <= 1e-10);
  }

  SUBCASE("single-path 2D models match the plain evaluator as well") {
    // with My = 0 away from row starts there is no two-memory mixing, so the
    // normalized 2D evaluator coincides with the linear recurrence
    Lattice lat(LatticeKind::Square, 3);
    RnnParams one_d = random_params(Variant::OneD, 9, 2, 26);
    for (int i = 0; i < 9; ++i)
      for (int s = 0; s < 2; ++s) one_d.v[i][s].setZero();
    RnnParams two_d = lift_1d_to_2d(one_d, lat, 0.0, 1);
    RnnParams sim = simulate_2d_as_1d(two_d, lat);
    CHECK(max_conditional_difference(two_d, lat, sim, lat) <= 1e-12);
  }

  SUBCASE("nonzero bias is rejected") {
    Lattice lat(LatticeKind::Square, 2);
    RnnParams two_d = random_params(Variant::TwoD, 4, 2, 27);
    CHECK_THROWS_AS(simulate_2d_as_1d(two_d, lat), ShapeError);
  }
}

TEST_CASE("tucker compression") {
  SUBCASE("zero tensor gives zero core") {
    RnnParams tensor = random_params(Variant::Tensor, 4, 3, 29);
    for (int i = 0; i < 4; ++i)
      for (int s = 0; s < 2; ++s) tensor.T[i][s].setZero();
    RnnParams comp = tucker_compress(tensor);
    for (int i = 0; i < 4; ++i)
      for (int s = 0; s < 2; ++s) CHECK(comp.K[i][s].cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("core dimension rule") {
    CHECK(tucker_core_dim(1) == 1);
    CHECK(tucker_core_dim(8) == 4);
    CHECK(tucker_core_dim(10) == 5);
    CHECK(tucker_core_dim(27) == 9);
    for (int chi = 1; chi <= 64; ++chi) {
      const int expect = static_cast<int>(std::ceil(std::pow(static_cast<double>(chi), 2.0 / 3.0) -
                                                    1e-9));
      CHECK(tucker_core_dim(chi) == expect);
    }
  }

  SUBCASE("full-rank compress/expand reconstructs T") {
    // chi = 3 has chi' = 3 (full rank), HOSVD must be exact
    RnnParams tensor = random_params(Variant::Tensor, 4, 3, 31);
    RnnParams comp = tucker_compress(tensor);
    REQUIRE(comp.chi_core == 3);
    RnnParams back = tucker_expand(comp);
    for (int i = 0; i < 4; ++i)
      for (int s = 0; s < 2; ++s) {
        const double scale = tensor.T[i][s].norm();
        CHECK((back.T[i][s] - tensor.T[i][s]).norm() <= 1e-10 * scale);
      }
    // and the other readout fields ride along untouched
    Lattice lat(LatticeKind::Square, 2);
    VectorXcd a = enumerate_amplitudes(tensor, lat);
    VectorXcd b = enumerate_amplitudes(back, lat);
    CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-12);
  }

  SUBCASE("compressed evaluation agrees with expanded evaluation") {
    RnnParams tensor = random_params(Variant::Tensor, 4, 3, 33);
    RnnParams comp = tucker_compress(tensor);
    Lattice lat(LatticeKind::Square, 2);
    VectorXcd a = enumerate_amplitudes(comp, lat);
    VectorXcd b = enumerate_amplitudes(tucker_expand(comp), lat);
    CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-11);
  }
}

TEST_CASE("area-law construction") {
  SUBCASE("L = 2: uniform over configurations with equal rows") {
    RnnParams p = build_area_law_params(2);
    Lattice lat(LatticeKind::Square, 2);
    for (std::uint64_t n = 0; n < 16; ++n) {
      SpinConfig sigma = config_from_bits(n, 4);
      // snake order on 2x2: (0,0), (1,0), (1,1), (0,1)
      const bool support = sigma[0] == sigma[3] && sigma[1] == sigma[2];
      AmplitudeTrace t = evaluate_amplitude(p, lat, sigma);
      if (support)
        CHECK(std::norm(t.psi()) == doctest::Approx(0.25).epsilon(1e-12));
      else
        CHECK(std::norm(t.psi()) == 0.0);
    }
  }

  SUBCASE("L = 4: support pattern and uniform weight 2^-12") {
    RnnParams p = build_area_law_params(4);
    Lattice lat(LatticeKind::Square, 4);
    long on_support = 0;
    for (std::uint64_t n = 0; n < (1ULL << 16); ++n) {
      SpinConfig sigma = config_from_bits(n, 16);
      bool support = true;
      for (int x = 0; x < 4; ++x)
        support = support &&
                  sigma[lat.snake_index(x, 0)] == sigma[lat.snake_index(x, 3)];
      AmplitudeTrace t = evaluate_amplitude(p, lat, sigma);
      if (support) {
        ++on_support;
        CHECK(std::norm(t.psi()) == doctest::Approx(std::pow(2.0, -12)).epsilon(1e-10));
        CHECK(std::abs(t.phase) < 1e-12);
      } else {
        CHECK(std::norm(t.psi()) == 0.0);
      }
    }
    CHECK(on_support == (1L << 12));
  }

  SUBCASE("odd L rejected") { CHECK_THROWS_AS(build_area_law_params(3), ConfigError); }
}

TEST_CASE("full hierarchy chain preserves conditionals end to end") {
  // MPS -> vanilla -> 1D (gauge) -> 2D (zero noise) -> tensor (zero noise)
  Lattice lat(LatticeKind::Square, 3);
  Mps mps = random_mps(9, 4, 35);
  RnnParams vanilla = mps_to_vanilla(mps);
  RnnParams one_d = gauge_absorb(vanilla);
  RnnParams two_d = lift_1d_to_2d(one_d, lat, 0.0, 1);
  RnnParams tensor = lift_2d_to_tensor(two_d, 0.0, 1);

  VectorXcd reference = enumerate_mps(mps);
  reference /= reference.norm();
  for (const RnnParams *p : {&vanilla, &one_d, &two_d, &tensor}) {
    VectorXcd mapped = enumerate_amplitudes(*p, lat);
    CHECK((mapped - reference).cwiseAbs().maxCoeff() <= 1e-10);
  }
  CHECK(max_conditional_difference(vanilla, lat, tensor, lat) <= 1e-10);
}
