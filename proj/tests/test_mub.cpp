// Copyright 2026 The fewcopy Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "fewcopy/mub.hpp"
#include "fewcopy/state_vector.hpp"

using namespace fewcopy;

namespace {

const std::vector<int> kSupportedDims = {2, 3, 4, 5, 7, 8, 11, 13, 16, 17, 19, 23, 29, 31, 32};

Eigen::MatrixXcd random_hermitian(int d, std::mt19937_64 &rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXcd m(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) m(i, j) = std::complex<double>(g(rng), g(rng));
  }
  return 0.5 * (m + m.adjoint().eval());
}

Eigen::MatrixXcd random_density(int d, std::mt19937_64 &rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXcd m(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) m(i, j) = std::complex<double>(g(rng), g(rng));
  }
  Eigen::MatrixXcd rho = m * m.adjoint();
  return rho / rho.trace().real();
}

}  // namespace

TEST_CASE("orthonormality and unbiasedness for all supported d <= 32", "[mub]") {
  for (int d : kSupportedDims) {
    MubFamily fam = build_mub(d);
    for (int m = 1; m <= d + 1; ++m) {
      Eigen::MatrixXcd gram = fam.basis(m).adjoint() * fam.basis(m);
      REQUIRE((gram - Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-10);
    }
    for (int m = 1; m <= d + 1; ++m) {
      for (int mm = m + 1; mm <= d + 1; ++mm) {
        Eigen::MatrixXd overlap = (fam.basis(m).adjoint() * fam.basis(mm)).cwiseAbs2();
        REQUIRE((overlap.array() - 1.0 / d).abs().maxCoeff() < 1e-10);
      }
    }
  }
}

TEST_CASE("d=2 family is the computational, X and Y bases", "[mub]") {
  MubFamily fam = build_mub(2);
  const double s = 1.0 / std::sqrt(2.0);
  REQUIRE((fam.basis(1) - Eigen::MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
  Eigen::MatrixXcd x(2, 2), y(2, 2);
  x << s, s, s, -s;
  y << s, s, std::complex<double>(0, s), std::complex<double>(0, -s);
  REQUIRE((fam.basis(2) - x).cwiseAbs().maxCoeff() < 1e-12);
  REQUIRE((fam.basis(3) - y).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("alpha coefficients have unit modulus", "[mub]") {
  for (int d : {2, 3, 4, 5, 8, 13}) {
    MubFamily fam = build_mub(d);
    for (int m = 2; m <= d + 1; ++m) {
      for (int k = 0; k < d; ++k) {
        for (int l = 0; l < d; ++l) {
          REQUIRE(std::abs(std::abs(fam.alpha(l, k, m)) - 1.0) < 1e-10);
        }
      }
    }
  }
}

TEST_CASE("unsupported composite dimensions are rejected", "[mub]") {
  for (int d : {6, 9, 10, 12, 15, 18, 21, 25, 27}) {
    REQUIRE_THROWS_AS(build_mub(d), std::invalid_argument);
  }
  REQUIRE_THROWS_AS(build_mub(1), std::invalid_argument);
}

TEST_CASE("operator decomposition reconstructs", "[mub]") {
  std::mt19937_64 rng(101);

  // identity at d=2: every coefficient is 1
  MubFamily fam2 = build_mub(2);
  MubDecomposition dec = decompose_operator(Eigen::MatrixXcd::Identity(2, 2), fam2);
  REQUIRE((dec.coefficients.cwiseAbs().array() - 1.0).abs().maxCoeff() < 1e-10);
  REQUIRE((dec.reconstruct(fam2) - Eigen::MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff() <
          1e-10);

  // |1><0| at d=2 (not Hermitian) still round-trips
  Eigen::MatrixXcd unit = Eigen::MatrixXcd::Zero(2, 2);
  unit(1, 0) = 1.0;
  MubDecomposition du = decompose_operator(unit, fam2);
  REQUIRE((du.reconstruct(fam2) - unit).cwiseAbs().maxCoeff() < 1e-10);

  // random Hermitian at d=5
  MubFamily fam5 = build_mub(5);
  for (int t = 0; t < 20; ++t) {
    Eigen::MatrixXcd a = random_hermitian(5, rng);
    MubDecomposition d5 = decompose_operator(a, fam5);
    REQUIRE((d5.reconstruct(fam5) - a).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("reconstruction holds for 100 random operators per d <= 16", "[mub]") {
  std::mt19937_64 rng(103);
  for (int d : {2, 3, 4, 5, 7, 8, 11, 13, 16}) {
    MubFamily fam = build_mub(d);
    for (int t = 0; t < 100; ++t) {
      Eigen::MatrixXcd a = random_hermitian(d, rng);
      REQUIRE((decompose_operator(a, fam).reconstruct(fam) - a).cwiseAbs().maxCoeff() < 1e-8);
    }
  }
}

TEST_CASE("eta values on the d=2 X basis", "[mub]") {
  MubFamily fam = build_mub(2);
  // X basis is m=2; element k=0 is |+>, k=1 is |->
  REQUIRE(std::abs(eta(0, 1, 0, 2, fam) - std::complex<double>(1, 0)) < 1e-12);
  REQUIRE(std::abs(eta(0, 1, 1, 2, fam) - std::complex<double>(-1, 0)) < 1e-12);
  REQUIRE_THROWS_AS(eta(0, 0, 0, 2, fam), std::invalid_argument);
  REQUIRE_THROWS_AS(eta(0, 1, 0, 1, fam), std::invalid_argument);
}

TEST_CASE("eta has unit modulus everywhere", "[mub]") {
  for (int d : {3, 4, 5, 8}) {
    MubFamily fam = build_mub(d);
    for (int m = 2; m <= d + 1; ++m) {
      for (int k = 0; k < d; ++k) {
        for (int i = 0; i < d; ++i) {
          for (int j = 0; j < d; ++j) {
            if (i == j) continue;
            REQUIRE(std::abs(std::abs(eta(i, j, k, m, fam)) - 1.0) < 1e-10);
          }
        }
      }
    }
  }
}

TEST_CASE("exact estimator unbiasedness for d in {2,3,5}", "[mub]") {
  // summing eta against the exact POVM distribution reproduces rho_ij
  std::mt19937_64 rng(107);
  for (int d : {2, 3, 5}) {
    MubFamily fam = build_mub(d);
    for (int trial = 0; trial < 5; ++trial) {
      Eigen::MatrixXcd rho = random_density(d, rng);
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
          if (i == j) continue;
          std::complex<double> acc{0, 0};
          for (int m = 2; m <= d + 1; ++m) {
            for (int k = 0; k < d; ++k) {
              Eigen::VectorXcd v = fam.vector(k, m);
              double prob = ((v.adjoint() * rho * v).value().real()) / d;
              acc += prob * eta(i, j, k, m, fam);
            }
          }
          REQUIRE(std::abs(acc - rho(i, j)) < 1e-10);
        }
      }
    }
  }
}

TEST_CASE("povm sampling distributions", "[mub]") {
  std::mt19937_64 rng(109);
  MubFamily fam2 = build_mub(2);

  // |0>: m uniform on the two non-computational bases, k uniform given m
  std::vector<cplx> zero{1.0, 0.0};
  std::array<int, 6> cells{};
  const int shots = 10000;
  for (int i = 0; i < shots; ++i) {
    auto [k, m] = sample_mub_povm(std::span<const cplx>(zero), fam2, rng);
    cells[(m - 2) * 2 + k]++;
  }
  for (int c = 0; c < 4; ++c) {
    REQUIRE(std::abs(static_cast<double>(cells[c]) / shots - 0.25) < 0.02);
  }

  // |+> conditioned on the X basis always lands on k=0
  std::vector<cplx> plus{1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)};
  for (int i = 0; i < 2000; ++i) {
    auto [k, m] = sample_mub_povm(std::span<const cplx>(plus), fam2, rng);
    if (m == 2) REQUIRE(k == 0);
  }

  // maximally mixed emulation at d=3: all nine (k,m) cells at 1/9
  MubFamily fam3 = build_mub(3);
  std::array<int, 9> cells3{};
  const int shots3 = 100000;
  std::uniform_int_distribution<int> pick(0, 2);
  for (int i = 0; i < shots3; ++i) {
    std::vector<cplx> basis_state(3, cplx{0, 0});
    basis_state[pick(rng)] = 1.0;
    auto [k, m] = sample_mub_povm(std::span<const cplx>(basis_state), fam3, rng);
    cells3[(m - 2) * 3 + k]++;
  }
  for (int c = 0; c < 9; ++c) {
    REQUIRE(std::abs(static_cast<double>(cells3[c]) / shots3 - 1.0 / 9.0) < 0.01);
  }
}

TEST_CASE("n=2 paulis factor into five commuting groups diagonal in the MUBs", "[mub]") {
  // constructive grouping check for d = 4: each non-computational basis
  // diagonalizes exactly three of the fifteen nontrivial paulis, and the
  // computational basis the three Z-type words; groups partition the set
  MubFamily fam = build_mub(4);
  std::vector<Eigen::MatrixXcd> paulis;
  std::vector<Eigen::Matrix2cd> single(4);
  single[0] = Eigen::Matrix2cd::Identity();
  single[1] = (Eigen::Matrix2cd() << 0, 1, 1, 0).finished();
  single[2] = (Eigen::Matrix2cd() << 0, std::complex<double>(0, -1),
               std::complex<double>(0, 1), 0).finished();
  single[3] = (Eigen::Matrix2cd() << 1, 0, 0, -1).finished();
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      if (a == 0 && b == 0) continue;
      Eigen::MatrixXcd p(4, 4);
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) p.block<2, 2>(2 * i, 2 * j) = single[a](i, j) * single[b];
      }
      paulis.push_back(p);
    }
  }
  int total_assigned = 0;
  for (int m = 1; m <= 5; ++m) {
    int diagonalized = 0;
    for (const auto &p : paulis) {
      Eigen::MatrixXcd in_basis = fam.basis(m).adjoint() * p * fam.basis(m);
      Eigen::MatrixXcd off = in_basis;
      off.diagonal().setZero();
      if (off.cwiseAbs().maxCoeff() < 1e-10) ++diagonalized;
    }
    REQUIRE(diagonalized == 3);
    total_assigned += diagonalized;
  }
  REQUIRE(total_assigned == 15);
}
