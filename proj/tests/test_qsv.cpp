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

#include <cmath>

#include "fewcopy/qsv.hpp"

using namespace fewcopy;

TEST_CASE("singlet strategy has spectral gap 2/3", "[qsv]") {
  QsvStrategy s = singlet_xyz_strategy();
  REQUIRE(s.nu() == Catch::Approx(2.0 / 3.0).margin(1e-12));
  REQUIRE(s.second_eigenvalue() == Catch::Approx(1.0 / 3.0).margin(1e-12));

  // omega annihilates nothing but the singlet at eigenvalue 1
  StateVector singlet = prepare_singlet_product(1);
  REQUIRE(expectation(singlet, s.omega_hat()) == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("projector strategy has gap 1", "[qsv]") {
  QsvStrategy s = projector_strategy(prepare_ghz(2));
  REQUIRE(s.nu() == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("degenerate strategies are rejected", "[qsv]") {
  // two orthogonal +1 eigenvectors: projector onto a 2d subspace
  Eigen::MatrixXcd proj = Eigen::MatrixXcd::Zero(4, 4);
  proj(0, 0) = 1.0;
  proj(1, 1) = 1.0;
  REQUIRE_THROWS_AS(qsv_build_strategy({QsvSetting{1.0, ObservableMatrix(proj)}}),
                    std::invalid_argument);

  // probabilities must sum to one
  Eigen::MatrixXcd p0 = Eigen::MatrixXcd::Zero(2, 2);
  p0(0, 0) = 1.0;
  REQUIRE_THROWS_AS(qsv_build_strategy({QsvSetting{0.5, ObservableMatrix(p0)}}),
                    std::invalid_argument);

  // top eigenvalue below 1: the target would not always pass
  REQUIRE_THROWS_AS(
      qsv_build_strategy({QsvSetting{1.0, ObservableMatrix(0.5 * p0, false)}}),
      std::invalid_argument);
}

TEST_CASE("round arithmetic", "[qsv]") {
  REQUIRE(qsv_rounds_needed(2.0 / 3.0, 0.1, 0.01) == 70);
  REQUIRE(qsv_rounds_needed(1.0, 0.1, 0.01) == 47);
  REQUIRE_THROWS_AS(qsv_rounds_needed(0.0, 0.1, 0.01), std::domain_error);
  REQUIRE_THROWS_AS(qsv_rounds_needed(0.5, 0.0, 0.01), std::domain_error);
}

TEST_CASE("ideal source is always accepted after the planned rounds", "[qsv]") {
  QsvStrategy s = singlet_xyz_strategy();
  for (uint64_t seed = 0; seed < 50; ++seed) {
    NoisyStateSource source(prepare_singlet_product(1), seed);
    QsvVerdict v = qsv_run(s, source, 0.1, 0.01, seed * 31 + 7);
    REQUIRE(v.accepted);
    REQUIRE(v.rounds_planned == 70);
    REQUIRE(v.rounds_run == 70);
  }
}

TEST_CASE("orthogonal source fails the projector strategy immediately", "[qsv]") {
  StateVector target = StateVector::zero(1);
  QsvStrategy s = projector_strategy(target);
  NoisyStateSource source(StateVector::basis(1, 1), 5);  // |1>, orthogonal
  QsvVerdict v = qsv_run(s, source, 0.2, 0.1, 11);
  REQUIRE_FALSE(v.accepted);
  REQUIRE(v.failed_round == 0);
  REQUIRE(v.rounds_run == 1);
}

TEST_CASE("far-from-target sources are accepted at most delta of the time", "[qsv]") {
  // fidelity 1 - eps' with eps' > eps: acceptance frequency <= delta + 3 sigma
  const double eps = 0.1, delta = 0.05;
  StateVector target = StateVector::zero(1);
  QsvStrategy s = projector_strategy(target);

  // |psi> with |<0|psi>|^2 = 0.8, i.e. eps' = 0.2 > eps
  std::vector<cplx> amps{std::sqrt(0.8), std::sqrt(0.2)};
  StateVector off(1, std::move(amps));
  int accepted = 0;
  const int trials = 1000;
  for (int t = 0; t < trials; ++t) {
    NoisyStateSource source(off, 300 + t);
    if (qsv_run(s, source, eps, delta, 7000 + t).accepted) ++accepted;
  }
  double rate = static_cast<double>(accepted) / trials;
  double sigma = std::sqrt(delta * (1 - delta) / trials);
  REQUIRE(rate <= delta + 3 * sigma);
}
