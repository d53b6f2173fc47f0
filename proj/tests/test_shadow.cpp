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
#include <sstream>

#include "fewcopy/shadow.hpp"
#include "fewcopy/stats.hpp"

using namespace fewcopy;

namespace {

Eigen::MatrixXcd random_density(int d, std::mt19937_64 &rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXcd m(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) m(i, j) = cplx(g(rng), g(rng));
  }
  Eigen::MatrixXcd rho = m * m.adjoint();
  return rho / rho.trace().real();
}

Eigen::VectorXcd random_pure(int d, std::mt19937_64 &rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::VectorXcd v(d);
  for (int i = 0; i < d; ++i) v(i) = cplx(g(rng), g(rng));
  v.normalize();
  return v;
}

}  // namespace

TEST_CASE("sqst sample sizes", "[shadow]") {
  REQUIRE(sqst_sample_size(0.1, 0.01) == 1199);
  REQUIRE(sqst_sample_size(0.1, 0.01, 100) == 2120);
  // round-trip identity: delta = 4 exp(-N eps^2 / 2)
  double delta = 4.0 * std::exp(-1000.0 * 0.01 / 2.0);
  REQUIRE(sqst_sample_size(0.1, delta) == 1000);
  REQUIRE_THROWS_AS(sqst_sample_size(0.0, 0.01), std::domain_error);
}

TEST_CASE("diag record on an eigenstate is constant", "[shadow]") {
  MubFamily fam = build_mub(2);
  Eigen::VectorXcd zero(2);
  zero << 1.0, 0.0;
  QuditSource source(zero, "zero");
  MeasurementRecord rec = sqst_collect(source, fam, 10000,
                                       MeasurementRecord::Mode::diag_computational, 3);
  for (const auto &[k, m] : rec.outcomes) {
    REQUIRE(k == 0);
    REQUIRE(m == 1);
  }
  REQUIRE_NOTHROW(rec.validate());

  // rho_00 from the diag record is exactly 1
  EstimateWithError est = sqst_estimate_element(rec, &rec, 0, 0, fam);
  REQUIRE(est.value.real() == Catch::Approx(1.0));
}

TEST_CASE("offdiag record of |0> spreads over the four cells", "[shadow]") {
  MubFamily fam = build_mub(2);
  Eigen::VectorXcd zero(2);
  zero << 1.0, 0.0;
  QuditSource source(zero, "zero");
  MeasurementRecord rec =
      sqst_collect(source, fam, 10000, MeasurementRecord::Mode::offdiag_mub, 5);
  std::map<std::pair<int, int>, int> cells;
  for (const auto &[k, m] : rec.outcomes) cells[{k, m}]++;
  REQUIRE(cells.size() == 4);
  for (const auto &[cell, count] : cells) {
    REQUIRE(std::abs(count / 10000.0 - 0.25) < 0.015);
  }
}

TEST_CASE("record serialization round-trips bit for bit", "[shadow]") {
  MubFamily fam = build_mub(5);
  std::mt19937_64 rng(31);
  QuditSource source(random_pure(5, rng), "random5");
  MeasurementRecord rec =
      sqst_collect(source, fam, 500, MeasurementRecord::Mode::offdiag_mub, 7);
  std::ostringstream out;
  rec.serialize(out);
  std::istringstream in(out.str());
  MeasurementRecord back = MeasurementRecord::parse(in);
  std::ostringstream out2;
  back.serialize(out2);
  REQUIRE(out.str() == out2.str());
  REQUIRE(back.outcomes == rec.outcomes);

  std::istringstream bad("fewcopy-record v2\n");
  REQUIRE_THROWS_AS(MeasurementRecord::parse(bad), std::invalid_argument);
}

TEST_CASE("element estimates converge on pinned cases", "[shadow]") {
  MubFamily fam = build_mub(2);

  // rho = |0><0|: rho_01 = 0
  Eigen::VectorXcd zero(2);
  zero << 1.0, 0.0;
  QuditSource s0(zero, "zero");
  MeasurementRecord r0 = sqst_collect(s0, fam, 10000, MeasurementRecord::Mode::offdiag_mub, 11);
  EstimateWithError e0 = sqst_estimate_element(r0, nullptr, 0, 1, fam);
  REQUIRE(std::abs(e0.value) <= 0.03);

  // rho = |+><+|: rho_01 = 1/2
  Eigen::VectorXcd plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  QuditSource sp(plus, "plus");
  MeasurementRecord rp = sqst_collect(sp, fam, 10000, MeasurementRecord::Mode::offdiag_mub, 13);
  EstimateWithError ep = sqst_estimate_element(rp, nullptr, 0, 1, fam);
  REQUIRE(std::abs(ep.value - cplx(0.5, 0.0)) < 0.03);

  // the reported (N, eps, delta) satisfy the Hoeffding identity
  REQUIRE(ep.n_used == 10000);
  REQUIRE(ep.epsilon ==
          Catch::Approx(std::sqrt(2.0 * std::log(4.0 / ep.delta) / 10000.0)).epsilon(1e-12));

  REQUIRE_THROWS_AS(sqst_estimate_element(rp, nullptr, 1, 1, fam), std::invalid_argument);
}

TEST_CASE("povm marginals at d=5 match the born oracle", "[shadow]") {
  MubFamily fam = build_mub(5);
  std::mt19937_64 rng(211);
  Eigen::VectorXcd psi = random_pure(5, rng);
  QuditSource source(psi, "psi5");
  const uint64_t n = 100000;
  MeasurementRecord rec =
      sqst_collect(source, fam, n, MeasurementRecord::Mode::offdiag_mub, 213);
  std::map<std::pair<int, int>, int> counts;
  for (const auto &[k, m] : rec.outcomes) counts[{k, m}]++;
  for (int m = 2; m <= 6; ++m) {
    for (int k = 0; k < 5; ++k) {
      Eigen::VectorXcd v = fam.vector(k, m);
      double exact = std::norm((v.adjoint() * psi).value()) / 5.0;
      double seen = static_cast<double>(counts[{k, m}]) / n;
      double sigma = std::sqrt(std::max(exact * (1 - exact), 1e-5) / n);
      REQUIRE(std::abs(seen - exact) < 3 * sigma + 1e-3);
    }
  }
}

TEST_CASE("shadow estimates satisfy their own sample bound", "[shadow]") {
  NoisyStateSource source(prepare_ghz(2), 219);
  ShadowSnapshotSet set =
      shadows_collect(source, 2000, ShadowSnapshotSet::Ensemble::random_pauli, 223);
  Eigen::Map<const Eigen::VectorXcd> psi(source.target().amplitudes().data(), 4);
  ObservableMatrix fid(psi * psi.adjoint());
  for (uint64_t k : {1ull, 4ull, 10ull}) {
    EstimateWithError est = shadows_estimate(set, fid, k);
    REQUIRE(est.n_used == 2000);
    REQUIRE(est.delta == Catch::Approx(2.0 * std::exp(-static_cast<double>(k) / 8.0)));
    Eigen::MatrixXcd traceless =
        fid.entries() - (fid.entries().trace() / 4.0) * Eigen::MatrixXcd::Identity(4, 4);
    double var = 3.0 * traceless.squaredNorm();
    // floor(N/k) >= 34 var / eps^2 holds with equality by construction
    double per_group = std::floor(2000.0 / static_cast<double>(k));
    REQUIRE(per_group >= 34.0 * var / (est.epsilon * est.epsilon) - 1e-6);
  }
}

TEST_CASE("record reuse queries touch no new copies", "[shadow]") {
  MubFamily fam = build_mub(5);
  std::mt19937_64 rng(17);
  QuditSource source(random_pure(5, rng), "random5");
  MeasurementRecord off =
      sqst_collect(source, fam, 2000, MeasurementRecord::Mode::offdiag_mub, 19);
  MeasurementRecord dia =
      sqst_collect(source, fam, 2000, MeasurementRecord::Mode::diag_computational, 23);
  uint64_t before = source.shots_emitted();
  REQUIRE(before == 4000);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      for (int rep = 0; rep < 2; ++rep) {
        sqst_estimate_element(off, &dia, i, j, fam);
      }
    }
  }
  REQUIRE(source.shots_emitted() == before);
}

TEST_CASE("hoeffding dominance of the element estimator", "[shadow]") {
  // at N = sqst_sample_size(0.1, 0.01), failures are rarer than 1% + 3 sigma
  MubFamily fam = build_mub(3);
  std::mt19937_64 rng(29);
  Eigen::VectorXcd psi = random_pure(3, rng);
  Eigen::MatrixXcd rho = psi * psi.adjoint();
  QuditSource source(psi, "psi3");
  const uint64_t n = sqst_sample_size(0.1, 0.01);
  const int reps = 300;
  int failures = 0;
  for (int r = 0; r < reps; ++r) {
    MeasurementRecord rec =
        sqst_collect(source, fam, n, MeasurementRecord::Mode::offdiag_mub, 1000 + r);
    EstimateWithError est = sqst_estimate_element(rec, nullptr, 0, 2, fam);
    if (std::abs(est.value - rho(0, 2)) >= 0.1) ++failures;
  }
  double rate = static_cast<double>(failures) / reps;
  REQUIRE(rate <= 0.01 + 3 * std::sqrt(0.01 * 0.99 / reps));
}

TEST_CASE("observable estimation through both records", "[shadow]") {
  MubFamily fam = build_mub(2);
  Eigen::MatrixXcd zm(2, 2), xm(2, 2), im = Eigen::MatrixXcd::Identity(2, 2);
  zm << 1, 0, 0, -1;
  xm << 0, 1, 1, 0;

  // A = Z on |0>: diagonal-only path, oracle +1
  Eigen::VectorXcd zero(2);
  zero << 1.0, 0.0;
  QuditSource s0(zero, "zero");
  MeasurementRecord off0 =
      sqst_collect(s0, fam, 10000, MeasurementRecord::Mode::offdiag_mub, 41);
  MeasurementRecord dia0 =
      sqst_collect(s0, fam, 10000, MeasurementRecord::Mode::diag_computational, 43);
  EstimateWithError ez =
      sqst_estimate_observable(off0, dia0, ObservableMatrix(zm), fam);
  REQUIRE(std::abs(ez.value.real() - 1.0) < 0.05);

  // A = X on |+>: purely off-diagonal path, oracle +1
  Eigen::VectorXcd plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  QuditSource sp(plus, "plus");
  MeasurementRecord offp =
      sqst_collect(sp, fam, 10000, MeasurementRecord::Mode::offdiag_mub, 47);
  MeasurementRecord diap =
      sqst_collect(sp, fam, 10000, MeasurementRecord::Mode::diag_computational, 53);
  EstimateWithError ex =
      sqst_estimate_observable(offp, diap, ObservableMatrix(xm), fam);
  REQUIRE(std::abs(ex.value.real() - 1.0) < 0.1);

  // A = identity is exact on any record
  EstimateWithError ei = sqst_estimate_observable(offp, diap, ObservableMatrix(im), fam);
  REQUIRE(ei.value.real() == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("exact sqst unbiasedness for d in {2,3,5}", "[shadow]") {
  // expectation of the estimator under the exact outcome distribution
  // equals rho_ij; mirrors the estimator-side identity in the mub suite but
  // exercises eta exactly as the estimate path consumes it
  std::mt19937_64 rng(59);
  for (int d : {2, 3, 5}) {
    MubFamily fam = build_mub(d);
    Eigen::MatrixXcd rho = random_density(d, rng);
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        if (i == j) continue;
        cplx acc{0, 0};
        for (int m = 2; m <= d + 1; ++m) {
          for (int k = 0; k < d; ++k) {
            Eigen::VectorXcd v = fam.vector(k, m);
            double p = (v.adjoint() * rho * v).value().real() / d;
            acc += p * eta(i, j, k, m, fam);
          }
        }
        REQUIRE(std::abs(acc - rho(i, j)) < 1e-10);
      }
    }
  }
}

TEST_CASE("pauli snapshot matrix is unbiased by enumeration", "[shadow]") {
  // n = 1: average the snapshot matrix over all (basis, outcome) pairs
  // weighted by Born probabilities; must reproduce rho exactly
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 3; ++trial) {
    Eigen::MatrixXcd rho = random_density(2, rng);
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(2, 2);
    for (int b = 0; b < 3; ++b) {
      for (int o = 0; o < 2; ++o) {
        ShadowSnapshot snap;
        snap.bases = {static_cast<PauliBasis>(b)};
        snap.outcome = {static_cast<uint8_t>(o)};
        Eigen::MatrixXcd m =
            shadow_snapshot_matrix(snap, ShadowSnapshotSet::Ensemble::random_pauli, 1);
        // probability of this outcome: <e|rho|e> with e the eigenvector
        Eigen::MatrixXcd proj = (m + Eigen::MatrixXcd::Identity(2, 2)) / 3.0;
        double p = (proj * rho).trace().real();
        acc += (1.0 / 3.0) * p * m;
      }
    }
    REQUIRE((acc - rho).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("two-qubit pauli snapshots are unbiased by enumeration", "[shadow]") {
  std::mt19937_64 rng(67);
  Eigen::MatrixXcd rho = random_density(4, rng);
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(4, 4);
  for (int b0 = 0; b0 < 3; ++b0) {
    for (int b1 = 0; b1 < 3; ++b1) {
      for (int o = 0; o < 4; ++o) {
        ShadowSnapshot snap;
        snap.bases = {static_cast<PauliBasis>(b0), static_cast<PauliBasis>(b1)};
        snap.outcome = {static_cast<uint8_t>((o >> 1) & 1), static_cast<uint8_t>(o & 1)};
        Eigen::MatrixXcd m =
            shadow_snapshot_matrix(snap, ShadowSnapshotSet::Ensemble::random_pauli, 2);
        // recover the measurement projector from the inverse-channel matrix
        Eigen::MatrixXcd proj = Eigen::MatrixXcd::Identity(1, 1);
        for (int q = 0; q < 2; ++q) {
          ShadowSnapshot one;
          one.bases = {snap.bases[q]};
          one.outcome = {snap.outcome[q]};
          Eigen::MatrixXcd f =
              (shadow_snapshot_matrix(one, ShadowSnapshotSet::Ensemble::random_pauli, 1) +
               Eigen::MatrixXcd::Identity(2, 2)) / 3.0;
          Eigen::MatrixXcd next(proj.rows() * 2, proj.cols() * 2);
          for (Eigen::Index i = 0; i < proj.rows(); ++i) {
            for (Eigen::Index jj = 0; jj < proj.cols(); ++jj) {
              next.block<2, 2>(2 * i, 2 * jj) = proj(i, jj) * f;
            }
          }
          proj.swap(next);
        }
        double p = (proj * rho).trace().real();
        acc += (1.0 / 9.0) * p * m;
      }
    }
  }
  REQUIRE((acc - rho).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("pauli ensemble draws bases uniformly", "[shadow]") {
  NoisyStateSource source(StateVector::zero(1), 71);
  ShadowSnapshotSet set =
      shadows_collect(source, 10000, ShadowSnapshotSet::Ensemble::random_pauli, 73);
  std::array<int, 3> counts{};
  for (const auto &s : set.snapshots) counts[static_cast<int>(s.bases[0])]++;
  for (int c : counts) {
    REQUIRE(std::abs(c / 10000.0 - 1.0 / 3.0) < 0.02);
  }
}

TEST_CASE("clifford snapshots of |0> match the stabilizer distribution", "[shadow]") {
  // U|0> is one of the six single-qubit stabilizer states, uniformly; the
  // computational outcome is 0 surely for |0>, 1 surely for |1>, and a coin
  // flip for the four equator states: Pr[outcome 0] = 1/2 overall
  NoisyStateSource source(StateVector::zero(1), 79);
  const uint64_t n = 30000;
  ShadowSnapshotSet set =
      shadows_collect(source, n, ShadowSnapshotSet::Ensemble::random_clifford, 83);
  uint64_t zeros = 0;
  for (const auto &s : set.snapshots) zeros += s.outcome[0] == 0;
  double rate = static_cast<double>(zeros) / n;
  REQUIRE(std::abs(rate - 0.5) < 3 * std::sqrt(0.25 / n));

  // snapshot mean reproduces |0><0| within sampling error
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(2, 2);
  for (const auto &s : set.snapshots) {
    acc += shadow_snapshot_matrix(s, ShadowSnapshotSet::Ensemble::random_clifford, 1);
  }
  acc /= static_cast<double>(n);
  Eigen::MatrixXcd want = Eigen::MatrixXcd::Zero(2, 2);
  want(0, 0) = 1.0;
  REQUIRE((acc - want).cwiseAbs().maxCoeff() < 0.05);
}

TEST_CASE("ghz fidelity from clifford shadows", "[shadow]") {
  StateVector ghz = prepare_ghz(2);
  NoisyStateSource source(ghz, 311);
  ShadowSnapshotSet set =
      shadows_collect(source, 5000, ShadowSnapshotSet::Ensemble::random_clifford, 313);
  Eigen::Map<const Eigen::VectorXcd> psi(ghz.amplitudes().data(), 4);
  ObservableMatrix fid(psi * psi.adjoint());
  EstimateWithError est = shadows_estimate(set, fid, 5);
  REQUIRE(std::abs(est.value.real() - 1.0) < 0.15);
}

TEST_CASE("ghz fidelity from pauli shadows", "[shadow]") {
  StateVector ghz = prepare_ghz(3);
  NoisyStateSource source(ghz, 89);
  ShadowSnapshotSet set =
      shadows_collect(source, 10000, ShadowSnapshotSet::Ensemble::random_pauli, 97);
  Eigen::Map<const Eigen::VectorXcd> psi(ghz.amplitudes().data(), 8);
  ObservableMatrix fid(psi * psi.adjoint());
  EstimateWithError est = shadows_estimate(set, fid, 10);
  REQUIRE(std::abs(est.value.real() - 1.0) <= 0.1);

  // k = 1 equals the plain mean
  std::vector<double> singles = shadow_single_estimates(set, fid);
  double mean = 0;
  for (double v : singles) mean += v;
  mean /= singles.size();
  EstimateWithError est1 = shadows_estimate(set, fid, 1);
  REQUIRE(est1.value.real() == Catch::Approx(mean).margin(1e-12));
}

TEST_CASE("shadow snapshot sets serialize exactly", "[shadow]") {
  NoisyStateSource source(prepare_ghz(2), 101);
  for (auto ens : {ShadowSnapshotSet::Ensemble::random_pauli,
                   ShadowSnapshotSet::Ensemble::random_clifford}) {
    ShadowSnapshotSet set = shadows_collect(source, 200, ens, 103);
    std::ostringstream out;
    set.serialize(out);
    std::istringstream in(out.str());
    ShadowSnapshotSet back = ShadowSnapshotSet::parse(in);
    std::ostringstream out2;
    back.serialize(out2);
    REQUIRE(out.str() == out2.str());
  }
}

TEST_CASE("max norm never exceeds the trace norm", "[shadow]") {
  // reconstruct the full matrix at d = 4 and compare error norms
  MubFamily fam = build_mub(4);
  std::mt19937_64 rng(107);
  Eigen::VectorXcd psi = random_pure(4, rng);
  Eigen::MatrixXcd rho = psi * psi.adjoint();
  QuditSource source(psi, "psi4");
  for (int trial = 0; trial < 5; ++trial) {
    MeasurementRecord off =
        sqst_collect(source, fam, 2000, MeasurementRecord::Mode::offdiag_mub, 200 + trial);
    MeasurementRecord dia = sqst_collect(source, fam, 2000,
                                         MeasurementRecord::Mode::diag_computational,
                                         300 + trial);
    Eigen::MatrixXcd est(4, 4);
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        est(i, j) = sqst_estimate_element(off, &dia, i, j, fam).value;
      }
    }
    ObservableMatrix err(est - rho, false);
    REQUIRE(err.max_norm() <= err.trace_norm() + 1e-12);
  }

  // adversarial gap: the identity has max norm 1 but trace norm d
  ObservableMatrix eye(Eigen::MatrixXcd::Identity(16, 16));
  REQUIRE(eye.max_norm() == Catch::Approx(1.0));
  REQUIRE(eye.trace_norm() == Catch::Approx(16.0));
}
