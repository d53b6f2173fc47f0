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
#include <random>

#include "fewcopy/witness.hpp"

using namespace fewcopy;

namespace {

StateVector random_state(int n, std::mt19937_64 &rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<cplx> a(uint64_t{1} << n);
  double norm = 0;
  for (auto &x : a) {
    x = cplx(g(rng), g(rng));
    norm += std::norm(x);
  }
  double inv = 1.0 / std::sqrt(norm);
  for (auto &x : a) x *= inv;
  return StateVector(n, std::move(a));
}

Eigen::MatrixXcd random_hermitian(int dim, std::mt19937_64 &rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXcd m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) m(i, j) = cplx(g(rng), g(rng));
  }
  return 0.5 * (m + m.adjoint().eval());
}

// Tr(O rho) for O = sum of embedded local terms, via the support oracle
double witness_expectation(const std::vector<LocalTerm> &terms, const StateVector &state) {
  double acc = 0;
  for (const auto &t : terms) acc += support_expectation(state, t.support, t.op);
  return acc;
}

}  // namespace

TEST_CASE("w1 table has uniform probabilities and p_s = 3/4", "[witness]") {
  SamplingTable w1 = witness_w1_cluster6();
  REQUIRE(w1.entries.size() == 64);
  for (const auto &e : w1.entries) {
    REQUIRE(e.mu == Catch::Approx(1.0 / 64.0).margin(1e-15));
  }
  REQUIRE(w1.p_s == Catch::Approx(0.75));
  REQUIRE(w1.tau == Catch::Approx(2.0));
  REQUIRE(w1.alpha_total == Catch::Approx(1.0));
  REQUIRE(w1.p_e.value() == Catch::Approx(1.0));
  REQUIRE_NOTHROW(w1.validate());

  // the target passes every entry with certainty
  StateVector target = prepare_cluster6_h();
  REQUIRE(exact_success_probability(w1, target) == Catch::Approx(1.0).margin(1e-10));
}

TEST_CASE("w2 table is two half-probability settings with p_s = 3/4", "[witness]") {
  SamplingTable w2 = witness_w2_cluster6();
  REQUIRE(w2.entries.size() == 2);
  REQUIRE(w2.entries[0].mu == Catch::Approx(0.5));
  REQUIRE(w2.entries[1].mu == Catch::Approx(0.5));
  REQUIRE(w2.p_s == Catch::Approx(0.75));
  REQUIRE_NOTHROW(w2.validate());
  StateVector target = prepare_cluster6_h();
  REQUIRE(exact_success_probability(w2, target) == Catch::Approx(1.0).margin(1e-10));
}

TEST_CASE("generic stabilizer witness at mu = 1/n", "[witness]") {
  auto gens = cluster6_h_generators();
  SamplingTable table = generic_stabilizer_witness(gens, 6);
  REQUIRE(table.entries.size() == 6);
  for (const auto &e : table.entries) {
    REQUIRE(e.mu == Catch::Approx(1.0 / 6.0).margin(1e-15));
  }
  // mechanical separable bound (gamma_s + alpha)/tau = 1 - 1/(2n)
  REQUIRE(table.p_s == Catch::Approx(1.0 - 1.0 / 12.0));
  REQUIRE_NOTHROW(table.validate());
  StateVector target = prepare_cluster6_h();
  REQUIRE(exact_success_probability(table, target) == Catch::Approx(1.0).margin(1e-10));

  // |000000> saturates 1 - 1/(2n): the four Z-type generators always pass,
  // the two X-type ones are coin flips
  StateVector zeros = StateVector::zero(6);
  REQUIRE(exact_success_probability(table, zeros) ==
          Catch::Approx(1.0 - 1.0 / 6.0).margin(1e-10));
  REQUIRE(exact_success_probability(table, zeros) <= table.p_s + 1e-12);
}

TEST_CASE("translate_witness reproduces the w1 parameters from raw terms", "[witness]") {
  // O = |G><G| decomposed as sum_i S_i / 2^n over all 64 stabilizers,
  // fed through the generic translation path as dense local terms
  auto gens = cluster6_h_generators();
  std::vector<LocalTerm> terms;
  std::vector<int> full{0, 1, 2, 3, 4, 5};
  for (size_t mask = 0; mask < 64; ++mask) {
    SignedPauli prod;
    for (size_t b = 0; b < 6; ++b) {
      if (mask & (size_t{1} << b)) prod = multiply(prod, gens[b]);
    }
    terms.push_back(LocalTerm{full, dense_pauli(prod, 6) / 64.0});
  }
  StateVector target = prepare_cluster6_h();
  SamplingTable table = translate_witness(0.5, terms, 6, &target);
  // the minimal shift leaves the identity stabilizer term unshifted, so tau
  // comes out at 127/64 instead of the uniform-shift value 2 used by the
  // projective builder; p_s tightens accordingly while p_e stays 1
  REQUIRE(table.alpha_total == Catch::Approx(63.0 / 64.0).margin(1e-9));
  REQUIRE(table.tau == Catch::Approx(127.0 / 64.0).margin(1e-9));
  REQUIRE(table.p_s == Catch::Approx(95.0 / 127.0).margin(1e-9));
  REQUIRE(table.p_s <= 0.75);
  REQUIRE(table.p_e.value() == Catch::Approx(1.0).margin(1e-9));
  REQUIRE_NOTHROW(table.validate());
}

TEST_CASE("witness equivalence oracle over random witnesses", "[witness]") {
  // the translated success probability equals (Tr(O rho) + alpha)/tau
  std::mt19937_64 rng(211);
  std::uniform_int_distribution<int> nq(2, 10);
  std::uniform_int_distribution<int> nterms(1, 5);
  std::uniform_real_distribution<double> ug(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    int n = nq(rng);
    int t = nterms(rng);
    std::vector<LocalTerm> terms;
    for (int i = 0; i < t; ++i) {
      int k = 1 + static_cast<int>(rng() % 3);
      k = std::min(k, n);
      std::vector<int> support;
      while (static_cast<int>(support.size()) < k) {
        int q = static_cast<int>(rng() % n);
        if (std::find(support.begin(), support.end(), q) == support.end()) support.push_back(q);
      }
      std::sort(support.begin(), support.end());
      terms.push_back(LocalTerm{support, random_hermitian(1 << k, rng)});
    }
    double gamma_s = ug(rng);
    SamplingTable table = translate_witness(gamma_s, terms, n);
    REQUIRE_NOTHROW(table.validate());

    StateVector state = random_state(n, rng);
    double lhs = exact_success_probability(table, state);
    double rhs = (witness_expectation(terms, state) + table.alpha_total) / table.tau;
    REQUIRE(lhs == Catch::Approx(rhs).margin(1e-8));
  }
}

TEST_CASE("pauli-sum witness path matches the dense translation", "[witness]") {
  std::mt19937_64 rng(223);
  // O = 0.7 X0 Z1 - 0.4 Y2 + 0.3 I on 3 qubits
  std::vector<std::pair<double, SparsePauli>> terms;
  SparsePauli xz;
  xz.factors.emplace(0, PauliBasis::X);
  xz.factors.emplace(1, PauliBasis::Z);
  SparsePauli y2;
  y2.factors.emplace(2, PauliBasis::Y);
  terms.emplace_back(0.7, xz);
  terms.emplace_back(-0.4, y2);
  terms.emplace_back(0.3, SparsePauli{});
  SamplingTable table = pauli_sum_witness(0.2, terms, 3);
  REQUIRE_NOTHROW(table.validate());

  for (int trial = 0; trial < 10; ++trial) {
    StateVector state = random_state(3, rng);
    double o = 0.7 * pauli_expectation(state, {xz, 1}) -
               0.4 * pauli_expectation(state, {y2, 1}) + 0.3;
    double lhs = exact_success_probability(table, state);
    REQUIRE(lhs == Catch::Approx((o + table.alpha_total) / table.tau).margin(1e-8));
  }
}

TEST_CASE("witness protocol on the ideal cluster state", "[witness]") {
  StateVector target = prepare_cluster6_h();
  SamplingTable w1 = witness_w1_cluster6();
  NoisyStateSource source(target, 31);
  WitnessRunResult run = run_witness_protocol(w1, source, 16, 37);
  REQUIRE(run.success_rate == Catch::Approx(1.0));
  REQUIRE(run.epsilon == Catch::Approx(0.25));
  double c_exact = 1.0 - std::pow(0.75, 16);
  REQUIRE(run.c_min == Catch::Approx(c_exact).margin(1e-12));
  REQUIRE(run.round_log.size() == 16);

  SamplingTable w2 = witness_w2_cluster6();
  NoisyStateSource source2(target, 41);
  WitnessRunResult run2 = run_witness_protocol(w2, source2, 150, 43);
  REQUIRE(run2.success_rate == Catch::Approx(1.0));
  REQUIRE(run2.c_min >= 0.99);
}

TEST_CASE("maximally noisy source stays below the separable bound", "[witness]") {
  StateVector target = prepare_cluster6_h();
  SamplingTable w1 = witness_w1_cluster6();
  NoisyStateSource source(target, StateVector::zero(6), 1.0, 47);
  WitnessOptions opts;
  opts.keep_round_log = false;
  const uint64_t reps = 100000;
  WitnessRunResult run = run_witness_protocol(w1, source, reps, 53, opts);
  // exact noise success probability: the 16 Z-type stabilizer products pass
  // surely on |000000>, the other 48 are coin flips
  double exact = exact_success_probability(w1, StateVector::zero(6));
  REQUIRE(exact == Catch::Approx((16.0 + 24.0) / 64.0).margin(1e-12));
  double sigma = std::sqrt(exact * (1 - exact) / reps);
  REQUIRE(std::abs(run.success_rate - exact) < 3 * sigma + 1e-3);
  REQUIRE(run.success_rate <= w1.p_s + 3 * sigma);
  REQUIRE(run.c_min == 0.0);
}

TEST_CASE("separable dominance for random product states", "[witness]") {
  std::mt19937_64 rng(59);
  std::normal_distribution<double> g(0.0, 1.0);
  SamplingTable w1 = witness_w1_cluster6();
  WitnessOptions opts;
  opts.keep_round_log = false;
  for (int trial = 0; trial < 4; ++trial) {
    std::vector<cplx> amps{cplx{1, 0}};
    for (int q = 0; q < 6; ++q) {
      cplx a(g(rng), g(rng)), b(g(rng), g(rng));
      double inv = 1.0 / std::sqrt(std::norm(a) + std::norm(b));
      std::vector<cplx> next(amps.size() * 2);
      for (size_t i = 0; i < amps.size(); ++i) {
        next[2 * i] = amps[i] * a * inv;
        next[2 * i + 1] = amps[i] * b * inv;
      }
      amps.swap(next);
    }
    StateVector product(6, std::move(amps));
    double exact = exact_success_probability(w1, product);
    REQUIRE(exact <= w1.p_s + 1e-9);

    NoisyStateSource source(product, 61 + trial);
    const uint64_t reps = 30000;
    WitnessRunResult run = run_witness_protocol(w1, source, reps, 67 + trial, opts);
    double sigma = std::sqrt(0.25 / reps);
    REQUIRE(run.success_rate <= w1.p_s + 3 * sigma + 5e-3);
  }
}

TEST_CASE("copies_needed pinned values and asymptotics", "[witness]") {
  REQUIRE(copies_needed(1.0, 0.75, 0.01) == 17);  // ceil of 16.01
  REQUIRE(copies_needed(1.0, 0.9, std::exp(-1.0)) == 10);
  REQUIRE_THROWS_AS(copies_needed(0.75, 0.75, 0.01), std::domain_error);
  REQUIRE_THROWS_AS(copies_needed(0.5, 0.75, 0.01), std::domain_error);
  REQUIRE_THROWS_AS(copies_needed(1.0, 0.75, 1.5), std::domain_error);

  // p_e = 1: N approaches log(1/delta)/eps0 as eps0 -> 0
  double delta = 0.01;
  for (double eps0 : {1e-3, 1e-4}) {
    double expect = std::log(1.0 / delta) / eps0;
    double got = static_cast<double>(copies_needed(1.0, 1.0 - eps0, delta));
    REQUIRE(got / expect == Catch::Approx(1.0).margin(0.01));
  }
  // p_e < 1: N approaches 2 p_e (1-p_e) log(1/delta) / eps0^2
  for (double eps0 : {1e-3, 3e-4}) {
    double pe = 0.6;
    double expect = 2.0 * pe * (1 - pe) * std::log(1.0 / delta) / (eps0 * eps0);
    double got = static_cast<double>(copies_needed(pe, pe - eps0, delta));
    REQUIRE(got / expect == Catch::Approx(1.0).margin(0.01));
  }
}

TEST_CASE("w1 and w2 need the same number of copies", "[witness]") {
  SamplingTable w1 = witness_w1_cluster6();
  SamplingTable w2 = witness_w2_cluster6();
  REQUIRE(copies_needed(*w1.p_e, w1.p_s, 0.01) == copies_needed(*w2.p_e, w2.p_s, 0.01));
}

TEST_CASE("table validation rejects broken invariants", "[witness]") {
  SamplingTable w1 = witness_w1_cluster6();
  SamplingTable bad = w1;
  bad.entries[0].mu += 0.01;
  REQUIRE_THROWS_AS(bad.validate(), std::logic_error);
  bad = w1;
  bad.p_s = 0.8;
  REQUIRE_THROWS_AS(bad.validate(), std::logic_error);
  bad = w1;
  bad.p_e = 0.5;  // below p_s
  REQUIRE_THROWS_AS(bad.validate(), std::logic_error);

  // non-hermitian term is rejected outright
  Eigen::MatrixXcd nh = Eigen::MatrixXcd::Zero(2, 2);
  nh(0, 1) = 1.0;
  REQUIRE_THROWS_AS(translate_witness(0.5, {LocalTerm{{0}, nh}}, 2), std::invalid_argument);
  REQUIRE_THROWS_AS(translate_witness(0.5, {}, 2), std::invalid_argument);
}

TEST_CASE("incompatible generators cannot share one setting", "[witness]") {
  SignedPauli x0, z0;
  x0.word.factors.emplace(0, PauliBasis::X);
  z0.word.factors.emplace(0, PauliBasis::Z);
  REQUIRE_THROWS_AS(BinaryObservable::stabilizer_and({x0, z0}), std::invalid_argument);
}
