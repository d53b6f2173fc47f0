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

#include "fewcopy/witness.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <thread>

#include <Eigen/Eigenvalues>

#include "fewcopy/errors.hpp"
#include "fewcopy/rng.hpp"
#include "fewcopy/stats.hpp"

namespace fewcopy {

namespace {

// union per-qubit setting of a generator list; throws when two generators
// need different bases on the same qubit
std::vector<std::pair<int, PauliBasis>> union_setting(const std::vector<SignedPauli> &gens) {
  std::map<int, PauliBasis> setting;
  for (const auto &g : gens) {
    for (const auto &[q, b] : g.word.factors) {
      auto [it, inserted] = setting.emplace(q, b);
      if (!inserted && it->second != b) {
        throw std::invalid_argument("generators are not measurable in one local setting");
      }
    }
  }
  return {setting.begin(), setting.end()};
}

Eigen::MatrixXcd dense_on_support(const SignedPauli &p, const std::vector<int> &support) {
  // remap qubits to positions within the sorted support
  std::map<int, int> pos;
  for (size_t i = 0; i < support.size(); ++i) pos.emplace(support[i], static_cast<int>(i));
  SignedPauli local;
  local.sign = p.sign;
  for (const auto &[q, b] : p.word.factors) local.word.factors.emplace(pos.at(q), b);
  return dense_pauli(local, static_cast<int>(support.size()));
}

}  // namespace

BinaryObservable BinaryObservable::stabilizer_and(std::vector<SignedPauli> generators) {
  BinaryObservable o;
  StabilizerAnd impl;
  impl.bases = union_setting(generators);
  impl.generators = std::move(generators);
  std::set<int> qubits;
  for (const auto &[q, b] : impl.bases) qubits.insert(q);
  o.support_.assign(qubits.begin(), qubits.end());
  o.impl_ = std::move(impl);
  return o;
}

BinaryObservable BinaryObservable::projector(std::vector<int> support, Eigen::MatrixXcd m) {
  std::sort(support.begin(), support.end());
  if (m.rows() != m.cols() ||
      m.rows() != static_cast<Eigen::Index>(Eigen::Index{1} << support.size())) {
    throw std::invalid_argument("projector dimension does not match support");
  }
  if ((m * m - m).cwiseAbs().maxCoeff() > 1e-8) {
    throw std::invalid_argument("binary observable must be idempotent");
  }
  BinaryObservable o;
  o.support_ = support;
  o.impl_ = Projector{std::move(support), std::move(m)};
  return o;
}

BinaryObservable BinaryObservable::always_pass() {
  BinaryObservable o;
  o.impl_ = StabilizerAnd{};
  return o;
}

bool BinaryObservable::trivial() const {
  const auto *s = std::get_if<StabilizerAnd>(&impl_);
  return s != nullptr && s->generators.empty();
}

Eigen::MatrixXcd BinaryObservable::projector_on_support() const {
  if (const auto *p = std::get_if<Projector>(&impl_)) return p->m;
  const auto &s = std::get<StabilizerAnd>(impl_);
  Eigen::Index dim = Eigen::Index{1} << support_.size();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(dim, dim);
  for (const auto &g : s.generators) {
    m = m * 0.5 * (Eigen::MatrixXcd::Identity(dim, dim) + dense_on_support(g, support_));
  }
  return m;
}

int BinaryObservable::measure(StateVector &shot, std::mt19937_64 &rng) const {
  if (const auto *p = std::get_if<Projector>(&impl_)) {
    return measure_projector(shot, p->support, p->m, rng);
  }
  const auto &s = std::get<StabilizerAnd>(impl_);
  if (s.generators.empty()) return 1;
  std::vector<uint8_t> bits = measure_qubits(shot, s.bases, rng);
  std::map<int, int> bit_of;
  for (size_t i = 0; i < s.bases.size(); ++i) bit_of.emplace(s.bases[i].first, bits[i]);
  for (const auto &g : s.generators) {
    int parity = g.sign < 0 ? 1 : 0;
    for (const auto &[q, b] : g.word.factors) parity ^= bit_of.at(q);
    if (parity) return 0;  // this generator read -1
  }
  return 1;
}

void SamplingTable::validate() const {
  double mu_sum = 0;
  for (const auto &e : entries) {
    if (e.mu < -1e-12) throw std::logic_error("negative sampling probability");
    mu_sum += e.mu;
  }
  if (std::abs(mu_sum - 1.0) > 1e-10) {
    throw std::logic_error("sampling probabilities not normalized");
  }
  double expected_ps = (gamma_s + alpha_total) / tau;
  if (std::abs(p_s - expected_ps) > 1e-10) throw std::logic_error("p_s formula violated");
  for (const auto &e : entries) {
    Eigen::MatrixXcd m = e.observable.projector_on_support();
    if ((m * m - m).cwiseAbs().maxCoeff() > 1e-8) {
      throw std::logic_error("table entry is not idempotent");
    }
  }
  if (p_e) {
    if (*p_e > 1.0 + 1e-9 || *p_e <= p_s) {
      throw std::logic_error("entanglement value must lie in (p_s, 1]");
    }
  }
}

SamplingTable translate_witness(double gamma_s, const std::vector<LocalTerm> &terms,
                                int n_qubits, const StateVector *target) {
  if (terms.empty()) throw std::invalid_argument("witness needs at least one local term");
  SamplingTable table;
  table.n_qubits = n_qubits;
  table.gamma_s = gamma_s;
  table.term_count = terms.size();

  double tau = 0, alpha_total = 0;
  std::vector<std::pair<double, BinaryObservable>> raw;
  for (const auto &term : terms) {
    if (term.op.rows() != term.op.cols()) throw std::invalid_argument("term must be square");
    if ((term.op - term.op.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
      throw std::invalid_argument("witness term is not Hermitian");
    }
    for (int q : term.support) {
      if (q < 0 || q >= n_qubits) throw std::invalid_argument("term support out of range");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(term.op);
    double lmin = eig.eigenvalues().minCoeff();
    double alpha_i = std::max(0.0, -lmin);
    alpha_total += alpha_i;

    // cluster shifted eigenvalues into eigenprojectors, dropping the kernel
    Eigen::VectorXd vals = eig.eigenvalues().array() + alpha_i;
    double scale = std::max(1.0, vals.cwiseAbs().maxCoeff());
    Eigen::Index i = 0;
    while (i < vals.size()) {
      Eigen::Index j = i;
      while (j + 1 < vals.size() && std::abs(vals(j + 1) - vals(i)) < 1e-9 * scale) ++j;
      double lambda = vals.segment(i, j - i + 1).mean();
      if (lambda > 1e-12 * scale) {
        Eigen::MatrixXcd proj = Eigen::MatrixXcd::Zero(term.op.rows(), term.op.cols());
        for (Eigen::Index c = i; c <= j; ++c) {
          proj += eig.eigenvectors().col(c) * eig.eigenvectors().col(c).adjoint();
        }
        raw.emplace_back(lambda, BinaryObservable::projector(term.support, std::move(proj)));
        tau += lambda;
      }
      i = j + 1;
    }
  }
  if (tau <= 0) throw std::invalid_argument("witness decomposition is empty after shifting");

  table.tau = tau;
  table.alpha_total = alpha_total;
  table.p_s = (gamma_s + alpha_total) / tau;
  for (auto &[lambda, obs] : raw) {
    table.entries.push_back(TableEntry{lambda / tau, std::move(obs)});
  }
  if (target) table.p_e = exact_success_probability(table, *target);
  return table;
}

SamplingTable projective_graph_witness(const std::vector<SignedPauli> &generators,
                                       int n_qubits) {
  size_t g = generators.size();
  if (g == 0) throw std::invalid_argument("need at least one generator");
  if (g > 16) {
    throw CapacityError("projective witness enumerates 2^g stabilizers; g > 16 refused");
  }
  size_t count = size_t{1} << g;
  SamplingTable table;
  table.n_qubits = n_qubits;
  table.gamma_s = 0.5;
  table.alpha_total = 1.0;  // 2^g shifts of 1/2^g
  table.tau = 2.0;
  table.term_count = count;
  table.p_s = 0.75;
  table.p_e = 1.0;
  double mu = 1.0 / static_cast<double>(count);
  table.entries.reserve(count);
  for (size_t mask = 0; mask < count; ++mask) {
    SignedPauli prod;  // identity
    for (size_t b = 0; b < g; ++b) {
      if (mask & (size_t{1} << b)) prod = multiply(prod, generators[b]);
    }
    if (prod.word.empty()) {
      table.entries.push_back(TableEntry{mu, BinaryObservable::always_pass()});
    } else {
      table.entries.push_back(TableEntry{mu, BinaryObservable::stabilizer_and({prod})});
    }
  }
  return table;
}

SamplingTable two_setting_witness(const std::vector<SignedPauli> &gens_a,
                                  const std::vector<SignedPauli> &gens_b, int n_qubits) {
  SamplingTable table;
  table.n_qubits = n_qubits;
  table.gamma_s = 3.0;
  table.alpha_total = 0.0;
  table.tau = 4.0;
  table.term_count = 2;
  table.p_s = 0.75;
  table.p_e = 1.0;
  table.entries.push_back(TableEntry{0.5, BinaryObservable::stabilizer_and(gens_a)});
  table.entries.push_back(TableEntry{0.5, BinaryObservable::stabilizer_and(gens_b)});
  return table;
}

SamplingTable generic_stabilizer_witness(const std::vector<SignedPauli> &generators,
                                         int n_qubits) {
  size_t n = generators.size();
  if (n == 0) throw std::invalid_argument("need at least one generator");
  SamplingTable table;
  table.n_qubits = n_qubits;
  table.gamma_s = static_cast<double>(n) - 1.0;
  table.alpha_total = static_cast<double>(n);  // each S_i shifted by 1
  table.tau = 2.0 * static_cast<double>(n);
  table.term_count = n;
  table.p_s = (table.gamma_s + table.alpha_total) / table.tau;  // 1 - 1/(2n)
  table.p_e = 1.0;
  double mu = 1.0 / static_cast<double>(n);
  for (const auto &gen : generators) {
    table.entries.push_back(TableEntry{mu, BinaryObservable::stabilizer_and({gen})});
  }
  return table;
}

SamplingTable pauli_sum_witness(double gamma_s,
                                const std::vector<std::pair<double, SparsePauli>> &terms,
                                int n_qubits, const StateVector *target) {
  if (terms.empty()) throw std::invalid_argument("witness needs at least one term");
  SamplingTable table;
  table.n_qubits = n_qubits;
  table.gamma_s = gamma_s;
  table.term_count = terms.size();

  double tau = 0, alpha_total = 0;
  std::vector<std::pair<double, BinaryObservable>> raw;
  for (const auto &[w, word] : terms) {
    if (word.max_qubit() >= n_qubits) {
      throw std::invalid_argument("term acts outside the system");
    }
    if (word.empty()) {
      // constant term w * identity: positive weight is an always-pass
      // observable, a negative one is shifted away entirely
      alpha_total += std::max(0.0, -w);
      if (w > 0) {
        raw.emplace_back(w, BinaryObservable::always_pass());
        tau += w;
      }
      continue;
    }
    if (w == 0) continue;
    // w P + |w| = 2|w| (1 + sign(w) P)/2
    alpha_total += std::abs(w);
    SignedPauli sp{word, w > 0 ? +1 : -1};
    raw.emplace_back(2.0 * std::abs(w), BinaryObservable::stabilizer_and({sp}));
    tau += 2.0 * std::abs(w);
  }
  if (tau <= 0) throw std::invalid_argument("witness decomposition is empty after shifting");
  table.tau = tau;
  table.alpha_total = alpha_total;
  table.p_s = (gamma_s + alpha_total) / tau;
  for (auto &[lambda, obs] : raw) {
    table.entries.push_back(TableEntry{lambda / tau, std::move(obs)});
  }
  if (target) table.p_e = exact_success_probability(table, *target);
  return table;
}

std::vector<SignedPauli> cluster6_h_generators() {
  auto mk = [](std::initializer_list<std::pair<int, PauliBasis>> fs) {
    SignedPauli p;
    for (auto &[q, b] : fs) p.word.factors.emplace(q, b);
    return p;
  };
  return {
      mk({{0, PauliBasis::X}, {1, PauliBasis::X}, {2, PauliBasis::X}, {3, PauliBasis::Z}}),
      mk({{0, PauliBasis::Z}, {1, PauliBasis::Z}}),
      mk({{1, PauliBasis::Z}, {2, PauliBasis::Z}}),
      mk({{2, PauliBasis::Z}, {3, PauliBasis::X}, {4, PauliBasis::X}, {5, PauliBasis::X}}),
      mk({{3, PauliBasis::Z}, {4, PauliBasis::Z}}),
      mk({{4, PauliBasis::Z}, {5, PauliBasis::Z}}),
  };
}

SamplingTable witness_w1_cluster6() {
  return projective_graph_witness(cluster6_h_generators(), 6);
}

SamplingTable witness_w2_cluster6() {
  auto g = cluster6_h_generators();
  // {G1, G5, G6}: X on qubits 0-2, Z on 3-5; {G4, G2, G3} is the mirror
  return two_setting_witness({g[0], g[4], g[5]}, {g[3], g[1], g[2]}, 6);
}

double exact_success_probability(const SamplingTable &table, const StateVector &state) {
  if (state.n_qubits() != table.n_qubits) throw std::invalid_argument("state width mismatch");
  double acc = 0;
  for (const auto &e : table.entries) {
    if (e.observable.trivial()) {
      acc += e.mu;
      continue;
    }
    acc += e.mu * support_expectation(state, e.observable.support(),
                                      e.observable.projector_on_support());
  }
  return acc;
}

WitnessRunResult run_witness_protocol(const SamplingTable &table, NoisyStateSource &source,
                                      uint64_t repetitions, uint64_t seed,
                                      const WitnessOptions &opts) {
  if (source.n_qubits() != table.n_qubits) {
    throw std::invalid_argument("source width does not match table");
  }
  if (repetitions == 0) throw std::invalid_argument("need at least one repetition");
  std::vector<double> cdf(table.entries.size());
  double acc = 0;
  for (size_t i = 0; i < table.entries.size(); ++i) {
    acc += table.entries[i].mu;
    cdf[i] = acc;
  }

  WitnessRunResult result;
  result.repetitions = repetitions;
  result.p_s = table.p_s;
  std::vector<uint8_t> outcomes(repetitions, 0);
  std::vector<uint32_t> picks(repetitions, 0);

  auto per_rep = [&](uint64_t r) {
    std::mt19937_64 rng = derive_rng(seed, r);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    double u = uni(rng) * acc;
    size_t pick = std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin();
    if (pick >= table.entries.size()) pick = table.entries.size() - 1;
    StateVector shot = source.next_shot(rng);
    outcomes[r] = static_cast<uint8_t>(table.entries[pick].observable.measure(shot, rng));
    picks[r] = static_cast<uint32_t>(pick);
  };
  if (opts.threads <= 1) {
    for (uint64_t r = 0; r < repetitions; ++r) per_rep(r);
  } else {
    std::vector<std::thread> pool;
    uint64_t chunk = (repetitions + opts.threads - 1) / opts.threads;
    for (int t = 0; t < opts.threads; ++t) {
      uint64_t lo = t * chunk, hi = std::min(repetitions, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back([lo, hi, &per_rep] {
        for (uint64_t r = lo; r < hi; ++r) per_rep(r);
      });
    }
    for (auto &th : pool) th.join();
  }

  uint64_t total = 0;
  for (uint8_t o : outcomes) total += o;
  result.success_rate = static_cast<double>(total) / static_cast<double>(repetitions);
  result.epsilon = result.success_rate - table.p_s;
  result.c_min = ConfidenceBound::from_rate(result.success_rate, table.p_s, repetitions).c_min;
  if (opts.keep_round_log) {
    result.round_log.resize(repetitions);
    for (uint64_t r = 0; r < repetitions; ++r) {
      result.round_log[r] = {static_cast<uint32_t>(r), picks[r], outcomes[r]};
    }
  }
  return result;
}

uint64_t copies_needed(double p_e, double p_s, double delta) {
  if (!(p_s > 0.0 && p_s < p_e && p_e <= 1.0)) {
    throw std::domain_error("copies_needed requires 0 < p_s < p_e <= 1");
  }
  if (!(delta > 0.0 && delta < 1.0)) throw std::domain_error("delta must be in (0,1)");
  double d = kl_divergence(p_e, p_s);
  return static_cast<uint64_t>(std::ceil(std::log(1.0 / delta) / d));
}

}  // namespace fewcopy
