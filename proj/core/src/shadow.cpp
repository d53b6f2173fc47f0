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

#include "fewcopy/shadow.hpp"

#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "fewcopy/errors.hpp"
#include "fewcopy/rng.hpp"
#include "fewcopy/stats.hpp"

namespace fewcopy {

namespace {

void expect_token(std::istream &in, const std::string &want) {
  std::string got;
  in >> got;
  if (got != want) {
    throw std::invalid_argument("record parse error: expected '" + want + "', got '" + got + "'");
  }
}

}  // namespace

void MeasurementRecord::validate() const {
  for (const auto &[k, m] : outcomes) {
    if (k >= d) throw std::logic_error("record outcome k out of range");
    if (mode == Mode::diag_computational && m != 1) {
      throw std::logic_error("diagonal record contains a non-computational outcome");
    }
    if (mode == Mode::offdiag_mub && (m < 2 || m > d + 1)) {
      throw std::logic_error("offdiag record contains a computational outcome");
    }
  }
}

void MeasurementRecord::serialize(std::ostream &out) const {
  out << "fewcopy-record v1\n";
  out << "mode " << (mode == Mode::offdiag_mub ? "offdiag" : "diag") << "\n";
  out << "d " << d << "\n";
  out << "n " << outcomes.size() << "\n";
  out << "seed " << seed << "\n";
  out << "label " << (source_label.empty() ? "-" : source_label) << "\n";
  out << "data\n";
  for (const auto &[k, m] : outcomes) out << k << ' ' << m << "\n";
  out << "end\n";
}

MeasurementRecord MeasurementRecord::parse(std::istream &in) {
  MeasurementRecord rec;
  expect_token(in, "fewcopy-record");
  expect_token(in, "v1");
  expect_token(in, "mode");
  std::string mode;
  in >> mode;
  if (mode == "offdiag") rec.mode = Mode::offdiag_mub;
  else if (mode == "diag") rec.mode = Mode::diag_computational;
  else throw std::invalid_argument("record parse error: unknown mode " + mode);
  expect_token(in, "d");
  in >> rec.d;
  expect_token(in, "n");
  uint64_t n = 0;
  in >> n;
  expect_token(in, "seed");
  in >> rec.seed;
  expect_token(in, "label");
  in >> rec.source_label;
  if (rec.source_label == "-") rec.source_label.clear();
  expect_token(in, "data");
  rec.outcomes.resize(n);
  for (uint64_t i = 0; i < n; ++i) {
    int k, m;
    if (!(in >> k >> m)) throw std::invalid_argument("record parse error: truncated data");
    rec.outcomes[i] = {static_cast<uint16_t>(k), static_cast<uint16_t>(m)};
  }
  expect_token(in, "end");
  rec.validate();
  return rec;
}

QuditSource::QuditSource(Eigen::VectorXcd state, std::string label)
    : d_(static_cast<int>(state.size())), label_(std::move(label)), fixed_(std::move(state)) {
  if (std::abs(fixed_->squaredNorm() - 1.0) > 1e-8) {
    throw std::invalid_argument("qudit state is not normalized");
  }
}

QuditSource::QuditSource(int d, std::function<Eigen::VectorXcd(std::mt19937_64 &)> generator,
                         std::string label)
    : d_(d), label_(std::move(label)), generator_(std::move(generator)) {}

Eigen::VectorXcd QuditSource::shot(std::mt19937_64 &rng) {
  ++shots_;
  if (fixed_) return *fixed_;
  Eigen::VectorXcd s = generator_(rng);
  if (s.size() != d_) throw std::logic_error("qudit generator produced the wrong dimension");
  return s;
}

MeasurementRecord sqst_collect(QuditSource &source, const MubFamily &fam, uint64_t n,
                               MeasurementRecord::Mode mode, uint64_t seed) {
  if (source.d() != fam.dimension()) {
    throw std::invalid_argument("source dimension does not match MUB family");
  }
  MeasurementRecord rec;
  rec.mode = mode;
  rec.d = fam.dimension();
  rec.seed = seed;
  rec.source_label = source.label();
  rec.outcomes.reserve(n);
  for (uint64_t s = 0; s < n; ++s) {
    std::mt19937_64 rng = derive_rng(seed, s);
    Eigen::VectorXcd psi = source.shot(rng);
    if (mode == MeasurementRecord::Mode::offdiag_mub) {
      auto [k, m] = sample_mub_povm(
          std::span<const std::complex<double>>(psi.data(), psi.size()), fam, rng);
      rec.outcomes.emplace_back(static_cast<uint16_t>(k), static_cast<uint16_t>(m));
    } else {
      Eigen::VectorXd probs = psi.cwiseAbs2();
      std::uniform_real_distribution<double> uni(0.0, 1.0);
      double r = uni(rng) * probs.sum();
      int k = 0;
      for (; k < probs.size() - 1; ++k) {
        r -= probs(k);
        if (r <= 0) break;
      }
      rec.outcomes.emplace_back(static_cast<uint16_t>(k), uint16_t{1});
    }
  }
  return rec;
}

uint64_t sqst_sample_size(double epsilon, double delta) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::domain_error("epsilon must be in (0,1)");
  if (!(delta > 0.0 && delta < 1.0)) throw std::domain_error("delta must be in (0,1)");
  return static_cast<uint64_t>(std::ceil(2.0 * std::log(4.0 / delta) / (epsilon * epsilon)));
}

uint64_t sqst_sample_size(double epsilon, double delta, uint64_t m_estimates) {
  return sqst_sample_size(epsilon, union_split(delta, m_estimates));
}

EstimateWithError sqst_estimate_element(const MeasurementRecord &offdiag,
                                        const MeasurementRecord *diag, int i, int j,
                                        const MubFamily &fam, double delta) {
  int d = fam.dimension();
  if (i < 0 || j < 0 || i >= d || j >= d) throw std::invalid_argument("element out of range");

  EstimateWithError est;
  est.delta = delta;
  if (i == j) {
    if (diag == nullptr || diag->mode != MeasurementRecord::Mode::diag_computational) {
      throw std::invalid_argument("diagonal elements need a computational-basis record");
    }
    uint64_t hits = 0;
    for (const auto &[k, m] : diag->outcomes) {
      if (k == i) ++hits;
    }
    uint64_t n = diag->outcomes.size();
    if (n == 0) throw std::invalid_argument("empty record");
    est.value = static_cast<double>(hits) / static_cast<double>(n);
    est.n_used = n;
    // Bernoulli Hoeffding: Pr[|mean - p| >= eps] <= 2 exp(-2 N eps^2)
    est.epsilon = std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(n)));
    return est;
  }

  if (offdiag.mode != MeasurementRecord::Mode::offdiag_mub) {
    throw std::invalid_argument("off-diagonal elements need an offdiag MUB record");
  }
  if (offdiag.d != d) throw std::invalid_argument("record dimension mismatch");
  uint64_t n = offdiag.outcomes.size();
  if (n == 0) throw std::invalid_argument("empty record");
  std::complex<double> acc{0, 0};
  for (const auto &[k, m] : offdiag.outcomes) acc += eta(i, j, k, m, fam);
  est.value = acc / static_cast<double>(n);
  est.n_used = n;
  // complex Hoeffding: Pr[|est - rho_ij| >= eps] <= 4 exp(-N eps^2 / 2)
  est.epsilon = std::sqrt(2.0 * std::log(4.0 / delta) / static_cast<double>(n));
  return est;
}

EstimateWithError sqst_estimate_observable(const MeasurementRecord &offdiag,
                                           const MeasurementRecord &diag,
                                           const ObservableMatrix &a, const MubFamily &fam,
                                           double delta) {
  int d = fam.dimension();
  if (a.dimension() != d) throw std::invalid_argument("observable dimension mismatch");
  if (offdiag.mode != MeasurementRecord::Mode::offdiag_mub ||
      diag.mode != MeasurementRecord::Mode::diag_computational) {
    throw std::invalid_argument("need one offdiag and one diag record");
  }
  if (offdiag.outcomes.empty() || diag.outcomes.empty()) {
    throw std::invalid_argument("empty record");
  }

  const Eigen::MatrixXcd &m = a.entries();
  Eigen::MatrixXcd tilde = m;
  tilde.diagonal().setZero();

  // diagonal part: mean of a_ii at the observed computational outcomes
  double diag_acc = 0;
  for (const auto &[k, mm] : diag.outcomes) diag_acc += m(k, k).real();
  double diag_mean = diag_acc / static_cast<double>(diag.outcomes.size());

  // off-diagonal part: mean of a_km = d Tr[tilde Pi_k^(m)], memoized per cell
  std::map<std::pair<int, int>, double> memo;
  double off_acc = 0;
  for (const auto &[k, mm] : offdiag.outcomes) {
    auto key = std::make_pair(static_cast<int>(k), static_cast<int>(mm));
    auto it = memo.find(key);
    if (it == memo.end()) {
      Eigen::VectorXcd v = fam.vector(k, mm);
      double val = d * (v.adjoint() * tilde * v).value().real();
      it = memo.emplace(key, val).first;
    }
    off_acc += it->second;
  }
  double off_mean = off_acc / static_cast<double>(offdiag.outcomes.size());

  double c = a.entrywise_one_norm();
  double half = delta / 2.0;
  double eps_diag =
      c * std::sqrt(std::log(2.0 / half) / (2.0 * static_cast<double>(diag.outcomes.size())));
  double eps_off =
      c * std::sqrt(2.0 * std::log(4.0 / half) / static_cast<double>(offdiag.outcomes.size()));

  EstimateWithError est;
  est.value = diag_mean + off_mean;
  est.delta = delta;
  est.epsilon = eps_diag + eps_off;
  est.n_used = diag.outcomes.size() + offdiag.outcomes.size();
  return est;
}

// --- classical shadows ----------------------------------------------------

namespace {

const char *ensemble_name(ShadowSnapshotSet::Ensemble e) {
  return e == ShadowSnapshotSet::Ensemble::random_pauli ? "pauli" : "clifford";
}

}  // namespace

void ShadowSnapshotSet::serialize(std::ostream &out) const {
  out << "fewcopy-shadows v1\n";
  out << "ensemble " << ensemble_name(ensemble) << "\n";
  out << "n " << n_qubits << "\n";
  out << "count " << snapshots.size() << "\n";
  out << "seed " << seed << "\n";
  out << "label " << (source_label.empty() ? "-" : source_label) << "\n";
  out << "data\n";
  for (const auto &s : snapshots) {
    if (ensemble == Ensemble::random_pauli) {
      for (PauliBasis b : s.bases) out << basis_char(b);
    } else {
      out << circuit_to_string(s.circuit) << " |";
    }
    out << ' ';
    for (uint8_t b : s.outcome) out << static_cast<int>(b);
    out << "\n";
  }
  out << "end\n";
}

ShadowSnapshotSet ShadowSnapshotSet::parse(std::istream &in) {
  ShadowSnapshotSet set;
  expect_token(in, "fewcopy-shadows");
  expect_token(in, "v1");
  expect_token(in, "ensemble");
  std::string ens;
  in >> ens;
  if (ens == "pauli") set.ensemble = Ensemble::random_pauli;
  else if (ens == "clifford") set.ensemble = Ensemble::random_clifford;
  else throw std::invalid_argument("shadow parse error: unknown ensemble " + ens);
  expect_token(in, "n");
  in >> set.n_qubits;
  expect_token(in, "count");
  uint64_t count = 0;
  in >> count;
  expect_token(in, "seed");
  in >> set.seed;
  expect_token(in, "label");
  in >> set.source_label;
  if (set.source_label == "-") set.source_label.clear();
  expect_token(in, "data");
  in >> std::ws;
  set.snapshots.resize(count);
  std::string line;
  for (uint64_t i = 0; i < count; ++i) {
    if (!std::getline(in, line)) throw std::invalid_argument("shadow parse error: truncated");
    ShadowSnapshot &snap = set.snapshots[i];
    size_t cut = line.rfind(' ');
    if (cut == std::string::npos) throw std::invalid_argument("shadow parse error: bad line");
    std::string setting = line.substr(0, cut);
    std::string bits = line.substr(cut + 1);
    if (set.ensemble == Ensemble::random_pauli) {
      for (char c : setting) snap.bases.push_back(basis_from_char(c));
    } else {
      size_t pipe = setting.rfind(" |");
      if (pipe == std::string::npos) throw std::invalid_argument("shadow parse error: bad line");
      snap.circuit = circuit_from_string(setting.substr(0, pipe));
    }
    for (char c : bits) {
      if (c != '0' && c != '1') throw std::invalid_argument("shadow parse error: bad outcome");
      snap.outcome.push_back(static_cast<uint8_t>(c - '0'));
    }
    if (static_cast<int>(snap.outcome.size()) != set.n_qubits) {
      throw std::invalid_argument("shadow parse error: outcome width mismatch");
    }
  }
  expect_token(in, "end");
  return set;
}

ShadowSnapshotSet shadows_collect(NoisyStateSource &source, uint64_t n_snapshots,
                                  ShadowSnapshotSet::Ensemble ensemble, uint64_t seed) {
  int n = source.n_qubits();
  if (ensemble == ShadowSnapshotSet::Ensemble::random_clifford && n > 10) {
    throw CapacityError("clifford shadow ensemble rotates the full state; n <= 10");
  }
  ShadowSnapshotSet set;
  set.ensemble = ensemble;
  set.n_qubits = n;
  set.seed = seed;
  set.source_label = source.target().label();
  set.snapshots.resize(n_snapshots);

  for (uint64_t s = 0; s < n_snapshots; ++s) {
    std::mt19937_64 rng = derive_rng(seed, s);
    auto [is_noise, shot] = source.next_shot_ref(rng);
    (void)is_noise;
    ShadowSnapshot &snap = set.snapshots[s];
    if (ensemble == ShadowSnapshotSet::Ensemble::random_pauli) {
      std::uniform_int_distribution<int> pick(0, 2);
      snap.bases.resize(n);
      for (auto &b : snap.bases) b = static_cast<PauliBasis>(pick(rng));
      snap.outcome = sample_local_measurement(*shot, snap.bases, rng);
    } else {
      CliffordTableau t = random_clifford_tableau(n, rng);
      snap.circuit = synthesize_circuit(t);
      StateVector rotated = *shot;
      apply_circuit(rotated, snap.circuit);
      std::vector<PauliBasis> zz(n, PauliBasis::Z);
      snap.outcome = sample_local_measurement(rotated, zz, rng);
    }
  }
  return set;
}

Eigen::MatrixXcd shadow_snapshot_matrix(const ShadowSnapshot &snap,
                                        ShadowSnapshotSet::Ensemble ensemble, int n_qubits) {
  Eigen::Index dim = Eigen::Index{1} << n_qubits;
  if (ensemble == ShadowSnapshotSet::Ensemble::random_pauli) {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
    for (int q = 0; q < n_qubits; ++q) {
      cplx e[2];
      // ket of (basis, outcome)
      switch (snap.bases[q]) {
        case PauliBasis::Z:
          e[0] = snap.outcome[q] ? 0.0 : 1.0;
          e[1] = snap.outcome[q] ? 1.0 : 0.0;
          break;
        case PauliBasis::X:
          e[0] = 1.0 / std::sqrt(2.0);
          e[1] = (snap.outcome[q] ? -1.0 : 1.0) / std::sqrt(2.0);
          break;
        case PauliBasis::Y:
          e[0] = 1.0 / std::sqrt(2.0);
          e[1] = cplx(0.0, snap.outcome[q] ? -1.0 : 1.0) / std::sqrt(2.0);
          break;
      }
      Eigen::Matrix2cd f;
      for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) f(r, c) = 3.0 * e[r] * std::conj(e[c]);
      }
      f -= Eigen::Matrix2cd::Identity();
      Eigen::MatrixXcd next(out.rows() * 2, out.cols() * 2);
      for (Eigen::Index i = 0; i < out.rows(); ++i) {
        for (Eigen::Index j = 0; j < out.cols(); ++j) next.block<2, 2>(2 * i, 2 * j) = out(i, j) * f;
      }
      out.swap(next);
    }
    return out;
  }

  uint64_t b = 0;
  for (int q = 0; q < n_qubits; ++q) b = (b << 1) | snap.outcome[q];
  StateVector phi = StateVector::basis(n_qubits, b);
  apply_inverse_circuit(phi, snap.circuit);
  Eigen::Map<const Eigen::VectorXcd> v(phi.amplitudes().data(), dim);
  return static_cast<double>(dim + 1) * (v * v.adjoint()) -
         Eigen::MatrixXcd::Identity(dim, dim);
}

std::vector<double> shadow_single_estimates(const ShadowSnapshotSet &set,
                                            const ObservableMatrix &a) {
  Eigen::Index dim = Eigen::Index{1} << set.n_qubits;
  if (a.dimension() != dim) throw std::invalid_argument("observable dimension mismatch");
  std::vector<double> vals;
  vals.reserve(set.snapshots.size());

  if (set.ensemble == ShadowSnapshotSet::Ensemble::random_pauli) {
    for (const auto &snap : set.snapshots) {
      // contract Tr[A (f_0 x f_1 x ...)] one qubit at a time
      Eigen::MatrixXcd t = a.entries();
      for (int q = 0; q < set.n_qubits; ++q) {
        cplx e[2];
        switch (snap.bases[q]) {
          case PauliBasis::Z:
            e[0] = snap.outcome[q] ? 0.0 : 1.0;
            e[1] = snap.outcome[q] ? 1.0 : 0.0;
            break;
          case PauliBasis::X:
            e[0] = 1.0 / std::sqrt(2.0);
            e[1] = (snap.outcome[q] ? -1.0 : 1.0) / std::sqrt(2.0);
            break;
          case PauliBasis::Y:
            e[0] = 1.0 / std::sqrt(2.0);
            e[1] = cplx(0.0, snap.outcome[q] ? -1.0 : 1.0) / std::sqrt(2.0);
            break;
        }
        Eigen::Matrix2cd f;
        for (int r = 0; r < 2; ++r) {
          for (int c = 0; c < 2; ++c) f(r, c) = 3.0 * e[r] * std::conj(e[c]);
        }
        f -= Eigen::Matrix2cd::Identity();
        // T'[r,c] = sum_{a,b} f(b,a) T[a*h+r, b*h+c]
        Eigen::Index h = t.rows() / 2;
        Eigen::MatrixXcd next = Eigen::MatrixXcd::Zero(h, h);
        for (int ai = 0; ai < 2; ++ai) {
          for (int bi = 0; bi < 2; ++bi) {
            next += f(bi, ai) * t.block(ai * h, bi * h, h, h);
          }
        }
        t.swap(next);
      }
      vals.push_back(t(0, 0).real());
    }
    return vals;
  }

  double tra = a.entries().trace().real();
  for (const auto &snap : set.snapshots) {
    uint64_t b = 0;
    for (int q = 0; q < set.n_qubits; ++q) b = (b << 1) | snap.outcome[q];
    StateVector phi = StateVector::basis(set.n_qubits, b);
    apply_inverse_circuit(phi, snap.circuit);
    Eigen::Map<const Eigen::VectorXcd> v(phi.amplitudes().data(), dim);
    double exp_phi = (v.adjoint() * a.entries() * v).value().real();
    vals.push_back(static_cast<double>(dim + 1) * exp_phi - tra);
  }
  return vals;
}

EstimateWithError shadows_estimate(const ShadowSnapshotSet &set, const ObservableMatrix &a,
                                   uint64_t k_groups) {
  std::vector<double> vals = shadow_single_estimates(set, a);
  if (k_groups < 1 || k_groups > vals.size()) {
    throw std::invalid_argument("k_groups must be in [1, n_snapshots]");
  }
  EstimateWithError est;
  est.value = median_of_means(vals, k_groups);
  est.n_used = vals.size();
  est.delta = 2.0 * std::exp(-static_cast<double>(k_groups) / 8.0);
  double dim = static_cast<double>(Eigen::Index{1} << set.n_qubits);
  Eigen::MatrixXcd traceless =
      a.entries() - (a.entries().trace() / dim) * Eigen::MatrixXcd::Identity(a.dimension(),
                                                                             a.dimension());
  double var = 3.0 * traceless.squaredNorm();
  est.epsilon = std::sqrt(34.0 * var / std::floor(static_cast<double>(vals.size()) /
                                                  static_cast<double>(k_groups)));
  return est;
}

std::vector<EstimateWithError> shadows_estimate(const ShadowSnapshotSet &set,
                                                const std::vector<ObservableMatrix> &obs,
                                                uint64_t k_groups) {
  std::vector<EstimateWithError> out;
  out.reserve(obs.size());
  for (const auto &a : obs) out.push_back(shadows_estimate(set, a, k_groups));
  return out;
}

}  // namespace fewcopy
