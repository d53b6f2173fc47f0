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

#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fewcopy/clifford.hpp"
#include "fewcopy/mub.hpp"
#include "fewcopy/noisy_source.hpp"
#include "fewcopy/observable.hpp"
#include "fewcopy/pauli.hpp"

namespace fewcopy {

/// Universal measurement record of the MUB POVM (off-diagonal mode, m >= 2)
/// or the computational basis (diagonal mode, m = 1). Reusable for unlimited
/// a-posteriori element queries.
struct MeasurementRecord {
  enum class Mode { offdiag_mub, diag_computational };

  Mode mode = Mode::offdiag_mub;
  int d = 0;
  uint64_t seed = 0;
  std::string source_label;
  std::vector<std::pair<uint16_t, uint16_t>> outcomes;  // (k, m)

  void validate() const;
  void serialize(std::ostream &out) const;
  static MeasurementRecord parse(std::istream &in);
};

/// Per-shot qudit source with an emission counter, so record-reuse claims
/// ("no further measurements") are checkable.
class QuditSource {
 public:
  QuditSource(Eigen::VectorXcd state, std::string label);
  QuditSource(int d, std::function<Eigen::VectorXcd(std::mt19937_64 &)> generator,
              std::string label);

  int d() const { return d_; }
  const std::string &label() const { return label_; }
  Eigen::VectorXcd shot(std::mt19937_64 &rng);
  uint64_t shots_emitted() const { return shots_; }

 private:
  int d_;
  std::string label_;
  std::optional<Eigen::VectorXcd> fixed_;
  std::function<Eigen::VectorXcd(std::mt19937_64 &)> generator_;
  uint64_t shots_ = 0;
};

struct EstimateWithError {
  std::complex<double> value;
  double epsilon = 0;  // error radius at confidence 1 - delta
  double delta = 0;
  uint64_t n_used = 0;
};

/// Collect N POVM (or computational) outcomes into a record.
MeasurementRecord sqst_collect(QuditSource &source, const MubFamily &fam, uint64_t n,
                               MeasurementRecord::Mode mode, uint64_t seed);

/// N = ceil(2 ln(4/delta) / eps^2): Hoeffding count for one element.
uint64_t sqst_sample_size(double epsilon, double delta);
/// Union-bound variant for m parallel estimates.
uint64_t sqst_sample_size(double epsilon, double delta, uint64_t m_estimates);

/// rho_ij estimate: off-diagonal elements average eta over the offdiag
/// record; diagonal elements are outcome frequencies in the diag record.
/// The reported epsilon inverts the producing Hoeffding bound at `delta`.
EstimateWithError sqst_estimate_element(const MeasurementRecord &offdiag,
                                        const MeasurementRecord *diag, int i, int j,
                                        const MubFamily &fam, double delta = 0.01);

/// <A> for an operator with finite entrywise 1-norm: diagonal part from the
/// computational record, off-diagonal part as the mean of
/// a_km = d Tr[(A - diag A) Pi_k^(m)] over the offdiag record. The error
/// budget is split evenly between the two parts.
EstimateWithError sqst_estimate_observable(const MeasurementRecord &offdiag,
                                           const MeasurementRecord &diag,
                                           const ObservableMatrix &a, const MubFamily &fam,
                                           double delta = 0.01);

// --- classical shadows ----------------------------------------------------

struct ShadowSnapshot {
  std::vector<PauliBasis> bases;    // random_pauli ensemble
  std::vector<CliffordOp> circuit;  // random_clifford ensemble
  std::vector<uint8_t> outcome;
};

struct ShadowSnapshotSet {
  enum class Ensemble { random_pauli, random_clifford };

  Ensemble ensemble = Ensemble::random_pauli;
  int n_qubits = 0;
  uint64_t seed = 0;
  std::string source_label;
  std::vector<ShadowSnapshot> snapshots;

  void serialize(std::ostream &out) const;
  static ShadowSnapshotSet parse(std::istream &in);
};

/// i.i.d. randomized-measurement snapshots. The clifford ensemble rotates
/// the full state by a uniformly random Clifford (n <= 10); the pauli
/// ensemble draws one of X/Y/Z per qubit.
ShadowSnapshotSet shadows_collect(NoisyStateSource &source, uint64_t n_snapshots,
                                  ShadowSnapshotSet::Ensemble ensemble, uint64_t seed);

/// Single-snapshot inverse-channel state estimate (dense; for enumeration
/// tests at small n): pauli ensemble tensor factors 3|s><s| - 1, clifford
/// ensemble (2^n + 1) U^dag |b><b| U - 1.
Eigen::MatrixXcd shadow_snapshot_matrix(const ShadowSnapshot &snap,
                                        ShadowSnapshotSet::Ensemble ensemble, int n_qubits);

/// Tr[A rho_hat_s] for every snapshot.
std::vector<double> shadow_single_estimates(const ShadowSnapshotSet &set,
                                            const ObservableMatrix &a);

/// Median-of-means over k groups of the single-snapshot estimates. The
/// reported (epsilon, delta) follow the shadow bound with the Frobenius
/// shadow norm: delta = 2 exp(-k/8), epsilon = sqrt(34 var / floor(N/k))
/// with var = 3 ||A - Tr(A)/d||_F^2.
EstimateWithError shadows_estimate(const ShadowSnapshotSet &set, const ObservableMatrix &a,
                                   uint64_t k_groups);
std::vector<EstimateWithError> shadows_estimate(const ShadowSnapshotSet &set,
                                                const std::vector<ObservableMatrix> &obs,
                                                uint64_t k_groups);

}  // namespace fewcopy
