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

#include <cstdint>
#include <vector>

#include "fewcopy/noisy_source.hpp"
#include "fewcopy/observable.hpp"
#include "fewcopy/state_vector.hpp"

namespace fewcopy {

struct QsvSetting {
  double probability = 0;
  ObservableMatrix pass_projector;  // M_{1|m}, full system dimension
};

/// Verification strategy Omega = sum_m p_m M_{1|m} with the target as its
/// unique +1 eigenvector. nu = 1 - lambda_2 is the spectral gap driving the
/// round count; lambda_2 itself is exposed alongside since the literature
/// names both conventions.
class QsvStrategy {
 public:
  const std::vector<QsvSetting> &settings() const { return settings_; }
  const ObservableMatrix &omega_hat() const { return omega_; }
  double nu() const { return nu_; }
  double second_eigenvalue() const { return lambda2_; }
  int n_qubits() const { return n_qubits_; }

  friend QsvStrategy qsv_build_strategy(std::vector<QsvSetting> settings);

 private:
  std::vector<QsvSetting> settings_;
  ObservableMatrix omega_;
  double nu_ = 0;
  double lambda2_ = 0;
  int n_qubits_ = 0;
};

/// Assemble and eigendecompose the strategy operator. Throws when the
/// probabilities do not sum to one, the top eigenvalue is not 1, or the +1
/// eigenspace is degenerate (the strategy would not be uniquely optimal).
QsvStrategy qsv_build_strategy(std::vector<QsvSetting> settings);

/// {1/3 Q_X, 1/3 Q_Y, 1/3 Q_Z} for the two-qubit singlet; nu = 2/3.
QsvStrategy singlet_xyz_strategy();

/// Projection strategy {1, |psi><psi|}; nu = 1.
QsvStrategy projector_strategy(const StateVector &target);

struct QsvVerdict {
  bool accepted = false;
  uint64_t rounds_planned = 0;
  uint64_t rounds_run = 0;
  int64_t failed_round = -1;  // 0-based; -1 when accepted
};

/// ceil(log(1/delta) / (nu * epsilon)).
uint64_t qsv_rounds_needed(double nu, double epsilon, double delta);

/// Sequential verification: per round draw a setting, measure its pass
/// projector on a fresh copy, abort on the first failure.
QsvVerdict qsv_run(const QsvStrategy &strategy, NoisyStateSource &source, double epsilon,
                   double delta, uint64_t seed);

}  // namespace fewcopy
