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

#include "fewcopy/qsv.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "fewcopy/pauli.hpp"
#include "fewcopy/rng.hpp"

namespace fewcopy {

QsvStrategy qsv_build_strategy(std::vector<QsvSetting> settings) {
  if (settings.empty()) throw std::invalid_argument("strategy needs at least one setting");
  double psum = 0;
  Eigen::Index dim = settings.front().pass_projector.dimension();
  for (const auto &s : settings) {
    if (s.probability < -1e-12) throw std::invalid_argument("negative setting probability");
    if (s.pass_projector.dimension() != dim) {
      throw std::invalid_argument("settings have mismatched dimensions");
    }
    psum += s.probability;
  }
  if (std::abs(psum - 1.0) > 1e-10) {
    throw std::invalid_argument("setting probabilities must sum to 1");
  }

  Eigen::MatrixXcd omega = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto &s : settings) omega += s.probability * s.pass_projector.entries();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(omega);
  double top = eig.eigenvalues()(dim - 1);
  double second = eig.eigenvalues()(dim - 2);
  if (std::abs(top - 1.0) > 1e-9) {
    throw std::invalid_argument("strategy operator must have top eigenvalue 1 (target passes always)");
  }
  if (second > 1.0 - 1e-9) {
    throw std::invalid_argument("degenerate +1 eigenspace: strategy is not uniquely optimal");
  }

  QsvStrategy out;
  out.settings_ = std::move(settings);
  out.omega_ = ObservableMatrix(std::move(omega));
  out.lambda2_ = second;
  out.nu_ = 1.0 - second;
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  out.n_qubits_ = n;
  return out;
}

QsvStrategy singlet_xyz_strategy() {
  auto anti = [](PauliBasis b) {
    SignedPauli p;
    p.word.factors.emplace(0, b);
    p.word.factors.emplace(1, b);
    Eigen::MatrixXcd m =
        0.5 * (Eigen::MatrixXcd::Identity(4, 4) - dense_pauli(p, 2));
    return ObservableMatrix(std::move(m));
  };
  std::vector<QsvSetting> settings;
  for (PauliBasis b : {PauliBasis::X, PauliBasis::Y, PauliBasis::Z}) {
    settings.push_back(QsvSetting{1.0 / 3.0, anti(b)});
  }
  return qsv_build_strategy(std::move(settings));
}

QsvStrategy projector_strategy(const StateVector &target) {
  Eigen::Map<const Eigen::VectorXcd> psi(target.amplitudes().data(),
                                         target.amplitudes().size());
  Eigen::MatrixXcd proj = psi * psi.adjoint();
  return qsv_build_strategy({QsvSetting{1.0, ObservableMatrix(std::move(proj))}});
}

uint64_t qsv_rounds_needed(double nu, double epsilon, double delta) {
  if (!(nu > 0.0 && nu <= 1.0)) throw std::domain_error("nu must be in (0,1]");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::domain_error("epsilon must be in (0,1)");
  if (!(delta > 0.0 && delta < 1.0)) throw std::domain_error("delta must be in (0,1)");
  return static_cast<uint64_t>(std::ceil(std::log(1.0 / delta) / (nu * epsilon)));
}

QsvVerdict qsv_run(const QsvStrategy &strategy, NoisyStateSource &source, double epsilon,
                   double delta, uint64_t seed) {
  if (source.n_qubits() != strategy.n_qubits()) {
    throw std::invalid_argument("source width does not match strategy");
  }
  QsvVerdict verdict;
  verdict.rounds_planned = qsv_rounds_needed(strategy.nu(), epsilon, delta);

  std::vector<double> cdf(strategy.settings().size());
  double acc = 0;
  for (size_t i = 0; i < cdf.size(); ++i) {
    acc += strategy.settings()[i].probability;
    cdf[i] = acc;
  }
  std::vector<int> all_qubits(strategy.n_qubits());
  for (int q = 0; q < strategy.n_qubits(); ++q) all_qubits[q] = q;

  for (uint64_t r = 0; r < verdict.rounds_planned; ++r) {
    std::mt19937_64 rng = derive_rng(seed, r);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    double u = uni(rng) * acc;
    size_t pick = std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin();
    if (pick >= cdf.size()) pick = cdf.size() - 1;
    StateVector shot = source.next_shot(rng);
    int pass = measure_projector(shot, all_qubits,
                                 strategy.settings()[pick].pass_projector.entries(), rng);
    ++verdict.rounds_run;
    if (!pass) {
      verdict.accepted = false;
      verdict.failed_round = static_cast<int64_t>(r);
      return verdict;
    }
  }
  verdict.accepted = true;
  return verdict;
}

}  // namespace fewcopy
