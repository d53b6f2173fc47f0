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

#include "fewcopy/hamiltonian.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "fewcopy/errors.hpp"

namespace fewcopy {

void LocalHamiltonian::validate() const {
  if (n < 1) throw std::invalid_argument("hamiltonian needs at least one site");
  for (const auto &[word, w] : terms) {
    (void)w;
    if (static_cast<int>(word.factors.size()) > locality) {
      throw std::invalid_argument("term support exceeds declared locality");
    }
    if (word.max_qubit() >= n) throw std::invalid_argument("term acts outside the chain");
  }
}

LocalHamiltonian heisenberg_chain(int n, bool periodic) {
  if (n < 2) throw std::invalid_argument("heisenberg chain needs n >= 2");
  if (periodic && n % 2 != 0) {
    throw std::invalid_argument("periodic heisenberg demo requires even n (Neel bound)");
  }
  LocalHamiltonian h;
  h.n = n;
  h.locality = 2;
  int bonds = periodic ? n : n - 1;
  for (int b = 0; b < bonds; ++b) {
    int i = b, j = (b + 1) % n;
    for (PauliBasis p : {PauliBasis::X, PauliBasis::Y, PauliBasis::Z}) {
      SparsePauli word;
      word.factors.emplace(i, p);
      word.factors.emplace(j, p);
      h.terms.emplace_back(std::move(word), 0.25);
    }
  }
  // Neel saturates -1/4 on every bond
  h.eps_sep = -0.25 * static_cast<double>(bonds) / static_cast<double>(n);
  h.eps_0 = std::numeric_limits<double>::quiet_NaN();
  return h;
}

Eigen::MatrixXcd dense_hamiltonian(const LocalHamiltonian &h) {
  if (h.n > 14) throw CapacityError("dense hamiltonian limited to n <= 14");
  Eigen::Index dim = Eigen::Index{1} << h.n;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto &[word, w] : h.terms) {
    m += w * dense_pauli(SignedPauli{word, +1}, h.n);
  }
  return m;
}

StateVector solve_ground_state(LocalHamiltonian &h, int cap) {
  if (h.n > cap || h.n > 12) {
    throw CapacityError("exact diagonalization limited to n <= 12");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(dense_hamiltonian(h));
  h.eps_0 = solver.eigenvalues()(0) / static_cast<double>(h.n);
  Eigen::VectorXcd v = solver.eigenvectors().col(0);
  std::vector<cplx> amps(v.data(), v.data() + v.size());
  return StateVector(h.n, std::move(amps), "ground_state");
}

namespace {

// <prod_q r_q | H | prod_q r_q> as a function of per-site Bloch vectors:
// each term contributes w * prod_{q in support} r_q[axis]
double product_energy(const LocalHamiltonian &h, const std::vector<Eigen::Vector3d> &bloch) {
  double e = 0;
  for (const auto &[word, w] : h.terms) {
    double f = w;
    for (const auto &[q, b] : word.factors) f *= bloch[q](static_cast<int>(b));
    e += f;
  }
  return e;
}

}  // namespace

double min_product_energy(const LocalHamiltonian &h, int restarts, std::mt19937_64 &rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  double best = std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    std::vector<Eigen::Vector3d> bloch(h.n);
    for (auto &v : bloch) {
      v = Eigen::Vector3d(gauss(rng), gauss(rng), gauss(rng));
      v.normalize();
    }
    // coordinate sweeps: the energy is linear in each site's Bloch vector,
    // so the conditional optimum is the unit vector against the local field
    for (int sweep = 0; sweep < 200; ++sweep) {
      double before = product_energy(h, bloch);
      for (int q = 0; q < h.n; ++q) {
        Eigen::Vector3d field = Eigen::Vector3d::Zero();
        for (const auto &[word, w] : h.terms) {
          auto it = word.factors.find(q);
          if (it == word.factors.end()) continue;
          double f = w;
          for (const auto &[p, b] : word.factors) {
            if (p != q) f *= bloch[p](static_cast<int>(b));
          }
          field(static_cast<int>(it->second)) += f;
        }
        double norm = field.norm();
        if (norm > 1e-14) bloch[q] = -field / norm;
      }
      double after = product_energy(h, bloch);
      if (before - after < 1e-12) break;
    }
    best = std::min(best, product_energy(h, bloch));
  }
  return best;
}

}  // namespace fewcopy
