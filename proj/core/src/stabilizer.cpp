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

#include "fewcopy/stabilizer.hpp"

#include <bit>
#include <stdexcept>

namespace fewcopy {

StabilizerTableau::StabilizerTableau(int n_qubits) : n_(n_qubits) {
  if (n_ < 1) throw std::invalid_argument("tableau needs at least one qubit");
  words_ = (static_cast<size_t>(n_) + 63) / 64;
  x_.assign(2 * static_cast<size_t>(n_) * words_, 0);
  z_.assign(2 * static_cast<size_t>(n_) * words_, 0);
  phase_.assign(2 * static_cast<size_t>(n_), 0);
}

StabilizerTableau StabilizerTableau::computational_zero(int n_qubits) {
  return computational_basis(std::vector<uint8_t>(n_qubits, 0));
}

StabilizerTableau StabilizerTableau::computational_basis(const std::vector<uint8_t> &bits) {
  StabilizerTableau t(static_cast<int>(bits.size()));
  for (int k = 0; k < t.n_; ++k) {
    t.set_bit(t.x_, k, k, true);           // destabilizer X_k
    t.set_bit(t.z_, t.n_ + k, k, true);    // stabilizer (-1)^bit Z_k
    t.phase_[t.n_ + k] = bits[k] ? 2 : 0;
  }
  return t;
}

int StabilizerTableau::stab_sign(int row) const {
  int e = phase_[n_ + row] % 4;
  if (e == 0) return +1;
  if (e == 2) return -1;
  throw std::logic_error("stabilizer row carries an imaginary phase");
}

SignedPauli StabilizerTableau::stabilizer(int row) const {
  SignedPauli out;
  out.sign = stab_sign(row);
  for (int q = 0; q < n_; ++q) {
    bool xb = stab_x(row, q), zb = stab_z(row, q);
    if (!xb && !zb) continue;
    PauliBasis b = xb ? (zb ? PauliBasis::Y : PauliBasis::X) : PauliBasis::Z;
    out.word.factors.emplace(q, b);
  }
  return out;
}

void StabilizerTableau::set_stabilizer(int row, const SignedPauli &stab,
                                       const SparsePauli &destab) {
  PackedRow s = pack(stab.word);
  PackedRow d = pack(destab);
  for (size_t w = 0; w < words_; ++w) {
    x_[(n_ + row) * words_ + w] = s.x[w];
    z_[(n_ + row) * words_ + w] = s.z[w];
    x_[row * words_ + w] = d.x[w];
    z_[row * words_ + w] = d.z[w];
  }
  phase_[n_ + row] = stab.sign < 0 ? 2 : 0;
  phase_[row] = 0;
}

StabilizerTableau::PackedRow StabilizerTableau::pack(const SparsePauli &p) const {
  PackedRow r;
  r.x.assign(words_, 0);
  r.z.assign(words_, 0);
  for (const auto &[q, b] : p.factors) {
    if (q < 0 || q >= n_) throw std::invalid_argument("pauli qubit out of range");
    uint64_t bit = uint64_t{1} << (q % 64);
    if (b != PauliBasis::Z) r.x[q / 64] |= bit;
    if (b != PauliBasis::X) r.z[q / 64] |= bit;
  }
  return r;
}

bool StabilizerTableau::row_anticommutes(int row, const PackedRow &p) const {
  uint64_t acc = 0;
  const uint64_t *rx = &x_[row * words_], *rz = &z_[row * words_];
  for (size_t w = 0; w < words_; ++w) {
    acc ^= std::popcount((rx[w] & p.z[w]) ^ (rz[w] & p.x[w])) & 1ull;
  }
  return acc & 1;
}

bool StabilizerTableau::rows_anticommute(int row_a, int row_b) const {
  uint64_t acc = 0;
  const uint64_t *ax = &x_[row_a * words_], *az = &z_[row_a * words_];
  const uint64_t *bx = &x_[row_b * words_], *bz = &z_[row_b * words_];
  for (size_t w = 0; w < words_; ++w) {
    acc ^= std::popcount((ax[w] & bz[w]) ^ (az[w] & bx[w])) & 1ull;
  }
  return acc & 1;
}

// dst <- dst * src. Rows must commute so the product is Hermitian; the
// accumulated i-exponent stays even.
void StabilizerTableau::mult_row(int dst, int src) {
  uint64_t *dx = &x_[dst * words_], *dz = &z_[dst * words_];
  const uint64_t *sx = &x_[src * words_], *sz = &z_[src * words_];
  int e = 0;
  for (size_t w = 0; w < words_; ++w) {
    uint64_t x1 = dx[w], z1 = dz[w], x2 = sx[w], z2 = sz[w];
    uint64_t left_x = x1 & ~z1, left_y = x1 & z1, left_z = ~x1 & z1;
    uint64_t plus = (left_y & z2 & ~x2) | (left_x & x2 & z2) | (left_z & x2 & ~z2);
    uint64_t minus = (left_y & x2 & ~z2) | (left_x & ~x2 & z2) | (left_z & x2 & z2);
    e += std::popcount(plus) - std::popcount(minus);
    dx[w] = x1 ^ x2;
    dz[w] = z1 ^ z2;
  }
  phase_[dst] = static_cast<uint8_t>(((phase_[dst] + phase_[src] + e) % 4 + 4) % 4);
}

void StabilizerTableau::copy_row(int dst, int src) {
  for (size_t w = 0; w < words_; ++w) {
    x_[dst * words_ + w] = x_[src * words_ + w];
    z_[dst * words_ + w] = z_[src * words_ + w];
  }
  phase_[dst] = phase_[src];
}

bool StabilizerTableau::is_deterministic(const SparsePauli &p) const {
  PackedRow pr = pack(p);
  for (int r = n_; r < 2 * n_; ++r) {
    if (row_anticommutes(r, pr)) return false;
  }
  return true;
}

int StabilizerTableau::measure(const SparsePauli &p, std::mt19937_64 &rng) {
  if (p.empty()) throw std::invalid_argument("measurement needs a nonempty pauli support");
  PackedRow pr = pack(p);

  int pivot = -1;
  for (int r = n_; r < 2 * n_; ++r) {
    if (row_anticommutes(r, pr)) { pivot = r; break; }
  }

  if (pivot >= 0) {
    // Random outcome: fix up every other anticommuting row, then install p.
    for (int r = 0; r < 2 * n_; ++r) {
      if (r == pivot || r == pivot - n_) continue;
      if (row_anticommutes(r, pr)) mult_row(r, pivot);
    }
    copy_row(pivot - n_, pivot);
    for (size_t w = 0; w < words_; ++w) {
      x_[pivot * words_ + w] = pr.x[w];
      z_[pivot * words_ + w] = pr.z[w];
    }
    int sign = (rng() & 1) ? -1 : +1;
    phase_[pivot] = sign < 0 ? 2 : 0;
    return sign;
  }

  // Deterministic: accumulate the stabilizer-group expression of p via the
  // destabilizer pattern and read off its sign.
  std::vector<uint64_t> sx(words_, 0), sz(words_, 0);
  int e = 0;
  for (int j = 0; j < n_; ++j) {
    if (!row_anticommutes(j, pr)) continue;
    const uint64_t *gx = &x_[(n_ + j) * words_], *gz = &z_[(n_ + j) * words_];
    for (size_t w = 0; w < words_; ++w) {
      uint64_t x1 = sx[w], z1 = sz[w], x2 = gx[w], z2 = gz[w];
      uint64_t left_x = x1 & ~z1, left_y = x1 & z1, left_z = ~x1 & z1;
      uint64_t plus = (left_y & z2 & ~x2) | (left_x & x2 & z2) | (left_z & x2 & ~z2);
      uint64_t minus = (left_y & x2 & ~z2) | (left_x & ~x2 & z2) | (left_z & x2 & z2);
      e += std::popcount(plus) - std::popcount(minus);
      sx[w] = x1 ^ x2;
      sz[w] = z1 ^ z2;
    }
    e += phase_[n_ + j];
  }
  e = ((e % 4) + 4) % 4;
  return e == 0 ? +1 : -1;
}

bool StabilizerTableau::valid() const {
  for (int i = 0; i < 2 * n_; ++i) {
    if (phase_[i] % 2 != 0) return false;
  }
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      if (rows_anticommute(n_ + i, n_ + j)) return false;        // stab x stab
      if (rows_anticommute(i, j)) return false;                  // destab x destab
      bool anti = rows_anticommute(i, n_ + j);
      if (anti != (i == j)) return false;                        // pairing
    }
  }
  return stabilizer_rank() == n_;
}

int StabilizerTableau::stabilizer_rank() const {
  // Gaussian elimination over F2 on the (x|z) stabilizer block.
  std::vector<std::vector<uint64_t>> rows(n_);
  for (int r = 0; r < n_; ++r) {
    rows[r].resize(2 * words_);
    for (size_t w = 0; w < words_; ++w) {
      rows[r][w] = x_[(n_ + r) * words_ + w];
      rows[r][words_ + w] = z_[(n_ + r) * words_ + w];
    }
  }
  int rank = 0;
  for (size_t col = 0; col < 2 * words_ * 64 && rank < n_; ++col) {
    size_t w = col / 64;
    uint64_t bit = uint64_t{1} << (col % 64);
    int pivot = -1;
    for (int r = rank; r < n_; ++r) {
      if (rows[r][w] & bit) { pivot = r; break; }
    }
    if (pivot < 0) continue;
    std::swap(rows[rank], rows[pivot]);
    for (int r = 0; r < n_; ++r) {
      if (r != rank && (rows[r][w] & bit)) {
        for (size_t k = 0; k < 2 * words_; ++k) rows[r][k] ^= rows[rank][k];
      }
    }
    ++rank;
  }
  return rank;
}

StabilizerTableau init_linear_cluster(int n, bool periodic) {
  if (periodic && n < 3) throw std::invalid_argument("periodic cluster needs n >= 3");
  if (!periodic && n < 2) throw std::invalid_argument("linear cluster needs n >= 2");
  StabilizerTableau t(n);
  for (int k = 0; k < n; ++k) {
    SignedPauli g;
    g.word.factors.emplace(k, PauliBasis::X);
    if (k > 0 || periodic) g.word.factors.emplace((k + n - 1) % n, PauliBasis::Z);
    if (k < n - 1 || periodic) g.word.factors.emplace((k + 1) % n, PauliBasis::Z);
    SparsePauli d;
    d.factors.emplace(k, PauliBasis::Z);
    t.set_stabilizer(k, g, d);
  }
  return t;
}

int measure_pauli_product(StabilizerTableau &tableau, const SparsePauli &p,
                          std::mt19937_64 &rng) {
  return tableau.measure(p, rng);
}

}  // namespace fewcopy
