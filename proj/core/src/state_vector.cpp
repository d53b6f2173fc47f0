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

#include "fewcopy/state_vector.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "fewcopy/errors.hpp"

namespace fewcopy {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

uint64_t qubit_mask(int n_qubits, int q) { return uint64_t{1} << (n_qubits - 1 - q); }

void check_capacity(int n, int cap) {
  if (n < 1) throw std::invalid_argument("qubit count must be positive");
  if (n > std::min(cap, kHardQubitCap)) {
    throw CapacityError("statevector capacity exceeded: n=" + std::to_string(n) +
                        " (cap " + std::to_string(std::min(cap, kHardQubitCap)) + ")");
  }
}

// Row vectors <e_o| of the measurement basis, indexed [outcome][bit].
// Outcome 0 is the +1 eigenvector.
void basis_bras(PauliBasis b, cplx u0[2], cplx u1[2]) {
  switch (b) {
    case PauliBasis::Z:
      u0[0] = 1; u0[1] = 0;
      u1[0] = 0; u1[1] = 1;
      return;
    case PauliBasis::X:
      u0[0] = kInvSqrt2; u0[1] = kInvSqrt2;
      u1[0] = kInvSqrt2; u1[1] = -kInvSqrt2;
      return;
    case PauliBasis::Y:
      u0[0] = kInvSqrt2; u0[1] = cplx(0, -kInvSqrt2);
      u1[0] = kInvSqrt2; u1[1] = cplx(0, kInvSqrt2);
      return;
  }
}

struct PauliMasks {
  uint64_t x = 0;   // bits flipped (X and Y factors)
  uint64_t zy = 0;  // bits contributing (-1)^bit (Z and Y factors)
  int n_y = 0;
  cplx base_phase = 1.0;  // sign * i^{n_y}
};

PauliMasks pauli_masks(const SignedPauli &p, int n_qubits) {
  PauliMasks m;
  for (const auto &[q, b] : p.word.factors) {
    if (q < 0 || q >= n_qubits) throw std::invalid_argument("pauli qubit out of range");
    uint64_t bit = qubit_mask(n_qubits, q);
    if (b != PauliBasis::Z) m.x |= bit;
    if (b != PauliBasis::X) m.zy |= bit;
    if (b == PauliBasis::Y) ++m.n_y;
  }
  static const cplx ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  m.base_phase = static_cast<double>(p.sign) * ipow[m.n_y % 4];
  return m;
}

// P|idx> = phase(idx) |idx ^ m.x>
inline cplx pauli_phase(const PauliMasks &m, uint64_t idx) {
  return (std::popcount(idx & m.zy) & 1) ? -m.base_phase : m.base_phase;
}

}  // namespace

StateVector::StateVector(int n_qubits, std::vector<cplx> amplitudes, std::string label)
    : n_qubits_(n_qubits), amps_(std::move(amplitudes)), label_(std::move(label)) {
  if (n_qubits_ < 1 || n_qubits_ > kHardQubitCap) {
    throw CapacityError("unsupported qubit count: " + std::to_string(n_qubits_));
  }
  if (amps_.size() != (uint64_t{1} << n_qubits_)) {
    throw std::invalid_argument("amplitude count is not 2^n");
  }
  if (std::abs(norm_sq() - 1.0) > 1e-8) {
    throw std::invalid_argument("state is not normalized");
  }
}

double StateVector::norm_sq() const {
  double s = 0;
  for (const cplx &a : amps_) s += std::norm(a);
  return s;
}

void StateVector::renormalize() {
  double inv = 1.0 / std::sqrt(norm_sq());
  for (cplx &a : amps_) a *= inv;
}

StateVector StateVector::zero(int n_qubits, int cap) {
  check_capacity(n_qubits, cap);
  std::vector<cplx> a(uint64_t{1} << n_qubits, cplx{0, 0});
  a[0] = 1;
  return StateVector(n_qubits, std::move(a), "zeros");
}

StateVector StateVector::basis(int n_qubits, uint64_t index, int cap) {
  check_capacity(n_qubits, cap);
  if (index >= (uint64_t{1} << n_qubits)) throw std::invalid_argument("basis index out of range");
  std::vector<cplx> a(uint64_t{1} << n_qubits, cplx{0, 0});
  a[index] = 1;
  return StateVector(n_qubits, std::move(a), "basis");
}

namespace {

std::vector<cplx> kron_chain(const std::vector<std::vector<cplx>> &factors) {
  std::vector<cplx> out{cplx{1, 0}};
  for (const auto &f : factors) {
    std::vector<cplx> next(out.size() * f.size());
    for (size_t i = 0; i < out.size(); ++i) {
      for (size_t j = 0; j < f.size(); ++j) next[i * f.size() + j] = out[i] * f[j];
    }
    out.swap(next);
  }
  return out;
}

}  // namespace

StateVector prepare_singlet_product(int n_pairs, int cap) {
  if (n_pairs < 1) throw std::invalid_argument("n_pairs must be positive");
  check_capacity(2 * n_pairs, cap);
  std::vector<cplx> pair{0, kInvSqrt2, -kInvSqrt2, 0};
  std::vector<std::vector<cplx>> fs(n_pairs, pair);
  return StateVector(2 * n_pairs, kron_chain(fs), "singlet_product");
}

StateVector prepare_linear_cluster(int n, bool periodic, int cap) {
  if (n < 2) throw std::invalid_argument("linear cluster needs n >= 2");
  if (periodic && n < 3) throw std::invalid_argument("periodic cluster needs n >= 3");
  check_capacity(n, cap);
  uint64_t dim = uint64_t{1} << n;
  double amp = std::pow(2.0, -0.5 * n);
  std::vector<cplx> a(dim);
  // CZ on each edge of the chain: amplitude sign is the parity of occupied
  // adjacent pairs
  for (uint64_t idx = 0; idx < dim; ++idx) {
    uint64_t adj = idx & (idx << 1);  // consecutive 1-bits
    int par = std::popcount(adj & (dim - 1));
    if (periodic) {
      uint64_t first = (idx >> (n - 1)) & 1, last = idx & 1;
      par += static_cast<int>(first & last);
    }
    a[idx] = (par & 1) ? -amp : amp;
  }
  return StateVector(n, std::move(a), periodic ? "linear_cluster_periodic" : "linear_cluster");
}

StateVector prepare_ghz(int n, int cap) {
  check_capacity(n, cap);
  uint64_t dim = uint64_t{1} << n;
  std::vector<cplx> a(dim, cplx{0, 0});
  a[0] = kInvSqrt2;
  a[dim - 1] = kInvSqrt2;
  return StateVector(n, std::move(a), "ghz");
}

StateVector prepare_cluster6_h() {
  std::vector<cplx> a(64, cplx{0, 0});
  a[0b000000] = 0.5;
  a[0b000111] = 0.5;
  a[0b111000] = 0.5;
  a[0b111111] = -0.5;
  return StateVector(6, std::move(a), "cluster6_h");
}

StateVector prepare_product_cheat_phi_p() {
  std::vector<cplx> xp{kInvSqrt2, kInvSqrt2};
  std::vector<cplx> xm{kInvSqrt2, -kInvSqrt2};
  std::vector<cplx> yp{kInvSqrt2, cplx(0, kInvSqrt2)};
  std::vector<cplx> ym{kInvSqrt2, cplx(0, -kInvSqrt2)};
  std::vector<cplx> zp{1, 0};
  std::vector<cplx> zm{0, 1};
  std::vector<std::vector<cplx>> fs;
  for (int k = 0; k < 3; ++k) { fs.push_back(xp); fs.push_back(xm); }
  for (int k = 0; k < 3; ++k) { fs.push_back(yp); fs.push_back(ym); }
  for (int k = 0; k < 2; ++k) { fs.push_back(zp); fs.push_back(zm); }
  return StateVector(16, kron_chain(fs), "product_cheat_phi_p");
}

StateVector prepare_neel(int n, int cap) {
  check_capacity(n, cap);
  uint64_t idx = 0;
  for (int q = 1; q < n; q += 2) idx |= qubit_mask(n, q);
  StateVector s = StateVector::basis(n, idx, cap);
  return StateVector(n, s.amplitudes(), "neel");
}

StateVector prepare_named_state(const std::string &name, int cap) {
  std::vector<std::string> parts;
  std::stringstream ss(name);
  std::string tok;
  while (std::getline(ss, tok, ':')) parts.push_back(tok);
  if (parts.empty()) throw std::invalid_argument("empty state name");
  const std::string &head = parts[0];
  auto int_arg = [&](size_t i) {
    if (parts.size() <= i) throw std::invalid_argument("state '" + head + "' needs an argument");
    return std::stoi(parts[i]);
  };
  if (head == "singlet_product") return prepare_singlet_product(int_arg(1), cap);
  if (head == "linear_cluster") {
    bool periodic = parts.size() > 2 ? parts[2] == "periodic" : true;
    if (parts.size() > 2 && parts[2] != "periodic" && parts[2] != "open") {
      throw std::invalid_argument("linear_cluster boundary must be 'periodic' or 'open'");
    }
    return prepare_linear_cluster(int_arg(1), periodic, cap);
  }
  if (head == "ghz") return prepare_ghz(int_arg(1), cap);
  if (head == "cluster6_h") return prepare_cluster6_h();
  if (head == "phi_p" || head == "product_cheat_phi_p") return prepare_product_cheat_phi_p();
  if (head == "zeros") return StateVector::zero(int_arg(1), cap);
  if (head == "neel") return prepare_neel(int_arg(1), cap);
  if (head == "basis") {
    int n = int_arg(1);
    if (parts.size() < 3 || static_cast<int>(parts[2].size()) != n) {
      throw std::invalid_argument("basis state needs a bitstring of length n");
    }
    uint64_t idx = 0;
    for (char c : parts[2]) {
      if (c != '0' && c != '1') throw std::invalid_argument("basis bitstring must be 0/1");
      idx = (idx << 1) | static_cast<uint64_t>(c - '0');
    }
    return StateVector::basis(n, idx, cap);
  }
  throw std::invalid_argument("unknown state name: " + head);
}

double expectation(const StateVector &state, const ObservableMatrix &obs) {
  if (obs.dimension() != static_cast<Eigen::Index>(state.dim())) {
    throw std::invalid_argument("observable dimension does not match state");
  }
  if (!obs.is_hermitian()) throw std::invalid_argument("observable is not Hermitian");
  Eigen::Map<const Eigen::VectorXcd> psi(state.amplitudes().data(), state.amplitudes().size());
  return (psi.adjoint() * obs.entries() * psi).value().real();
}

double pauli_expectation(const StateVector &state, const SignedPauli &p) {
  PauliMasks m = pauli_masks(p, state.n_qubits());
  const auto &a = state.amplitudes();
  cplx acc{0, 0};
  for (uint64_t idx = 0; idx < a.size(); ++idx) {
    acc += pauli_phase(m, idx) * std::conj(a[idx ^ m.x]) * a[idx];
  }
  return acc.real();
}

std::vector<uint8_t> measure_qubits(StateVector &state,
                                    const std::vector<std::pair<int, PauliBasis>> &bases,
                                    std::mt19937_64 &rng) {
  std::vector<uint8_t> outcomes;
  outcomes.reserve(bases.size());
  auto &a = state.mutable_amplitudes();
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (const auto &[q, b] : bases) {
    if (q < 0 || q >= state.n_qubits()) throw std::invalid_argument("qubit index out of range");
    uint64_t mask = qubit_mask(state.n_qubits(), q);
    cplx u0[2], u1[2];
    basis_bras(b, u0, u1);
    double p0 = 0, p1 = 0;
    for (uint64_t idx = 0; idx < a.size(); ++idx) {
      if (idx & mask) continue;
      cplx c0 = u0[0] * a[idx] + u0[1] * a[idx | mask];
      cplx c1 = u1[0] * a[idx] + u1[1] * a[idx | mask];
      p0 += std::norm(c0);
      p1 += std::norm(c1);
    }
    double total = p0 + p1;
    int o = uni(rng) * total < p0 ? 0 : 1;
    const cplx *u = o == 0 ? u0 : u1;
    cplx e[2] = {std::conj(u[0]), std::conj(u[1])};
    double inv = 1.0 / std::sqrt(o == 0 ? p0 : p1);
    for (uint64_t idx = 0; idx < a.size(); ++idx) {
      if (idx & mask) continue;
      cplx c = u[0] * a[idx] + u[1] * a[idx | mask];
      a[idx] = c * e[0] * inv;
      a[idx | mask] = c * e[1] * inv;
    }
    outcomes.push_back(static_cast<uint8_t>(o));
  }
  return outcomes;
}

std::vector<uint8_t> measure_local_paulis(StateVector &state,
                                          const std::vector<PauliBasis> &bases,
                                          std::mt19937_64 &rng) {
  if (static_cast<int>(bases.size()) != state.n_qubits()) {
    throw std::invalid_argument("need one basis per qubit");
  }
  std::vector<std::pair<int, PauliBasis>> qb;
  qb.reserve(bases.size());
  for (int q = 0; q < state.n_qubits(); ++q) qb.emplace_back(q, bases[q]);
  return measure_qubits(state, qb, rng);
}

std::vector<uint8_t> sample_local_measurement(const StateVector &state,
                                              const std::vector<PauliBasis> &bases,
                                              std::mt19937_64 &rng) {
  int n = state.n_qubits();
  if (static_cast<int>(bases.size()) != n) {
    throw std::invalid_argument("need one basis per qubit");
  }
  std::vector<uint8_t> outcome(n);
  std::uniform_real_distribution<double> uni(0.0, 1.0);

  // Contract one qubit per level, keeping only the branch that was sampled.
  // Qubit 0 is the most significant bit, so each level splits a contiguous
  // buffer in half.
  std::vector<cplx> scratch(state.dim() / 2);
  const cplx *cur = state.amplitudes().data();
  uint64_t len = state.dim();
  for (int q = 0; q < n; ++q) {
    uint64_t half = len / 2;
    cplx u0[2], u1[2];
    basis_bras(bases[q], u0, u1);
    double p0 = 0, p1 = 0;
    for (uint64_t j = 0; j < half; ++j) {
      p0 += std::norm(u0[0] * cur[j] + u0[1] * cur[half + j]);
      p1 += std::norm(u1[0] * cur[j] + u1[1] * cur[half + j]);
    }
    int o = uni(rng) * (p0 + p1) < p0 ? 0 : 1;
    outcome[q] = static_cast<uint8_t>(o);
    const cplx *u = o == 0 ? u0 : u1;
    // in-place safe: writes trail the reads
    for (uint64_t j = 0; j < half; ++j) {
      scratch[j] = u[0] * cur[j] + u[1] * cur[half + j];
    }
    cur = scratch.data();
    len = half;
  }
  return outcome;
}

int measure_pauli_product(StateVector &state, const SignedPauli &p, std::mt19937_64 &rng) {
  if (p.word.empty()) throw std::invalid_argument("empty pauli support");
  PauliMasks m = pauli_masks(p, state.n_qubits());
  double ev = pauli_expectation(state, p);
  double p_plus = std::clamp(0.5 * (1.0 + ev), 0.0, 1.0);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  double s = uni(rng) < p_plus ? 1.0 : -1.0;

  auto &a = state.mutable_amplitudes();
  if (m.x == 0) {
    for (uint64_t idx = 0; idx < a.size(); ++idx) {
      a[idx] *= 0.5 * (1.0 + s * pauli_phase(m, idx).real());
    }
  } else {
    for (uint64_t idx = 0; idx < a.size(); ++idx) {
      uint64_t partner = idx ^ m.x;
      if (partner < idx) continue;
      cplx ai = a[idx], ap = a[partner];
      a[idx] = 0.5 * (ai + s * pauli_phase(m, partner) * ap);
      a[partner] = 0.5 * (ap + s * pauli_phase(m, idx) * ai);
    }
  }
  state.renormalize();
  return s > 0 ? +1 : -1;
}

namespace {

struct SupportIndexer {
  std::vector<uint64_t> scatter;  // sub-index -> global bits on the support
  std::vector<int> rest_shift;    // bit positions of non-support qubits
  int k;
  int n;

  SupportIndexer(int n_qubits, const std::vector<int> &support) : k(support.size()), n(n_qubits) {
    std::vector<int> sorted = support;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw std::invalid_argument("duplicate support qubit");
    }
    if (!sorted.empty() && (sorted.front() < 0 || sorted.back() >= n_qubits)) {
      throw std::invalid_argument("support qubit out of range");
    }
    std::vector<uint64_t> bit_of(k);
    for (int i = 0; i < k; ++i) bit_of[i] = qubit_mask(n_qubits, sorted[i]);
    scatter.resize(uint64_t{1} << k);
    for (uint64_t a = 0; a < scatter.size(); ++a) {
      uint64_t g = 0;
      for (int i = 0; i < k; ++i) {
        if (a & (uint64_t{1} << (k - 1 - i))) g |= bit_of[i];
      }
      scatter[a] = g;
    }
    uint64_t smask = 0;
    for (uint64_t b : bit_of) smask |= b;
    for (int pos = n_qubits - 1; pos >= 0; --pos) {
      if (!(smask & (uint64_t{1} << pos))) rest_shift.push_back(pos);
    }
  }

  uint64_t rest_count() const { return uint64_t{1} << (n - k); }

  uint64_t expand_rest(uint64_t r) const {
    uint64_t g = 0;
    for (size_t i = 0; i < rest_shift.size(); ++i) {
      if (r & (uint64_t{1} << i)) g |= uint64_t{1} << rest_shift[i];
    }
    return g;
  }
};

}  // namespace

double support_expectation(const StateVector &state, const std::vector<int> &support,
                           const Eigen::MatrixXcd &op) {
  SupportIndexer ix(state.n_qubits(), support);
  uint64_t dk = uint64_t{1} << ix.k;
  if (op.rows() != static_cast<Eigen::Index>(dk)) {
    throw std::invalid_argument("operator dimension does not match support");
  }
  const auto &amps = state.amplitudes();
  Eigen::VectorXcd v(dk), w(dk);
  cplx acc{0, 0};
  for (uint64_t r = 0; r < ix.rest_count(); ++r) {
    uint64_t base = ix.expand_rest(r);
    for (uint64_t a = 0; a < dk; ++a) v(a) = amps[base | ix.scatter[a]];
    w = op * v;
    acc += v.dot(w);  // conjugates v
  }
  return acc.real();
}

int measure_projector(StateVector &state, const std::vector<int> &support,
                      const Eigen::MatrixXcd &projector, std::mt19937_64 &rng) {
  SupportIndexer ix(state.n_qubits(), support);
  uint64_t dk = uint64_t{1} << ix.k;
  if (projector.rows() != static_cast<Eigen::Index>(dk)) {
    throw std::invalid_argument("projector dimension does not match support");
  }
  double p_pass = std::clamp(support_expectation(state, support, projector), 0.0, 1.0);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  bool pass = uni(rng) < p_pass;

  auto &amps = state.mutable_amplitudes();
  Eigen::VectorXcd v(dk), w(dk);
  for (uint64_t r = 0; r < ix.rest_count(); ++r) {
    uint64_t base = ix.expand_rest(r);
    for (uint64_t a = 0; a < dk; ++a) v(a) = amps[base | ix.scatter[a]];
    w = projector * v;
    if (!pass) w = v - w;
    for (uint64_t a = 0; a < dk; ++a) amps[base | ix.scatter[a]] = w(a);
  }
  state.renormalize();
  return pass ? 1 : 0;
}

std::optional<std::vector<StateVector>> try_factor_pairs(const StateVector &state, double tol) {
  if (state.n_qubits() % 2 != 0) return std::nullopt;
  int n_pairs = state.n_qubits() / 2;
  std::vector<StateVector> factors;
  std::vector<cplx> rest = state.amplitudes();
  for (int p = 0; p < n_pairs - 1; ++p) {
    uint64_t cols = rest.size() / 4;
    // rows indexed by the leading pair; find the dominant row
    double best = -1;
    uint64_t besta = 0;
    for (uint64_t a = 0; a < 4; ++a) {
      double s = 0;
      for (uint64_t r = 0; r < cols; ++r) s += std::norm(rest[a * cols + r]);
      if (s > best) { best = s; besta = a; }
    }
    if (best <= 0) return std::nullopt;
    std::vector<cplx> v(cols);
    double inv = 1.0 / std::sqrt(best);
    for (uint64_t r = 0; r < cols; ++r) v[r] = rest[besta * cols + r] * inv;
    std::vector<cplx> u(4);
    for (uint64_t a = 0; a < 4; ++a) {
      cplx dot{0, 0};
      for (uint64_t r = 0; r < cols; ++r) dot += std::conj(v[r]) * rest[a * cols + r];
      u[a] = dot;
    }
    // rank-1 check
    for (uint64_t a = 0; a < 4; ++a) {
      for (uint64_t r = 0; r < cols; ++r) {
        if (std::abs(rest[a * cols + r] - u[a] * v[r]) > tol) return std::nullopt;
      }
    }
    double un = 0;
    for (const cplx &x : u) un += std::norm(x);
    if (std::abs(un - 1.0) > 1e-6) return std::nullopt;
    double uinv = 1.0 / std::sqrt(un);
    for (cplx &x : u) x *= uinv;
    factors.emplace_back(2, std::move(u));
    double vn = 0;
    for (const cplx &x : v) vn += std::norm(x);
    double vinv = 1.0 / std::sqrt(vn);
    for (cplx &x : v) x *= vinv;
    rest = std::move(v);
  }
  factors.emplace_back(2, std::move(rest));
  return factors;
}

void apply_h(StateVector &state, int q) {
  uint64_t mask = qubit_mask(state.n_qubits(), q);
  auto &a = state.mutable_amplitudes();
  for (uint64_t idx = 0; idx < a.size(); ++idx) {
    if (idx & mask) continue;
    cplx lo = a[idx], hi = a[idx | mask];
    a[idx] = (lo + hi) * kInvSqrt2;
    a[idx | mask] = (lo - hi) * kInvSqrt2;
  }
}

void apply_s(StateVector &state, int q) {
  uint64_t mask = qubit_mask(state.n_qubits(), q);
  auto &a = state.mutable_amplitudes();
  for (uint64_t idx = 0; idx < a.size(); ++idx) {
    if (idx & mask) a[idx] *= cplx(0, 1);
  }
}

void apply_sdag(StateVector &state, int q) {
  uint64_t mask = qubit_mask(state.n_qubits(), q);
  auto &a = state.mutable_amplitudes();
  for (uint64_t idx = 0; idx < a.size(); ++idx) {
    if (idx & mask) a[idx] *= cplx(0, -1);
  }
}

void apply_x(StateVector &state, int q) {
  uint64_t mask = qubit_mask(state.n_qubits(), q);
  auto &a = state.mutable_amplitudes();
  for (uint64_t idx = 0; idx < a.size(); ++idx) {
    if (!(idx & mask)) std::swap(a[idx], a[idx | mask]);
  }
}

void apply_z(StateVector &state, int q) {
  uint64_t mask = qubit_mask(state.n_qubits(), q);
  auto &a = state.mutable_amplitudes();
  for (uint64_t idx = 0; idx < a.size(); ++idx) {
    if (idx & mask) a[idx] = -a[idx];
  }
}

void apply_cx(StateVector &state, int control, int target) {
  uint64_t cm = qubit_mask(state.n_qubits(), control);
  uint64_t tm = qubit_mask(state.n_qubits(), target);
  auto &a = state.mutable_amplitudes();
  for (uint64_t idx = 0; idx < a.size(); ++idx) {
    if ((idx & cm) && !(idx & tm)) std::swap(a[idx], a[idx | tm]);
  }
}

void apply_cz(StateVector &state, int qa, int qb) {
  uint64_t am = qubit_mask(state.n_qubits(), qa);
  uint64_t bm = qubit_mask(state.n_qubits(), qb);
  auto &a = state.mutable_amplitudes();
  for (uint64_t idx = 0; idx < a.size(); ++idx) {
    if ((idx & am) && (idx & bm)) a[idx] = -a[idx];
  }
}

}  // namespace fewcopy
