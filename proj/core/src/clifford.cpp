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

#include "fewcopy/clifford.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace fewcopy {

namespace {

constexpr int kMaxCliffordQubits = 16;

inline bool bit(uint32_t w, int i) { return (w >> i) & 1; }

// --- small F2 matrix helpers for the Bravyi-Maslov sampler ---------------

struct BitMat {
  int n = 0;
  std::vector<uint64_t> rows;

  explicit BitMat(int n_) : n(n_), rows(n_, 0) {}
  static BitMat eye(int n) {
    BitMat m(n);
    for (int i = 0; i < n; ++i) m.rows[i] = uint64_t{1} << i;
    return m;
  }
  bool get(int r, int c) const { return (rows[r] >> c) & 1; }
  void set(int r, int c, bool v) {
    if (v) rows[r] |= uint64_t{1} << c;
    else rows[r] &= ~(uint64_t{1} << c);
  }
};

BitMat mul(const BitMat &a, const BitMat &b) {
  BitMat out(a.n);
  for (int i = 0; i < a.n; ++i) {
    uint64_t acc = 0, row = a.rows[i];
    while (row) {
      int j = std::countr_zero(row);
      row &= row - 1;
      acc ^= b.rows[j];
    }
    out.rows[i] = acc;
  }
  return out;
}

BitMat lower_inverse(const BitMat &l) {
  // forward substitution for a unit lower-triangular matrix
  BitMat inv = BitMat::eye(l.n);
  for (int i = 0; i < l.n; ++i) {
    for (int j = 0; j < i; ++j) {
      if (l.get(i, j)) inv.rows[i] ^= inv.rows[j];
    }
  }
  return inv;
}

BitMat transpose(const BitMat &m) {
  BitMat out(m.n);
  for (int i = 0; i < m.n; ++i) {
    for (int j = 0; j < m.n; ++j) out.set(j, i, m.get(i, j));
  }
  return out;
}

// quantum Mallows distribution over (hadamard layer, permutation)
std::pair<std::vector<bool>, std::vector<int>> sample_qmallows(int n, std::mt19937_64 &rng) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::vector<bool> hada;
  std::vector<int> perm;
  std::vector<int> remaining(n);
  for (int i = 0; i < n; ++i) remaining[i] = i;
  for (int i = 0; i < n; ++i) {
    int m = static_cast<int>(remaining.size());
    double u = uni(rng);
    double eps = std::pow(4.0, -m);
    int k = static_cast<int>(-std::ceil(std::log2(u + (1.0 - u) * eps)));
    hada.push_back(k < m);
    if (k >= m) k = 2 * m - k - 1;
    perm.push_back(remaining[k]);
    remaining.erase(remaining.begin() + k);
  }
  return {hada, perm};
}

bool rand_bit(std::mt19937_64 &rng) { return rng() & 1; }

}  // namespace

CliffordTableau CliffordTableau::identity(int n) {
  if (n < 1 || n > kMaxCliffordQubits) {
    throw std::invalid_argument("clifford tableau supports 1..16 qubits");
  }
  CliffordTableau t;
  t.n = n;
  t.xs.resize(n);
  t.zs.resize(n);
  for (int q = 0; q < n; ++q) {
    t.xs[q].x = uint32_t{1} << q;
    t.zs[q].z = uint32_t{1} << q;
  }
  return t;
}

namespace {

void conj_row(CliffordTableau::Row &r, const CliffordOp &op) {
  switch (op.gate) {
    case CliffGate::H: {
      bool xq = bit(r.x, op.a), zq = bit(r.z, op.a);
      r.neg ^= xq && zq;
      if (xq != zq) {
        r.x ^= uint32_t{1} << op.a;
        r.z ^= uint32_t{1} << op.a;
      }
      break;
    }
    case CliffGate::S: {
      bool xq = bit(r.x, op.a), zq = bit(r.z, op.a);
      r.neg ^= xq && zq;
      if (xq) r.z ^= uint32_t{1} << op.a;
      break;
    }
    case CliffGate::SDAG: {
      bool xq = bit(r.x, op.a), zq = bit(r.z, op.a);
      r.neg ^= xq && !zq;
      if (xq) r.z ^= uint32_t{1} << op.a;
      break;
    }
    case CliffGate::X:
      r.neg ^= bit(r.z, op.a);
      break;
    case CliffGate::Z:
      r.neg ^= bit(r.x, op.a);
      break;
    case CliffGate::CX: {
      bool xc = bit(r.x, op.a), zc = bit(r.z, op.a);
      bool xt = bit(r.x, op.b), zt = bit(r.z, op.b);
      r.neg ^= xc && zt && (xt == zc);
      if (xc) r.x ^= uint32_t{1} << op.b;
      if (zt) r.z ^= uint32_t{1} << op.a;
      break;
    }
    case CliffGate::CZ: {
      conj_row(r, {CliffGate::H, op.b, 0});
      conj_row(r, {CliffGate::CX, op.a, op.b});
      conj_row(r, {CliffGate::H, op.b, 0});
      break;
    }
  }
}

}  // namespace

void CliffordTableau::apply(const CliffordOp &op) {
  for (auto &r : xs) conj_row(r, op);
  for (auto &r : zs) conj_row(r, op);
}

bool CliffordTableau::valid() const {
  auto sympl = [](const Row &a, const Row &b) {
    return (std::popcount(a.x & b.z) + std::popcount(a.z & b.x)) & 1;
  };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (sympl(xs[i], xs[j])) return false;
      if (sympl(zs[i], zs[j])) return false;
      if (sympl(xs[i], zs[j]) != (i == j)) return false;
    }
  }
  return true;
}

CliffordTableau random_clifford_tableau(int n, std::mt19937_64 &rng) {
  if (n < 1 || n > kMaxCliffordQubits) {
    throw std::invalid_argument("clifford sampler supports 1..16 qubits");
  }
  auto [hada, perm] = sample_qmallows(n, rng);

  BitMat gamma1(n), gamma2(n), delta1 = BitMat::eye(n), delta2 = BitMat::eye(n);
  for (int i = 0; i < n; ++i) {
    gamma1.set(i, i, rand_bit(rng));
    for (int j = 0; j < i; ++j) {
      bool b = rand_bit(rng);
      gamma1.set(i, j, b);
      gamma1.set(j, i, b);
    }
  }
  for (int i = 0; i < n; ++i) {
    gamma2.set(i, i, rand_bit(rng) && hada[i]);
    for (int j = 0; j < i; ++j) {
      bool allowed = (hada[i] && hada[j]) ||
                     (hada[i] && !hada[j] && perm[i] < perm[j]) ||
                     (!hada[i] && hada[j] && perm[i] > perm[j]);
      bool b = rand_bit(rng) && allowed;
      gamma2.set(i, j, b);
      gamma2.set(j, i, b);
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < i; ++j) {
      delta1.set(i, j, rand_bit(rng));
      bool allowed = (hada[i] < hada[j]) ||
                     (hada[i] && hada[j] && perm[i] > perm[j]) ||
                     (!hada[i] && !hada[j] && perm[i] < perm[j]);
      delta2.set(i, j, rand_bit(rng) && allowed);
    }
  }

  // fused 2n x 2n blocks [[D, 0], [G*D, D^-T]] for both layers
  auto fuse = [n](const BitMat &delta, const BitMat &gamma) {
    BitMat prod = mul(gamma, delta);
    BitMat invt = transpose(lower_inverse(delta));
    std::vector<uint64_t> big(2 * n, 0);
    for (int i = 0; i < n; ++i) {
      big[i] = delta.rows[i];
      big[n + i] = prod.rows[i] | (invt.rows[i] << n);
    }
    return big;
  };
  std::vector<uint64_t> fused = fuse(delta1, gamma1);
  std::vector<uint64_t> fused_m = fuse(delta2, gamma2);

  // permutation and hadamard layer applied to the first factor's rows
  std::vector<uint64_t> u(2 * n, 0);
  for (int i = 0; i < n; ++i) {
    u[i] = fused[perm[i]];
    u[n + i] = fused[perm[i] + n];
  }
  for (int i = 0; i < n; ++i) {
    if (hada[i]) std::swap(u[i], u[n + i]);
  }

  // raw = fused_m * u over F2
  std::vector<uint64_t> raw(2 * n, 0);
  for (int i = 0; i < 2 * n; ++i) {
    uint64_t acc = 0, row = fused_m[i];
    while (row) {
      int j = std::countr_zero(row);
      row &= row - 1;
      acc ^= u[j];
    }
    raw[i] = acc;
  }

  CliffordTableau t;
  t.n = n;
  t.xs.resize(n);
  t.zs.resize(n);
  uint32_t mask = (n == 32) ? ~uint32_t{0} : ((uint32_t{1} << n) - 1);
  for (int i = 0; i < n; ++i) {
    t.xs[i].x = static_cast<uint32_t>(raw[i]) & mask;
    t.xs[i].z = static_cast<uint32_t>(raw[i] >> n) & mask;
    t.xs[i].neg = rand_bit(rng);
    t.zs[i].x = static_cast<uint32_t>(raw[n + i]) & mask;
    t.zs[i].z = static_cast<uint32_t>(raw[n + i] >> n) & mask;
    t.zs[i].neg = rand_bit(rng);
  }
  return t;
}

std::vector<CliffordOp> synthesize_circuit(const CliffordTableau &input) {
  CliffordTableau t = input;
  std::vector<CliffordOp> recorded;
  auto emit = [&](CliffGate g, int a, int b = 0) {
    CliffordOp op{g, a, b};
    t.apply(op);
    recorded.push_back(op);
  };
  auto swap_qubits = [&](int a, int b) {
    emit(CliffGate::CX, a, b);
    emit(CliffGate::CX, b, a);
    emit(CliffGate::CX, a, b);
  };

  int n = t.n;
  for (int i = 0; i < n; ++i) {
    // reduce xs[i] to +/-X_i
    {
      int jx = -1, jz = -1;
      for (int j = i; j < n; ++j) {
        if (jx < 0 && bit(t.xs[i].x, j)) jx = j;
        if (jz < 0 && bit(t.xs[i].z, j)) jz = j;
      }
      if (jx < 0) {
        if (jz < 0) throw std::invalid_argument("tableau row has no support (not symplectic)");
        emit(CliffGate::H, jz);
        jx = jz;
      }
      if (jx != i) swap_qubits(i, jx);
      for (int j = 0; j < n; ++j) {
        if (j != i && bit(t.xs[i].x, j)) emit(CliffGate::CX, i, j);
      }
      if (bit(t.xs[i].z, i)) emit(CliffGate::S, i);
      for (int j = 0; j < n; ++j) {
        if (j != i && bit(t.xs[i].z, j)) emit(CliffGate::CZ, i, j);
      }
    }
    // reduce zs[i] to +/-Z_i without touching X_i
    {
      emit(CliffGate::H, i);
      for (int j = 0; j < n; ++j) {
        if (j != i && bit(t.zs[i].x, j)) emit(CliffGate::CX, i, j);
      }
      if (bit(t.zs[i].z, i)) emit(CliffGate::S, i);
      for (int j = 0; j < n; ++j) {
        if (j != i && bit(t.zs[i].z, j)) emit(CliffGate::CZ, i, j);
      }
      emit(CliffGate::H, i);
    }
  }
  for (int i = 0; i < n; ++i) {
    if (t.xs[i].neg) emit(CliffGate::Z, i);
    if (t.zs[i].neg) emit(CliffGate::X, i);
  }
  if (!(t == CliffordTableau::identity(n))) {
    throw std::logic_error("clifford synthesis did not reach the identity");
  }

  // recorded conjugations compose to the inverse; invert and reverse
  std::vector<CliffordOp> circuit;
  circuit.reserve(recorded.size());
  for (auto it = recorded.rbegin(); it != recorded.rend(); ++it) {
    CliffordOp op = *it;
    if (op.gate == CliffGate::S) op.gate = CliffGate::SDAG;
    else if (op.gate == CliffGate::SDAG) op.gate = CliffGate::S;
    circuit.push_back(op);
  }
  return circuit;
}

void apply_circuit(StateVector &state, const std::vector<CliffordOp> &ops) {
  for (const auto &op : ops) {
    switch (op.gate) {
      case CliffGate::H: apply_h(state, op.a); break;
      case CliffGate::S: apply_s(state, op.a); break;
      case CliffGate::SDAG: apply_sdag(state, op.a); break;
      case CliffGate::X: apply_x(state, op.a); break;
      case CliffGate::Z: apply_z(state, op.a); break;
      case CliffGate::CX: apply_cx(state, op.a, op.b); break;
      case CliffGate::CZ: apply_cz(state, op.a, op.b); break;
    }
  }
}

void apply_inverse_circuit(StateVector &state, const std::vector<CliffordOp> &ops) {
  for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
    CliffordOp op = *it;
    if (op.gate == CliffGate::S) op.gate = CliffGate::SDAG;
    else if (op.gate == CliffGate::SDAG) op.gate = CliffGate::S;
    apply_circuit(state, {op});
  }
}

std::string circuit_to_string(const std::vector<CliffordOp> &ops) {
  std::ostringstream out;
  bool first = true;
  for (const auto &op : ops) {
    if (!first) out << ' ';
    first = false;
    switch (op.gate) {
      case CliffGate::H: out << 'H' << op.a; break;
      case CliffGate::S: out << 'S' << op.a; break;
      case CliffGate::SDAG: out << "SD" << op.a; break;
      case CliffGate::X: out << 'X' << op.a; break;
      case CliffGate::Z: out << 'Z' << op.a; break;
      case CliffGate::CX: out << "CX" << op.a << '.' << op.b; break;
      case CliffGate::CZ: out << "CZ" << op.a << '.' << op.b; break;
    }
  }
  return out.str();
}

std::vector<CliffordOp> circuit_from_string(const std::string &text) {
  std::vector<CliffordOp> ops;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    CliffordOp op{};
    size_t pos = 0;
    if (tok.rfind("CX", 0) == 0 || tok.rfind("CZ", 0) == 0) {
      op.gate = tok[1] == 'X' ? CliffGate::CX : CliffGate::CZ;
      pos = 2;
      size_t dot = tok.find('.', pos);
      if (dot == std::string::npos) throw std::invalid_argument("bad two-qubit gate: " + tok);
      op.a = std::stoi(tok.substr(pos, dot - pos));
      op.b = std::stoi(tok.substr(dot + 1));
      ops.push_back(op);
      continue;
    }
    if (tok.rfind("SD", 0) == 0) {
      op.gate = CliffGate::SDAG;
      pos = 2;
    } else {
      switch (tok[0]) {
        case 'H': op.gate = CliffGate::H; break;
        case 'S': op.gate = CliffGate::S; break;
        case 'X': op.gate = CliffGate::X; break;
        case 'Z': op.gate = CliffGate::Z; break;
        default: throw std::invalid_argument("bad gate token: " + tok);
      }
      pos = 1;
    }
    op.a = std::stoi(tok.substr(pos));
    ops.push_back(op);
  }
  return ops;
}

}  // namespace fewcopy
