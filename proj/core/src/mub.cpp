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

#include "fewcopy/mub.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "fewcopy/errors.hpp"

namespace fewcopy {

namespace {

using cd = std::complex<double>;

bool is_prime(int d) {
  if (d < 2) return false;
  for (int f = 2; f * f <= d; ++f) {
    if (d % f == 0) return false;
  }
  return true;
}

int log2_exact(int d) {
  int k = 0, v = d;
  while (v > 1 && v % 2 == 0) { v /= 2; ++k; }
  return v == 1 ? k : -1;
}

// Primitive polynomials over GF(2), coefficient bit i = coefficient of x^i.
uint32_t primitive_poly_bits(int k) {
  switch (k) {
    case 1: return 0b11;                // x + 1
    case 2: return 0b111;               // x^2 + x + 1
    case 3: return 0b1011;              // x^3 + x + 1
    case 4: return 0b10011;             // x^4 + x + 1
    case 5: return 0b100101;            // x^5 + x^2 + 1
    case 6: return 0b1000011;           // x^6 + x + 1
    case 7: return 0b10001001;          // x^7 + x^3 + 1
    case 8: return 0b100011101;         // x^8 + x^4 + x^3 + x^2 + 1
    case 9: return 0b1000010001;        // x^9 + x^4 + 1
    case 10: return 0b10000001001;      // x^10 + x^3 + 1
    default: throw CapacityError("power-of-two MUBs supported up to 2^10");
  }
}

// GR(4, k): Z4[x] / (h), h the Graeffe (Hensel) lift of a primitive binary
// polynomial. Basis coefficients are i^{tr((a + 2b) y)} over the
// Teichmueller set, which yields the complete d+1 family for d = 2^k.
class GaloisRing {
 public:
  explicit GaloisRing(int k) : k_(k), d_(1u << k) {
    build_modulus();
    build_teichmueller();
    build_traces();
  }

  int d() const { return static_cast<int>(d_); }

  // i-exponent tr((a + 2b) y) mod 4; a, b, y are Teichmueller elements
  // addressed by their GF(2^k) bit labels (0 = zero element).
  int exponent(int a_idx, int b_idx, int y_idx) const {
    int e = 0;
    if (a_idx != 0 && y_idx != 0) {
      e += tr_teich_[(log_of_idx_[a_idx] + log_of_idx_[y_idx]) % (d_ - 1)];
    }
    if (b_idx != 0 && y_idx != 0) {
      e += 2 * tr_teich_[(log_of_idx_[b_idx] + log_of_idx_[y_idx]) % (d_ - 1)];
    }
    return ((e % 4) + 4) % 4;
  }

 private:
  int k_;
  uint32_t d_;
  std::vector<uint8_t> h_;                    // low coefficients of monic h
  std::vector<std::vector<uint8_t>> power_;   // power_[j] = xi^j, j in [0, d-1)
  std::vector<uint32_t> log_of_idx_;          // GF label -> discrete log
  std::vector<int> tr_teich_;                 // tr(xi^j) in Z4

  static std::vector<int> poly_mul_int(const std::vector<int> &a, const std::vector<int> &b) {
    std::vector<int> out(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
      for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    }
    return out;
  }

  void build_modulus() {
    uint32_t f = primitive_poly_bits(k_);
    std::vector<int> fe(k_ + 1), fo(k_ + 1);
    for (int i = 0; i <= k_; ++i) {
      int c = (f >> i) & 1;
      fe[i] = c;
      fo[i] = (i % 2 == 0) ? c : -c;  // f(-x)
    }
    std::vector<int> g = poly_mul_int(fe, fo);  // +/- h(x^2)
    int lead = (k_ % 2 == 0) ? 1 : -1;
    h_.resize(k_);
    for (int j = 0; j < k_; ++j) {
      h_[j] = static_cast<uint8_t>(((lead * g[2 * j]) % 4 + 4) % 4);
    }
    if (((lead * g[2 * k_]) % 4 + 4) % 4 != 1) throw std::logic_error("hensel lift not monic");
  }

  // multiply by x modulo h, coefficients mod 4
  std::vector<uint8_t> times_x(const std::vector<uint8_t> &a) const {
    std::vector<uint8_t> out(k_, 0);
    uint8_t carry = a[k_ - 1];
    for (int i = k_ - 1; i > 0; --i) out[i] = a[i - 1];
    out[0] = 0;
    if (carry) {
      for (int i = 0; i < k_; ++i) {
        out[i] = static_cast<uint8_t>((out[i] + 4 - (carry * h_[i]) % 4) % 4);
      }
    }
    return out;
  }

  static uint32_t mod2_label(const std::vector<uint8_t> &a) {
    uint32_t bits = 0;
    for (size_t i = 0; i < a.size(); ++i) {
      if (a[i] % 2) bits |= 1u << i;
    }
    return bits;
  }

  void build_teichmueller() {
    power_.resize(d_ - 1);
    power_[0].assign(k_, 0);
    power_[0][0] = 1;
    for (uint32_t j = 1; j < d_ - 1; ++j) power_[j] = times_x(power_[j - 1]);
    if (mod2_label(times_x(power_[d_ - 2])) != 1) {
      throw std::logic_error("xi does not generate the Teichmueller set");
    }
    log_of_idx_.assign(d_, 0);
    std::vector<bool> seen(d_, false);
    seen[0] = true;
    for (uint32_t j = 0; j < d_ - 1; ++j) {
      uint32_t label = mod2_label(power_[j]);
      if (label == 0 || seen[label]) throw std::logic_error("teichmueller labels collide");
      seen[label] = true;
      log_of_idx_[label] = j;
    }
  }

  void build_traces() {
    tr_teich_.resize(d_ - 1);
    for (uint32_t j = 0; j < d_ - 1; ++j) {
      std::vector<int> acc(k_, 0);
      uint64_t e = j;
      for (int i = 0; i < k_; ++i) {
        const auto &p = power_[e % (d_ - 1)];
        for (int c = 0; c < k_; ++c) acc[c] += p[c];
        e = (e * 2) % (d_ - 1);
      }
      for (int c = 1; c < k_; ++c) {
        if (acc[c] % 4 != 0) throw std::logic_error("galois-ring trace is not scalar");
      }
      tr_teich_[j] = ((acc[0] % 4) + 4) % 4;
    }
  }
};

Eigen::MatrixXcd odd_prime_basis(int d, int a) {
  Eigen::MatrixXcd b(d, d);
  const double w = 2.0 * std::numbers::pi / d;
  const double inv = 1.0 / std::sqrt(static_cast<double>(d));
  for (int k = 0; k < d; ++k) {
    for (int l = 0; l < d; ++l) {
      long long e = (static_cast<long long>(a) * l * l + static_cast<long long>(k) * l) % d;
      b(l, k) = inv * std::polar(1.0, w * static_cast<double>(e));
    }
  }
  return b;
}

}  // namespace

const Eigen::MatrixXcd &MubFamily::basis(int m) const {
  if (m < 1 || m > d_ + 1) throw std::invalid_argument("basis index m out of range");
  return bases_[m - 1];
}

Eigen::VectorXcd MubFamily::vector(int k, int m) const {
  if (k < 0 || k >= d_) throw std::invalid_argument("element index k out of range");
  return basis(m).col(k);
}

Eigen::MatrixXcd MubFamily::projector(int k, int m) const {
  Eigen::VectorXcd v = vector(k, m);
  return v * v.adjoint();
}

cd MubFamily::alpha(int l, int k, int m) const {
  if (m < 2) throw std::invalid_argument("alpha is defined for m >= 2");
  if (l < 0 || l >= d_) throw std::invalid_argument("component index l out of range");
  if (k < 0 || k >= d_) throw std::invalid_argument("element index k out of range");
  return std::sqrt(static_cast<double>(d_)) * basis(m)(l, k);
}

MubFamily build_mub(int d) {
  if (d < 2) throw std::invalid_argument("MUB dimension must be at least 2");
  MubFamily fam;
  fam.d_ = d;
  fam.bases_.reserve(d + 1);
  fam.bases_.push_back(Eigen::MatrixXcd::Identity(d, d));

  int k = log2_exact(d);
  if (k > 0) {
    GaloisRing ring(k);
    static const cd ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const double inv = 1.0 / std::sqrt(static_cast<double>(d));
    for (int a = 0; a < d; ++a) {
      Eigen::MatrixXcd b(d, d);
      for (int kk = 0; kk < d; ++kk) {
        for (int l = 0; l < d; ++l) {
          b(l, kk) = inv * ipow[ring.exponent(a, kk, l)];
        }
      }
      fam.bases_.push_back(std::move(b));
    }
    return fam;
  }

  if (is_prime(d)) {
    for (int a = 0; a < d; ++a) fam.bases_.push_back(odd_prime_basis(d, a));
    return fam;
  }

  throw std::invalid_argument(
      "no complete MUB construction for composite non-power-of-two dimension " +
      std::to_string(d));
}

Eigen::MatrixXcd MubDecomposition::reconstruct(const MubFamily &fam) const {
  Eigen::MatrixXcd out = -trace_term * Eigen::MatrixXcd::Identity(d, d);
  for (int m = 1; m <= d + 1; ++m) {
    const Eigen::MatrixXcd &b = fam.basis(m);
    for (int k = 0; k < d; ++k) {
      out += coefficients(m - 1, k) * (b.col(k) * b.col(k).adjoint());
    }
  }
  return out;
}

MubDecomposition decompose_operator(const Eigen::MatrixXcd &a, const MubFamily &fam) {
  int d = fam.dimension();
  if (a.rows() != d || a.cols() != d) {
    throw std::invalid_argument("operator dimension does not match MUB family");
  }
  MubDecomposition dec;
  dec.d = d;
  dec.trace_term = a.trace();
  dec.coefficients.resize(d + 1, d);
  for (int m = 1; m <= d + 1; ++m) {
    const Eigen::MatrixXcd &b = fam.basis(m);
    for (int k = 0; k < d; ++k) {
      dec.coefficients(m - 1, k) = (b.col(k).adjoint() * a * b.col(k)).value();
    }
  }
  return dec;
}

cd eta(int i, int j, int k, int m, const MubFamily &fam) {
  if (m < 2) throw std::invalid_argument("eta requires a non-computational basis (m >= 2)");
  if (i == j) throw std::invalid_argument("eta covers off-diagonal elements only");
  // alpha_i conj(alpha_j): summing eta against the exact outcome
  // distribution reproduces rho_ij = <i|rho|j>
  return fam.alpha(i, k, m) * std::conj(fam.alpha(j, k, m));
}

std::pair<int, int> sample_mub_povm(std::span<const cd> state, const MubFamily &fam,
                                    std::mt19937_64 &rng) {
  int d = fam.dimension();
  if (static_cast<int>(state.size()) != d) {
    throw std::invalid_argument("state dimension does not match MUB family");
  }
  std::uniform_int_distribution<int> pick_m(2, d + 1);
  int m = pick_m(rng);
  const Eigen::MatrixXcd &b = fam.basis(m);
  Eigen::Map<const Eigen::VectorXcd> psi(state.data(), d);
  Eigen::VectorXd probs = (b.adjoint() * psi).cwiseAbs2();
  double total = probs.sum();
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  double r = uni(rng) * total;
  int kk = 0;
  for (; kk < d - 1; ++kk) {
    r -= probs(kk);
    if (r <= 0) break;
  }
  return {kk, m};
}

}  // namespace fewcopy
