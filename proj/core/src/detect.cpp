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

#include "fewcopy/detect.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "fewcopy/errors.hpp"
#include "fewcopy/rng.hpp"

namespace fewcopy {

namespace {

constexpr double kSepBound = 2.0 / 3.0;

// Partition [0, reps) across workers; each repetition derives its own rng
// stream, so the schedule cannot change results.
template <typename Fn>
void parallel_reps(uint64_t reps, int threads, Fn &&per_rep) {
  if (threads <= 1) {
    for (uint64_t r = 0; r < reps; ++r) per_rep(r);
    return;
  }
  std::vector<std::thread> pool;
  uint64_t chunk = (reps + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    uint64_t lo = t * chunk, hi = std::min(reps, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &per_rep] {
      for (uint64_t r = lo; r < hi; ++r) per_rep(r);
    });
  }
  for (auto &th : pool) th.join();
}

void finalize_rates(DetectionRun &run, const DetectOptions &opts) {
  uint64_t checks = static_cast<uint64_t>(run.checks_per_rep) * run.repetitions;
  uint64_t total = 0;
  for (uint32_t c : run.local_successes) total += c;
  run.success_rate = checks ? static_cast<double>(total) / static_cast<double>(checks) : 0.0;
  if (std::isnan(run.separable_bound)) {
    run.epsilon = opts.fixed_epsilon.value_or(0.0);
    run.confidence_lower_bound = 0.0;
    run.s_overall = 0;
    return;
  }
  double eps_obs = std::max(run.success_rate - run.separable_bound, 0.0);
  run.epsilon = opts.fixed_epsilon.value_or(eps_obs);
  ConfidenceBound cb = ConfidenceBound::from_rate(run.success_rate, run.separable_bound, checks);
  run.confidence_lower_bound = cb.c_min;
  if (opts.fixed_epsilon) {
    run.s_overall =
        run.success_rate + 1e-12 >= run.separable_bound + *opts.fixed_epsilon ? 1 : 0;
  } else {
    run.s_overall = run.success_rate > run.separable_bound ? 1 : 0;
  }
}

PauliBasis singlet_basis(int setting) {
  switch (setting) {
    case 0: return PauliBasis::X;
    case 1: return PauliBasis::Y;
    default: return PauliBasis::Z;
  }
}

}  // namespace

int singlet_local_cost(int i, int j) { return (i ^ j) & 1; }

DetectionRun run_singlet_protocol(NoisyStateSource &source, int n_pairs, uint64_t repetitions,
                                  uint64_t seed, const DetectOptions &opts) {
  if (source.n_qubits() != 2 * n_pairs) {
    throw std::invalid_argument("source must emit 2*n_pairs qubits");
  }
  if (opts.fixed_settings && static_cast<int>(opts.fixed_settings->size()) != n_pairs) {
    throw std::invalid_argument("fixed_settings needs one entry per pair");
  }

  // Pair-product sources are measured factor-wise; anything entangled
  // across pair boundaries takes the dense path.
  auto target_factors = try_factor_pairs(source.target());
  auto noise_factors = source.lambda() > 0 ? try_factor_pairs(source.noise_state())
                                           : target_factors;

  DetectionRun run;
  run.protocol = DetectProtocol::singlet;
  run.n = n_pairs;
  run.repetitions = repetitions;
  run.checks_per_rep = n_pairs;
  run.separable_bound = kSepBound;
  run.local_successes.assign(repetitions, 0);
  if (opts.keep_round_log) run.round_log.resize(repetitions * n_pairs);

  double threshold = (kSepBound + opts.fixed_epsilon.value_or(kSepBound / 2.0)) * n_pairs;
  std::vector<uint8_t> rep_pass(repetitions, 0);

  auto per_rep = [&](uint64_t r) {
    std::mt19937_64 rng = derive_rng(seed, r);
    auto [is_noise, shot_proto] = source.next_shot_ref(rng);
    const auto &factors = is_noise ? noise_factors : target_factors;

    std::vector<int> settings(n_pairs);
    std::uniform_int_distribution<int> pick(0, 2);
    for (int k = 0; k < n_pairs; ++k) {
      settings[k] = opts.fixed_settings ? (*opts.fixed_settings)[k] : pick(rng);
    }

    uint32_t successes = 0;
    std::vector<uint8_t> bits;
    if (factors) {
      bits.resize(2 * n_pairs);
      for (int k = 0; k < n_pairs; ++k) {
        PauliBasis b = singlet_basis(settings[k]);
        auto pair_bits = sample_local_measurement((*factors)[k], {b, b}, rng);
        bits[2 * k] = pair_bits[0];
        bits[2 * k + 1] = pair_bits[1];
      }
    } else {
      std::vector<PauliBasis> bases(2 * n_pairs);
      for (int k = 0; k < n_pairs; ++k) {
        bases[2 * k] = bases[2 * k + 1] = singlet_basis(settings[k]);
      }
      bits = sample_local_measurement(*shot_proto, bases, rng);
    }
    for (int k = 0; k < n_pairs; ++k) {
      int s = singlet_local_cost(bits[2 * k], bits[2 * k + 1]);
      successes += s;
      if (opts.keep_round_log) {
        run.round_log[r * n_pairs + k] = {static_cast<uint32_t>(r), static_cast<uint16_t>(k),
                                          static_cast<uint16_t>(settings[k]),
                                          static_cast<uint8_t>(s)};
      }
    }
    run.local_successes[r] = successes;
    rep_pass[r] = successes + 1e-9 >= threshold ? 1 : 0;
  };
  parallel_reps(repetitions, opts.threads, per_rep);

  uint64_t passed = 0;
  for (uint8_t p : rep_pass) passed += p;
  run.overall_pass_rate = repetitions ? static_cast<double>(passed) / repetitions : 0.0;
  finalize_rates(run, opts);
  return run;
}

int lcs_local_cost(LcsSetting setting, const std::array<uint8_t, 4> &bits) {
  int parity;
  switch (setting) {
    case LcsSetting::ZXZZ: parity = bits[0] ^ bits[1] ^ bits[2]; break;
    case LcsSetting::ZZXZ: parity = bits[1] ^ bits[2] ^ bits[3]; break;
    default: parity = bits[0] ^ bits[1] ^ bits[2] ^ bits[3]; break;
  }
  return parity ? 0 : 1;
}

std::vector<std::array<int, 4>> lcs_regular_partition(int n, int L, std::mt19937_64 &rng) {
  if (n != 3 * L) {
    throw std::invalid_argument("regular partitions need n = 3L (unsupported otherwise)");
  }
  std::uniform_int_distribution<int> pick(0, n - 1);
  int offset = pick(rng);
  std::vector<std::array<int, 4>> clusters(L);
  for (int k = 0; k < L; ++k) {
    int t = (offset + 3 * k) % n;
    clusters[k] = {t, (t + 1) % n, (t + 2) % n, (t + 3) % n};
  }
  return clusters;
}

int LcsBackend::n_qubits() const {
  if (std::holds_alternative<StateVector>(state)) return std::get<StateVector>(state).n_qubits();
  return std::get<StabilizerTableau>(state).n_qubits();
}

LcsBackend LcsBackend::ideal_cluster(int n, int cap) {
  if (n <= cap && n <= kHardQubitCap) {
    return LcsBackend{prepare_linear_cluster(n, true, cap)};
  }
  return LcsBackend{init_linear_cluster(n, true)};
}

LcsBackend LcsBackend::product_zeros(int n, bool use_tableau) {
  if (use_tableau) return LcsBackend{StabilizerTableau::computational_zero(n)};
  return LcsBackend{StateVector::zero(n)};
}

DetectionRun run_lcs_protocol(const LcsBackend &backend, int n, int L, uint64_t repetitions,
                              uint64_t seed, const DetectOptions &opts) {
  if (n != 3 * L) throw std::invalid_argument("lcs protocol needs n = 3L");
  if (backend.n_qubits() != n) throw std::invalid_argument("backend width mismatch");

  DetectionRun run;
  run.protocol = DetectProtocol::lcs;
  run.n = n;
  run.repetitions = repetitions;
  run.checks_per_rep = L;
  run.separable_bound = kSepBound;
  run.local_successes.assign(repetitions, 0);
  if (opts.keep_round_log) run.round_log.resize(repetitions * L);

  double threshold = (kSepBound + opts.fixed_epsilon.value_or(kSepBound / 2.0)) * L;
  std::vector<uint8_t> rep_pass(repetitions, 0);
  const bool dense = std::holds_alternative<StateVector>(backend.state);

  auto per_rep = [&](uint64_t r) {
    std::mt19937_64 rng = derive_rng(seed, r);
    auto clusters = lcs_regular_partition(n, L, rng);
    std::uniform_int_distribution<int> pick(0, 2);
    std::vector<LcsSetting> settings(L);
    // per-qubit bases; cluster endpoints are always Z, shared boundary
    // qubits are measured once and feed both neighbours
    std::vector<PauliBasis> bases(n, PauliBasis::Z);
    for (int k = 0; k < L; ++k) {
      settings[k] = static_cast<LcsSetting>(pick(rng));
      const auto &c = clusters[k];
      switch (settings[k]) {
        case LcsSetting::ZXZZ: bases[c[1]] = PauliBasis::X; break;
        case LcsSetting::ZZXZ: bases[c[2]] = PauliBasis::X; break;
        case LcsSetting::ZYYZ: bases[c[1]] = PauliBasis::Y; bases[c[2]] = PauliBasis::Y; break;
      }
    }

    std::vector<uint8_t> bits(n);
    if (dense) {
      bits = sample_local_measurement(std::get<StateVector>(backend.state), bases, rng);
    } else {
      StabilizerTableau shot = std::get<StabilizerTableau>(backend.state);
      for (int q = 0; q < n; ++q) {
        SparsePauli p;
        p.factors.emplace(q, bases[q]);
        bits[q] = shot.measure(p, rng) > 0 ? 0 : 1;
      }
    }

    uint32_t successes = 0;
    for (int k = 0; k < L; ++k) {
      const auto &c = clusters[k];
      int s = lcs_local_cost(settings[k], {bits[c[0]], bits[c[1]], bits[c[2]], bits[c[3]]});
      successes += s;
      if (opts.keep_round_log) {
        run.round_log[r * L + k] = {static_cast<uint32_t>(r), static_cast<uint16_t>(k),
                                    static_cast<uint16_t>(settings[k]), static_cast<uint8_t>(s)};
      }
    }
    run.local_successes[r] = successes;
    rep_pass[r] = successes + 1e-9 >= threshold ? 1 : 0;
  };
  parallel_reps(repetitions, opts.threads, per_rep);

  uint64_t passed = 0;
  for (uint8_t p : rep_pass) passed += p;
  run.overall_pass_rate = repetitions ? static_cast<double>(passed) / repetitions : 0.0;
  finalize_rates(run, opts);
  return run;
}

double hamiltonian_energy_from_outcomes(const LocalHamiltonian &h,
                                        const std::vector<PauliBasis> &bases,
                                        const std::vector<uint8_t> &bits) {
  double energy = 0;
  for (const auto &[word, w] : h.terms) {
    bool match = true;
    int parity = 0;
    for (const auto &[q, b] : word.factors) {
      if (bases[q] != b) { match = false; break; }
      parity ^= bits[q];
    }
    if (!match) continue;
    double boost = std::pow(3.0, static_cast<double>(word.factors.size()));
    energy += (parity ? -1.0 : 1.0) * w * boost;
  }
  return energy;
}

double hamiltonian_single_shot_energy(const LocalHamiltonian &h, const StateVector &shot,
                                      std::mt19937_64 &rng) {
  if (shot.n_qubits() != h.n) throw std::invalid_argument("shot width mismatch");
  std::uniform_int_distribution<int> pick(0, 2);
  std::vector<PauliBasis> bases(h.n);
  for (auto &b : bases) b = static_cast<PauliBasis>(pick(rng));
  std::vector<uint8_t> bits = sample_local_measurement(shot, bases, rng);
  return hamiltonian_energy_from_outcomes(h, bases, bits);
}

DetectionRun run_hamiltonian_protocol(const LocalHamiltonian &h, NoisyStateSource &source,
                                      double delta, uint64_t repetitions, uint64_t seed,
                                      const DetectOptions &opts) {
  h.validate();
  if (std::isnan(h.eps_0)) {
    throw std::invalid_argument("hamiltonian ground energy is unset (run solve_ground_state)");
  }
  double gap = h.entanglement_gap();
  if (gap <= 0) throw std::invalid_argument("protocol requires a positive entanglement gap");
  if (!(delta > 0.0 && delta < gap)) {
    throw std::domain_error("delta must lie strictly inside (0, g_E)");
  }
  if (source.n_qubits() != h.n) throw std::invalid_argument("source width mismatch");

  DetectionRun run;
  run.protocol = DetectProtocol::hamiltonian;
  run.n = h.n;
  run.repetitions = repetitions;
  run.checks_per_rep = 1;
  run.separable_bound = std::numeric_limits<double>::quiet_NaN();
  run.local_successes.assign(repetitions, 0);
  run.shot_values.assign(repetitions, 0.0);
  if (opts.keep_round_log) run.round_log.resize(repetitions);

  double threshold = h.n * (h.eps_sep - delta);
  auto per_rep = [&](uint64_t r) {
    std::mt19937_64 rng = derive_rng(seed, r);
    auto [is_noise, shot] = source.next_shot_ref(rng);
    (void)is_noise;
    double e = hamiltonian_single_shot_energy(h, *shot, rng);
    int s = e <= threshold ? 1 : 0;
    run.shot_values[r] = e;
    run.local_successes[r] = s;
    if (opts.keep_round_log) {
      run.round_log[r] = {static_cast<uint32_t>(r), 0, 0, static_cast<uint8_t>(s)};
    }
  };
  parallel_reps(repetitions, opts.threads, per_rep);

  uint64_t passed = 0;
  for (uint32_t c : run.local_successes) passed += c;
  run.overall_pass_rate = repetitions ? static_cast<double>(passed) / repetitions : 0.0;
  DetectOptions fixed = opts;
  fixed.fixed_epsilon = delta;
  finalize_rates(run, fixed);
  return run;
}

}  // namespace fewcopy
