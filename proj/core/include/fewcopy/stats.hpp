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
#include <span>
#include <vector>

namespace fewcopy {

/// Binary Kullback-Leibler divergence D(x||y), natural log, with the
/// continuity convention 0*log(0) = 0. Requires y in (0,1), x in [0,1].
double kl_divergence(double x, double y);

/// Chernoff tail exp(-D(p_s + eps || p_s) * trials) for the probability that
/// an empirical success rate exceeds p_s + eps under the bound p_s.
double chernoff_tail(double p_s, double epsilon, uint64_t trials);

/// Per-estimate failure budget delta_total / m under the union bound.
double union_split(double delta_total, uint64_t m_estimates);

/// Median of k group means over the first k*floor(n/k) samples; k = 1 is the
/// plain mean.
double median_of_means(std::span<const double> samples, uint64_t k_groups);

/// Lower confidence bound 1 - exp(-D(rate||p_s) * trials) for entanglement
/// detection; zero whenever the observed rate does not exceed the separable
/// bound.
struct ConfidenceBound {
  double observed_rate = 0.0;
  double reference_bound = 0.0;  // p_s
  uint64_t trials = 0;
  double c_min = 0.0;

  static ConfidenceBound from_rate(double observed_rate, double reference_bound, uint64_t trials);
};

}  // namespace fewcopy
