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

#include "fewcopy/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fewcopy {

double kl_divergence(double x, double y) {
  if (!(y > 0.0 && y < 1.0)) throw std::domain_error("kl_divergence: y must be in (0,1)");
  if (x < 0.0 || x > 1.0) throw std::domain_error("kl_divergence: x must be in [0,1]");
  double d = 0.0;
  if (x > 0.0) d += x * std::log(x / y);
  if (x < 1.0) d += (1.0 - x) * std::log((1.0 - x) / (1.0 - y));
  return d;
}

double chernoff_tail(double p_s, double epsilon, uint64_t trials) {
  if (epsilon < 0.0) throw std::domain_error("chernoff_tail: epsilon must be >= 0");
  if (p_s + epsilon > 1.0 + 1e-12) throw std::domain_error("chernoff_tail: p_s + eps > 1");
  double x = std::min(p_s + epsilon, 1.0);
  return std::exp(-kl_divergence(x, p_s) * static_cast<double>(trials));
}

double union_split(double delta_total, uint64_t m_estimates) {
  if (m_estimates < 1) throw std::domain_error("union_split: need m >= 1");
  return delta_total / static_cast<double>(m_estimates);
}

double median_of_means(std::span<const double> samples, uint64_t k_groups) {
  if (samples.empty()) throw std::invalid_argument("median_of_means: empty input");
  if (k_groups < 1) throw std::invalid_argument("median_of_means: need k >= 1");
  uint64_t per = samples.size() / k_groups;
  if (per == 0) throw std::invalid_argument("median_of_means: more groups than samples");
  std::vector<double> means(k_groups);
  for (uint64_t g = 0; g < k_groups; ++g) {
    double s = 0.0;
    for (uint64_t i = 0; i < per; ++i) s += samples[g * per + i];
    means[g] = s / static_cast<double>(per);
  }
  std::sort(means.begin(), means.end());
  uint64_t mid = k_groups / 2;
  if (k_groups % 2 == 1) return means[mid];
  return 0.5 * (means[mid - 1] + means[mid]);
}

ConfidenceBound ConfidenceBound::from_rate(double observed_rate, double reference_bound,
                                           uint64_t trials) {
  ConfidenceBound b;
  b.observed_rate = std::clamp(observed_rate, 0.0, 1.0);
  b.reference_bound = reference_bound;
  b.trials = trials;
  if (b.observed_rate > reference_bound) {
    b.c_min = 1.0 - std::exp(-kl_divergence(b.observed_rate, reference_bound) *
                             static_cast<double>(trials));
  } else {
    b.c_min = 0.0;
  }
  return b;
}

}  // namespace fewcopy
