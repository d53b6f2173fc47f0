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

#include <complex>
#include <string>

#include <Eigen/Dense>

namespace fewcopy {

/// Dense operator on a d-dimensional space. When constructed as an
/// observable the entries must be Hermitian within kHermTol.
class ObservableMatrix {
 public:
  static constexpr double kHermTol = 1e-10;

  ObservableMatrix() = default;
  explicit ObservableMatrix(Eigen::MatrixXcd entries, bool require_hermitian = true);

  Eigen::Index dimension() const { return entries_.rows(); }
  const Eigen::MatrixXcd &entries() const { return entries_; }
  bool is_hermitian(double tol = kHermTol) const;

  /// max_ij |A_ij| in the computational basis.
  double max_norm() const;
  /// sum_ij |A_ij| (entrywise 1-norm).
  double entrywise_one_norm() const;
  /// sum of singular values (trace norm).
  double trace_norm() const;

 private:
  Eigen::MatrixXcd entries_;
};

}  // namespace fewcopy
