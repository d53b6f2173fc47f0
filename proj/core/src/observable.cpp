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

#include "fewcopy/observable.hpp"

#include <stdexcept>

namespace fewcopy {

ObservableMatrix::ObservableMatrix(Eigen::MatrixXcd entries, bool require_hermitian)
    : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) {
    throw std::invalid_argument("observable matrix must be square");
  }
  if (require_hermitian && !is_hermitian()) {
    throw std::invalid_argument("matrix flagged as observable is not Hermitian");
  }
}

bool ObservableMatrix::is_hermitian(double tol) const {
  return (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

double ObservableMatrix::max_norm() const { return entries_.cwiseAbs().maxCoeff(); }

double ObservableMatrix::entrywise_one_norm() const { return entries_.cwiseAbs().sum(); }

double ObservableMatrix::trace_norm() const {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(entries_);
  return svd.singularValues().sum();
}

}  // namespace fewcopy
