// Copyright 2026 The qcorr authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "qcorr/kernels.hpp"

namespace qcorr {

/// Dense row-major complex matrix; the value type every operator (states,
/// measurements, unitaries) travels in.
class ComplexMatrix {
 public:
  ComplexMatrix() : rows_(0), cols_(0) {}
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, cplx(0.0, 0.0)) {}
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> data);

  static ComplexMatrix identity(std::size_t n);
  /// Column vector from amplitudes.
  static ComplexMatrix column(const std::vector<cplx>& amps);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }
  bool is_square() const { return rows_ == cols_; }

  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }
  cplx* data() { return data_.data(); }
  const cplx* data() const { return data_.data(); }

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(cplx alpha);
  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) {
    return a += b;
  }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) {
    return a -= b;
  }
  friend ComplexMatrix operator*(cplx alpha, ComplexMatrix a) {
    return a *= alpha;
  }
  friend ComplexMatrix operator*(const ComplexMatrix& a,
                                 const ComplexMatrix& b);

  ComplexMatrix adjoint() const;
  ComplexMatrix conjugate() const;
  ComplexMatrix transpose() const;

  cplx trace() const;
  double frobenius_norm() const;
  double max_abs() const;
  bool all_finite() const;
  /// ||A - A^dagger||_F
  double hermiticity_defect() const;

 private:
  std::size_t rows_, cols_;
  std::vector<cplx> data_;
};

/// Kronecker product, left factor on the slower index.
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);

/// |v><w| for column vectors v, w.
ComplexMatrix outer(const ComplexMatrix& v, const ComplexMatrix& w);

/// tr(a^dagger b) -- the Frobenius inner product.
cplx frobenius_inner(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace qcorr
