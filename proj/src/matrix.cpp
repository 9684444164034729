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

#include "qcorr/matrix.hpp"

#include <cmath>

#include "qcorr/errors.hpp"

namespace qcorr {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols,
                             std::vector<cplx> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_)
    fail(errc::dimension_mismatch, "matrix data size does not match shape");
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::column(const std::vector<cplx>& amps) {
  return ComplexMatrix(amps.size(), 1, amps);
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_)
    fail(errc::dimension_mismatch, "matrix addition shape mismatch");
  kernels::axpy(cplx(1.0, 0.0), o.data(), data(), size());
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_)
    fail(errc::dimension_mismatch, "matrix subtraction shape mismatch");
  kernels::axpy(cplx(-1.0, 0.0), o.data(), data(), size());
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx alpha) {
  kernels::scale(alpha, data(), size());
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows())
    fail(errc::dimension_mismatch, "matmul shape mismatch");
  ComplexMatrix c(a.rows(), b.cols());
  kernels::matmul(a.data(), b.data(), c.data(), a.rows(), a.cols(), b.cols());
  return c;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix r(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      r(j, i) = std::conj((*this)(i, j));
  return r;
}

ComplexMatrix ComplexMatrix::conjugate() const {
  ComplexMatrix r(rows_, cols_);
  for (std::size_t i = 0; i < size(); ++i)
    r.data()[i] = std::conj(data_[i]);
  return r;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix r(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
  return r;
}

cplx ComplexMatrix::trace() const {
  if (!is_square()) fail(errc::not_square, "trace of non-square matrix");
  cplx t(0.0, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::frobenius_norm() const {
  return std::sqrt(kernels::norm_sq(data(), size()));
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const cplx& z : data_) m = std::max(m, std::abs(z));
  return m;
}

bool ComplexMatrix::all_finite() const {
  for (const cplx& z : data_)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

double ComplexMatrix::hermiticity_defect() const {
  if (!is_square()) fail(errc::not_square, "hermiticity of non-square matrix");
  double s = 0.0;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) {
      const cplx d = (*this)(i, j) - std::conj((*this)(j, i));
      s += std::norm(d);
    }
  return std::sqrt(s);
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  kernels::kron(a.data(), a.rows(), a.cols(), b.data(), b.rows(), b.cols(),
                out.data());
  return out;
}

ComplexMatrix outer(const ComplexMatrix& v, const ComplexMatrix& w) {
  if (v.cols() != 1 || w.cols() != 1)
    fail(errc::dimension_mismatch, "outer product expects column vectors");
  ComplexMatrix r(v.rows(), w.rows());
  for (std::size_t i = 0; i < v.rows(); ++i)
    for (std::size_t j = 0; j < w.rows(); ++j)
      r(i, j) = v(i, 0) * std::conj(w(j, 0));
  return r;
}

cplx frobenius_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    fail(errc::dimension_mismatch, "frobenius inner product shape mismatch");
  return kernels::dot_conj(a.data(), b.data(), a.size());
}

}  // namespace qcorr
