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

#include <vector>

#include "qcorr/matrix.hpp"

namespace qcorr {

/// Eigenvalues below this count as outside the support for logarithms and
/// rank decisions (double-precision eigensolver noise floor with headroom).
inline constexpr double kSupportCutoff = 1e-12;

/// Negative eigenvalues above this magnitude are clamped to zero before
/// sqrt/log; anything more negative is rejected as genuinely non-PSD.
inline constexpr double kPsdClampTol = 1e-10;
inline constexpr double kPsdErrorTol = 1e-8;

/// Relative symmetry tolerance accepted by eigh.
inline constexpr double kHermTol = 1e-8;

struct HermitianEigen {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // unitary, eigenvectors in columns
};

/// Hermitian eigendecomposition, eigenvalues ascending.
HermitianEigen eigh(const ComplexMatrix& h);

/// Eigenvalues only (ascending); much cheaper when vectors are not needed.
std::vector<double> eigh_values(const ComplexMatrix& h);

/// Principal square root of a PSD matrix (negatives above -1e-10 clamped).
ComplexMatrix matrix_sqrt(const ComplexMatrix& p);

/// Base-2 logarithm on the support only (0 log 0 := 0).
ComplexMatrix matrix_log2(const ComplexMatrix& p);

/// exp(i h) for Hermitian h -- the unitary-manifold chart.
ComplexMatrix matrix_exp_ih(const ComplexMatrix& h);

/// Hermitian H with exp(iH) = u, eigenphases in (-pi, pi]. Inverse chart,
/// used to seed optimizations at a known unitary.
ComplexMatrix unitary_log(const ComplexMatrix& u);

/// Rank at the support cutoff.
std::size_t rank_of(const std::vector<double>& eigenvalues,
                    double cutoff = kSupportCutoff);

namespace detail {
/// n x n Hermitian matrix from n^2 reals: diagonal first, then (re, im)
/// per strict upper-triangle entry in row order.
ComplexMatrix hermitian_from_params(const double* params, std::size_t n);
std::size_t hermitian_param_count(std::size_t n);
/// Inverse of hermitian_from_params.
std::vector<double> hermitian_to_params(const ComplexMatrix& h);
}  // namespace detail

}  // namespace qcorr
