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

// LAPACK-backed spectral kernels. zheevd gives ascending eigenvalues, which
// matches the contract here; matrix functions go through the spectral
// decomposition with the support-cutoff convention.

#include "qcorr/eig.hpp"

#include <cmath>
#include <complex>

#include "qcorr/errors.hpp"

#define lapack_complex_double std::complex<double>
#define lapack_complex_float std::complex<float>
#include <lapacke.h>

namespace qcorr {
namespace {

void check_square_hermitian(const ComplexMatrix& h) {
  if (!h.is_square()) fail(errc::not_square, "matrix is not square");
  if (!h.all_finite()) fail(errc::non_finite, "matrix has NaN/Inf entries");
  const double scale = std::max(1.0, h.frobenius_norm());
  if (h.hermiticity_defect() > kHermTol * scale)
    fail(errc::not_hermitian, "matrix is not Hermitian within tolerance");
}

}  // namespace

HermitianEigen eigh(const ComplexMatrix& h) {
  check_square_hermitian(h);
  const lapack_int n = static_cast<lapack_int>(h.rows());
  HermitianEigen out;
  out.eigenvalues.resize(h.rows());
  out.eigenvectors = h;
  if (n == 0) return out;
  const lapack_int info = LAPACKE_zheevd(
      LAPACK_ROW_MAJOR, 'V', 'L', n, out.eigenvectors.data(), n,
      out.eigenvalues.data());
  if (info != 0) fail(errc::non_finite, "zheevd failed to converge");
  return out;
}

std::vector<double> eigh_values(const ComplexMatrix& h) {
  check_square_hermitian(h);
  const lapack_int n = static_cast<lapack_int>(h.rows());
  std::vector<double> vals(h.rows());
  if (n == 0) return vals;
  ComplexMatrix scratch = h;
  const lapack_int info = LAPACKE_zheevd(LAPACK_ROW_MAJOR, 'N', 'L', n,
                                         scratch.data(), n, vals.data());
  if (info != 0) fail(errc::non_finite, "zheevd failed to converge");
  return vals;
}

namespace {

// V f(diag) V^dagger without forming the diagonal matrix.
ComplexMatrix spectral_apply(const HermitianEigen& eg,
                             const std::vector<double>& fvals) {
  const std::size_t n = eg.eigenvalues.size();
  ComplexMatrix scaled(n, n);  // columns of V times f(lambda_j)
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      scaled(i, j) = eg.eigenvectors(i, j) * fvals[j];
  return scaled * eg.eigenvectors.adjoint();
}

ComplexMatrix spectral_apply_cplx(const HermitianEigen& eg,
                                  const std::vector<cplx>& fvals) {
  const std::size_t n = eg.eigenvalues.size();
  ComplexMatrix scaled(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      scaled(i, j) = eg.eigenvectors(i, j) * fvals[j];
  return scaled * eg.eigenvectors.adjoint();
}

}  // namespace

ComplexMatrix matrix_sqrt(const ComplexMatrix& p) {
  HermitianEigen eg = eigh(p);
  std::vector<double> roots(eg.eigenvalues.size());
  for (std::size_t i = 0; i < eg.eigenvalues.size(); ++i) {
    double v = eg.eigenvalues[i];
    if (v < -kPsdErrorTol)
      fail(errc::not_psd, "matrix_sqrt: eigenvalue below PSD tolerance");
    // sub-cutoff values are eigensolver noise; sqrt would amplify them
    roots[i] = v > kSupportCutoff ? std::sqrt(v) : 0.0;
  }
  return spectral_apply(eg, roots);
}

ComplexMatrix matrix_log2(const ComplexMatrix& p) {
  HermitianEigen eg = eigh(p);
  std::vector<double> logs(eg.eigenvalues.size());
  for (std::size_t i = 0; i < eg.eigenvalues.size(); ++i) {
    const double v = eg.eigenvalues[i];
    logs[i] = v > kSupportCutoff ? std::log2(v) : 0.0;  // support convention
  }
  return spectral_apply(eg, logs);
}

ComplexMatrix matrix_exp_ih(const ComplexMatrix& h) {
  HermitianEigen eg = eigh(h);
  std::vector<cplx> phases(eg.eigenvalues.size());
  for (std::size_t i = 0; i < eg.eigenvalues.size(); ++i)
    phases[i] = std::polar(1.0, eg.eigenvalues[i]);
  return spectral_apply_cplx(eg, phases);
}

ComplexMatrix unitary_log(const ComplexMatrix& u) {
  if (!u.is_square()) fail(errc::not_square, "unitary_log: not square");
  const std::size_t n = u.rows();
  // Schur form: for a unitary (normal) matrix T is diagonal and Q holds an
  // orthonormal eigenbasis, which zgeev would not guarantee at degeneracies.
  ComplexMatrix t = u;
  ComplexMatrix q(n, n);
  std::vector<cplx> w(n);
  lapack_int sdim = 0;
  const lapack_int info = LAPACKE_zgees(
      LAPACK_ROW_MAJOR, 'V', 'N', nullptr, static_cast<lapack_int>(n),
      t.data(), static_cast<lapack_int>(n), &sdim, w.data(), q.data(),
      static_cast<lapack_int>(n));
  if (info != 0) fail(errc::non_finite, "zgees failed");
  ComplexMatrix scaled(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const double theta = std::arg(t(i, i));
    for (std::size_t r = 0; r < n; ++r) scaled(r, i) = q(r, i) * theta;
  }
  return scaled * q.adjoint();
}

std::size_t rank_of(const std::vector<double>& eigenvalues, double cutoff) {
  std::size_t r = 0;
  for (double v : eigenvalues)
    if (v > cutoff) ++r;
  return r;
}

namespace detail {

std::size_t hermitian_param_count(std::size_t n) { return n * n; }

ComplexMatrix hermitian_from_params(const double* params, std::size_t n) {
  ComplexMatrix h(n, n);
  std::size_t idx = 0;
  for (std::size_t i = 0; i < n; ++i) h(i, i) = params[idx++];
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double re = params[idx++];
      const double im = params[idx++];
      h(i, j) = cplx(re, im);
      h(j, i) = cplx(re, -im);
    }
  return h;
}

std::vector<double> hermitian_to_params(const ComplexMatrix& h) {
  const std::size_t n = h.rows();
  std::vector<double> params(hermitian_param_count(n));
  std::size_t idx = 0;
  for (std::size_t i = 0; i < n; ++i) params[idx++] = h(i, i).real();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      params[idx++] = h(i, j).real();
      params[idx++] = h(i, j).imag();
    }
  return params;
}

}  // namespace detail
}  // namespace qcorr
