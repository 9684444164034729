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

#include "qcorr/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qcorr/errors.hpp"

namespace qcorr {
namespace detail {

double fidelity_with_sqrt(const ComplexMatrix& sqrt_rho,
                          const ComplexMatrix& sigma) {
  const ComplexMatrix m = sqrt_rho * sigma * sqrt_rho;
  const std::vector<double> ev = eigh_values(m);
  // Eigenvalues below the relative noise floor are solver dust; sqrt would
  // blow them up to ~1e-8 and break symmetry and the pure-state overlap law.
  const double floor = 1e-13 * std::max(ev.empty() ? 0.0 : ev.back(), 1e-300);
  double f = 0.0;
  for (double v : ev)
    if (v > floor) f += std::sqrt(v);
  return std::clamp(f, 0.0, 1.0);
}

double fidelity_raw(const ComplexMatrix& rho, const ComplexMatrix& sigma) {
  return fidelity_with_sqrt(matrix_sqrt(sigma), rho);
}

double entropy_of_eigs(const std::vector<double>& eigs) {
  double s = 0.0;
  for (double v : eigs)
    if (v > kSupportCutoff) s -= v * std::log2(v);
  return s;
}

double entropy_raw(const ComplexMatrix& rho) {
  return entropy_of_eigs(eigh_values(rho));
}

double relent_with_tr_rho_log_rho(double tr_rho_log_rho,
                                  const ComplexMatrix& rho,
                                  const ComplexMatrix& sigma) {
  // tr[rho log2 sigma] on the support of sigma, plus a support check:
  // weight of rho on ker(sigma) above the cutoff makes the value +inf.
  HermitianEigen eg = eigh(sigma);
  const std::size_t n = eg.eigenvalues.size();
  double tr_rho_log_sigma = 0.0;
  double kernel_weight = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    // <v_k| rho |v_k>
    double w = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      cplx s(0.0, 0.0);
      for (std::size_t j = 0; j < n; ++j)
        s += rho(i, j) * eg.eigenvectors(j, k);
      w += (std::conj(eg.eigenvectors(i, k)) * s).real();
    }
    if (eg.eigenvalues[k] > kSupportCutoff)
      tr_rho_log_sigma += w * std::log2(eg.eigenvalues[k]);
    else
      kernel_weight += std::max(0.0, w);
  }
  if (kernel_weight > 1e-9) return std::numeric_limits<double>::infinity();
  return std::max(0.0, tr_rho_log_rho - tr_rho_log_sigma);
}

}  // namespace detail

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim())
    fail(errc::dimension_mismatch, "fidelity: dimension mismatch");
  return detail::fidelity_raw(rho.mat(), sigma.mat());
}

double bures_distance_sq(const DensityMatrix& rho, const DensityMatrix& sigma) {
  return 2.0 - 2.0 * fidelity(rho, sigma);
}

double bures_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  return std::sqrt(std::max(0.0, bures_distance_sq(rho, sigma)));
}

double entropy(const DensityMatrix& rho) {
  return detail::entropy_raw(rho.mat());
}

double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim())
    fail(errc::dimension_mismatch, "relative_entropy: dimension mismatch");
  const double tr_rho_log_rho = -detail::entropy_raw(rho.mat());
  return detail::relent_with_tr_rho_log_rho(tr_rho_log_rho, rho.mat(),
                                            sigma.mat());
}

PinchingMap::PinchingMap(std::vector<std::string> c, ComplexMatrix b)
    : cut(std::move(c)), basis(std::move(b)) {
  if (basis.rows() != basis.cols())
    fail(errc::incomplete_basis, "pinching basis must be complete");
  // Completeness: sum_i |i><i| = I on the cut.
  ComplexMatrix g = basis.adjoint() * basis;
  g -= ComplexMatrix::identity(basis.rows());
  if (g.frobenius_norm() > 1e-10 * std::max(1.0, (double)basis.rows()))
    fail(errc::non_orthonormal_basis, "pinching basis not orthonormal");
}

DensityMatrix pinch(const DensityMatrix& rho, const PinchingMap& map) {
  const SubsystemLayout& layout = rho.layout();
  const std::size_t dc = layout.dim_of(map.cut);
  if (map.basis.rows() != dc)
    fail(errc::dimension_mismatch, "pinching basis does not match cut");

  const ComplexMatrix u = detail::embed_operator(map.basis, layout, map.cut);
  ComplexMatrix rot = u.adjoint() * rho.mat() * u;

  // Zero the blocks coupling different basis vectors of the cut. The cut
  // index may be interleaved with other labels, so compare decoded indices.
  const std::vector<std::size_t> strides = layout.strides();
  std::vector<std::size_t> cut_parts;
  for (const std::string& l : map.cut) cut_parts.push_back(layout.index_of(l));
  const std::size_t d = rho.dim();
  auto cut_index = [&](std::size_t flat) {
    std::size_t ci = 0;
    for (std::size_t k : cut_parts)
      ci = ci * layout.part(k).dim + (flat / strides[k]) % layout.part(k).dim;
    return ci;
  };
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c)
      if (cut_index(r) != cut_index(c)) rot(r, c) = cplx(0.0, 0.0);

  return DensityMatrix::unchecked(layout, u * rot * u.adjoint());
}

std::pair<double, double> relent_cq_decomposition(const DensityMatrix& rho,
                                                  const DensityMatrix& sigma_cq,
                                                  const PinchingMap& map) {
  DensityMatrix pinched_sigma = pinch(sigma_cq, map);
  ComplexMatrix diff = pinched_sigma.mat() - sigma_cq.mat();
  if (diff.frobenius_norm() > 1e-8 * std::max(1.0, sigma_cq.mat().frobenius_norm()))
    fail(errc::basis_mismatch,
         "relent_cq_decomposition: sigma is not classical in the map basis");

  const double lhs = relative_entropy(rho, sigma_cq);
  const DensityMatrix pinched = pinch(rho, map);
  const double rhs = entropy(pinched) - entropy(rho) +
                     relative_entropy(pinched, sigma_cq);
  return {lhs, rhs};
}

}  // namespace qcorr
