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

#include <utility>

#include "qcorr/state.hpp"

namespace qcorr {

/// F(rho, sigma) = tr sqrt(sqrt(sigma) rho sqrt(sigma)), clamped to [0, 1].
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Squared Bures distance 2 - 2F; the primary distance of the library
/// (quantifiers minimize the square).
double bures_distance_sq(const DensityMatrix& rho, const DensityMatrix& sigma);
double bures_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

/// S(rho||sigma) in bits; +infinity (the sentinel value, never an overflow)
/// when supp(rho) leaves supp(sigma) beyond the support cutoff.
double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma);

/// von Neumann entropy in bits.
double entropy(const DensityMatrix& rho);

/// Complete rank-1 dephasing on a label set.
struct PinchingMap {
  std::vector<std::string> cut;
  ComplexMatrix basis;  // orthonormal columns spanning the cut space

  PinchingMap(std::vector<std::string> c, ComplexMatrix b);
};

DensityMatrix pinch(const DensityMatrix& rho, const PinchingMap& map);

/// Both sides of the decomposition
///   S(rho||sigma_cq) = S(Pi(rho)) - S(rho) + S(Pi(rho)||sigma_cq)
/// for sigma_cq classical in the map's basis; the caller asserts equality.
std::pair<double, double> relent_cq_decomposition(const DensityMatrix& rho,
                                                  const DensityMatrix& sigma_cq,
                                                  const PinchingMap& map);

namespace detail {

// Raw-matrix versions used inside optimizer objectives; inputs are assumed
// Hermitian/PSD up to optimizer noise and eigenvalues are clamped.
double fidelity_raw(const ComplexMatrix& rho, const ComplexMatrix& sigma);
/// F(rho, sigma) with sqrt(rho) precomputed; one eigenvalue solve per call.
double fidelity_with_sqrt(const ComplexMatrix& sqrt_rho,
                          const ComplexMatrix& sigma);
/// sum of sqrt(eigenvalues) with the relative noise floor applied, clamped to
/// [0, 1] -- the tail of every fidelity computation.
double fidelity_from_eigs(const std::vector<double>& eigs);
double entropy_raw(const ComplexMatrix& rho);
double entropy_of_eigs(const std::vector<double>& eigs);
/// S(rho||sigma) from precomputed -S(rho) = tr[rho log rho].
double relent_with_tr_rho_log_rho(double tr_rho_log_rho,
                                  const ComplexMatrix& rho,
                                  const ComplexMatrix& sigma);

}  // namespace detail

}  // namespace qcorr
