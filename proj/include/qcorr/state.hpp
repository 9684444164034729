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

#include <cstdint>
#include <string>
#include <vector>

#include "qcorr/eig.hpp"
#include "qcorr/layout.hpp"
#include "qcorr/matrix.hpp"
#include "qcorr/rng.hpp"

namespace qcorr {

inline constexpr double kTraceTol = 1e-10;
inline constexpr double kStateHermTol = 1e-8;
inline constexpr double kStateEigTol = 1e-8;
inline constexpr double kClassicalTol = 1e-8;

/// Validated quantum state: Hermitian within 1e-8, unit trace within 1e-10,
/// eigenvalues >= -1e-8, with an attached subsystem layout.
class DensityMatrix {
 public:
  DensityMatrix() = default;
  DensityMatrix(SubsystemLayout layout, ComplexMatrix mat);

  /// Skips validation; for internal assembly paths that are valid by
  /// construction (partial traces, pinchings, convex mixtures of states).
  static DensityMatrix unchecked(SubsystemLayout layout, ComplexMatrix mat);

  const SubsystemLayout& layout() const { return layout_; }
  const ComplexMatrix& mat() const { return mat_; }
  std::size_t dim() const { return mat_.rows(); }

 private:
  SubsystemLayout layout_;
  ComplexMatrix mat_;
};

/// Normalized pure state as an amplitude vector with a layout.
struct PureState {
  SubsystemLayout layout;
  std::vector<cplx> amps;

  std::size_t dim() const { return amps.size(); }
  double norm() const;
  DensityMatrix to_density() const;
};

/// Probability-weighted list of states on one layout.
struct Ensemble {
  std::vector<double> weights;
  std::vector<DensityMatrix> members;

  Ensemble(std::vector<double> w, std::vector<DensityMatrix> m);
};

/// K-term product ansatz p_i, rho^i_a, rho^i_b.
struct SeparableAnsatz {
  std::vector<double> weights;
  std::vector<ComplexMatrix> left;
  std::vector<ComplexMatrix> right;

  SeparableAnsatz(std::vector<double> w, std::vector<ComplexMatrix> l,
                  std::vector<ComplexMatrix> r);
  std::size_t terms() const { return weights.size(); }
};

// -- constructors for the named state classes --------------------------------

/// sum_i p_i |b_i><b_i| (x) cond_i on layout (a, b); basis columns must be
/// orthonormal.
DensityMatrix make_cq(const std::vector<double>& weights,
                      const ComplexMatrix& basis,
                      const std::vector<DensityMatrix>& conditionals);

/// sum_ij p_ij |l_i><l_i| (x) |r_j><r_j|; joint_weights is row-major k_l x k_r.
DensityMatrix make_cc(const std::vector<double>& joint_weights,
                      const ComplexMatrix& left_basis,
                      const ComplexMatrix& right_basis);

DensityMatrix assemble_separable(const SeparableAnsatz& ansatz);

/// Classical-quantum embedding of a separable ansatz on (a, a', b): term i
/// becomes |alpha_i><alpha_i| (x) rho^i_b with |alpha_i> the purification of
/// rho^i_a packed into its own a' block, so the |alpha_i> are orthonormal.
/// ancilla_dim 0 picks the default K * d_a.
DensityMatrix embed_separable_to_cq(const SeparableAnsatz& ansatz,
                                    std::size_t ancilla_dim = 0);

// -- random state generators (seed-deterministic, Ginibre-induced) -----------

DensityMatrix random_density(const SubsystemLayout& layout, std::size_t rank,
                             std::uint64_t seed);
PureState random_pure(const SubsystemLayout& layout, std::uint64_t seed);
ComplexMatrix random_unitary(std::size_t dim, std::uint64_t seed);
/// Kraus operators of a random channel on a dim-dimensional system with the
/// given number of Kraus terms (random Stinespring isometry).
std::vector<ComplexMatrix> random_kraus_channel(std::size_t dim,
                                                std::size_t kraus_count,
                                                std::uint64_t seed);

/// p |Phi+><Phi+| + (1-p) I/4; separable iff p <= 1/3 (PPT oracle).
DensityMatrix werner(double p);
PureState bell();

// -- structure tests ----------------------------------------------------------

/// True iff some rank-1 pinching on the cut leaves rho invariant within tol.
/// The candidate basis is found by simultaneously diagonalizing the commuting
/// family of conditional operators tr_rest[(I (x) M) rho].
bool is_cq(const DensityMatrix& rho, const std::vector<std::string>& cut,
           double tol = kClassicalTol);
bool is_cc(const DensityMatrix& rho, double tol = kClassicalTol);

/// Minimum eigenvalue of the partial transpose over the given labels;
/// >= 0 iff separable in 2x2 and 2x3 (the PPT oracle).
double min_pt_eigenvalue(const DensityMatrix& rho,
                         const std::vector<std::string>& transposed);

// -- tensor-structure operations ---------------------------------------------

DensityMatrix partial_trace(const DensityMatrix& rho,
                            const std::vector<std::string>& keep);
DensityMatrix permute_subsystems(const DensityMatrix& rho,
                                 const std::vector<std::string>& order);
ComplexMatrix partial_transpose(const DensityMatrix& rho,
                                const std::vector<std::string>& transposed);

/// Canonical purification sum_k sqrt(mu_k) |v_k>|k>, eigenvalues descending,
/// ancilla dimension = rank(rho).
PureState purify(const DensityMatrix& rho,
                 const std::string& ancilla_label = "env");

struct SchmidtDecomposition {
  std::vector<double> coefficients;  // lambda_i, descending, sum to 1
  ComplexMatrix left;                // columns |x_i>
  ComplexMatrix right;               // columns |y_i>
};

SchmidtDecomposition schmidt(const PureState& psi,
                             const std::vector<std::string>& left_labels);

/// rho after U acting on one label.
DensityMatrix apply_local_unitary(const DensityMatrix& rho,
                                  const std::string& label,
                                  const ComplexMatrix& u);
/// rho after a Kraus channel on one label.
DensityMatrix apply_channel(const DensityMatrix& rho, const std::string& label,
                            const std::vector<ComplexMatrix>& kraus);

namespace detail {

// Raw-layout workhorses used by optimizer objectives; no state validation.
ComplexMatrix partial_trace_raw(const ComplexMatrix& m,
                                const SubsystemLayout& layout,
                                const std::vector<std::string>& keep);
ComplexMatrix permute_raw(const ComplexMatrix& m, const SubsystemLayout& layout,
                          const std::vector<std::string>& order);
/// Operator acting on `labels` (tensor order as listed) embedded into the
/// full space of `layout`.
ComplexMatrix embed_operator(const ComplexMatrix& op,
                             const SubsystemLayout& layout,
                             const std::vector<std::string>& labels);
/// Flat index permutation mapping old row indices to new ones under a part
/// reordering.
std::vector<std::size_t> permutation_map(const SubsystemLayout& layout,
                                         const std::vector<std::string>& order);
ComplexMatrix random_ginibre(std::size_t rows, std::size_t cols, Rng& rng);
/// Gram-Schmidt; columns assumed linearly independent.
void orthonormalize_columns(ComplexMatrix& m);

}  // namespace detail

}  // namespace qcorr
