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
#include <functional>
#include <vector>

#include "qcorr/geometry.hpp"
#include "qcorr/state.hpp"

namespace qcorr {

/// Reproducibility contract of every minimization: same config + seed means
/// bit-for-bit identical results, restarts included.
struct OptimizerConfig {
  int restarts = 16;
  int max_iters = 2000;
  double step_tol = 1e-7;
  double value_tol = 1e-9;
  std::uint64_t seed = 0;
  int jobs = 0;  // parallel restart workers; 0 = hardware concurrency
  bool track_trace = false;
  /// Extensions only: alternate between the extension and classicalizer
  /// parameter blocks instead of one joint descent (comparison mode).
  bool alternating = false;
  /// Deterministic extra starts appended after the random ones.
  std::vector<std::vector<double>> warm_starts;
};

struct MeasureReport {
  double value = 0.0;
  std::vector<double> argmin;
  int restarts_used = 0;
  int best_restart = -1;
  bool converged = false;
  double final_grad_norm = 0.0;
  double final_step_norm = 0.0;
  std::int64_t objective_evals = 0;
  std::vector<std::pair<int, double>> best_trace;

  // Filled by the measure-level wrappers when meaningful.
  ComplexMatrix certificate;          // minimizing state (CQ/CC/separable)
  SubsystemLayout certificate_layout;
  ComplexMatrix extension;            // minimizing state extension
  SubsystemLayout extension_layout;
  std::size_t ancilla_dim = 0;
  std::size_t ancilla_dim_b = 0;
  bool dims_converged = false;
};

using Objective = std::function<double(const std::vector<double>&)>;
/// Per-restart objective instances; each owns its scratch so restarts can run
/// on worker threads without sharing state.
using ObjectiveFactory = std::function<Objective()>;

/// Multi-start finite-difference descent (central differences, backtracking
/// line search); the restart with the lowest value wins, ties broken by the
/// lowest restart index.
MeasureReport minimize(const ObjectiveFactory& make_objective,
                       std::size_t param_count, const OptimizerConfig& config,
                       double init_scale = 1.0);

/// Minimize over U(dim) through the exp(iH) chart, H from dim^2 reals.
MeasureReport minimize_over_unitaries(
    const std::function<double(const ComplexMatrix&)>& objective,
    std::size_t dim, const OptimizerConfig& config);

/// Minimize over the probability simplex, weights w_i = x_i^2 / sum x^2.
MeasureReport minimize_over_simplex(
    const std::function<double(const std::vector<double>&)>& objective,
    std::size_t k, const OptimizerConfig& config);

enum class Distance { bures_sq, relent };

/// min over CQ states across the cut (joint search over the classical basis
/// and conditional states); certificate is the closest CQ state found.
MeasureReport closest_cq(const DensityMatrix& rho,
                         const std::vector<std::string>& cut,
                         Distance distance, const OptimizerConfig& config);

/// min over CC states; the two bases live on left_cut and its complement.
MeasureReport closest_cc(const DensityMatrix& rho,
                         const std::vector<std::string>& left_cut,
                         Distance distance, const OptimizerConfig& config);

/// min over K-term separable ansaetze across the bipartite split; K = 0
/// picks the Caratheodory-style default (d_a d_b)^2.
MeasureReport closest_separable(const DensityMatrix& rho, std::size_t K,
                                Distance distance,
                                const OptimizerConfig& config);

namespace detail {

/// Central finite-difference gradient, h_i = 1e-5 * max(1, |x_i|); falls back
/// to a one-sided difference against f0 = f(x) at infinities.
std::vector<double> fd_gradient(const Objective& f, std::vector<double>& x,
                                double f0, double base_h = 1e-5);

std::vector<double> simplex_weights(const double* params, std::size_t k);

/// Column-orthonormalization V = Z (Z^dag Z)^(-1/2) of the complex matrix
/// packed as 2*rows*cols reals.
ComplexMatrix isometry_from_params(const double* params, std::size_t rows,
                                   std::size_t cols);
std::vector<double> isometry_to_params(const ComplexMatrix& v);

/// Decode the CQ block parameterization: unitary on the cut plus one
/// unnormalized PSD block per basis vector (A_i A_i^dag, jointly normalized).
struct CqDecoded {
  ComplexMatrix basis;                 // dc x dc unitary
  std::vector<ComplexMatrix> blocks;   // dr x dr, trace-normalized jointly
  std::vector<double> weights;         // tr of each normalized block
};
CqDecoded decode_cq(const double* params, std::size_t dc, std::size_t dr);
std::size_t cq_param_count(std::size_t dc, std::size_t dr);
/// Parameters that decode to the given CQ data (for warm starts).
std::vector<double> encode_cq(const ComplexMatrix& basis,
                              const std::vector<ComplexMatrix>& weighted_blocks);

ComplexMatrix assemble_cq(const CqDecoded& cq);  // on (cut, rest) order

}  // namespace detail

}  // namespace qcorr
