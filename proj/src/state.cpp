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

#include "qcorr/state.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qcorr/errors.hpp"

namespace qcorr {
namespace {

void validate_distribution(const std::vector<double>& w, double tol = 1e-10) {
  double sum = 0.0;
  for (double p : w) {
    if (!(p >= -1e-12))
      fail(errc::bad_distribution, "negative probability weight");
    sum += p;
  }
  if (std::abs(sum - 1.0) > tol)
    fail(errc::bad_distribution, "weights do not sum to 1");
}

void validate_orthonormal_columns(const ComplexMatrix& basis,
                                  double tol = 1e-10) {
  for (std::size_t i = 0; i < basis.cols(); ++i)
    for (std::size_t j = i; j < basis.cols(); ++j) {
      cplx g(0.0, 0.0);
      for (std::size_t r = 0; r < basis.rows(); ++r)
        g += std::conj(basis(r, i)) * basis(r, j);
      const double target = (i == j) ? 1.0 : 0.0;
      if (std::abs(g - target) > tol)
        fail(errc::non_orthonormal_basis, "basis columns not orthonormal");
    }
}

}  // namespace

DensityMatrix::DensityMatrix(SubsystemLayout layout, ComplexMatrix mat)
    : layout_(std::move(layout)), mat_(std::move(mat)) {
  if (!mat_.is_square() || mat_.rows() != layout_.total_dim())
    fail(errc::dimension_mismatch,
         "state dimension does not match layout " + layout_.to_string());
  if (!mat_.all_finite()) fail(errc::non_finite, "state has NaN/Inf entries");
  const double scale = std::max(1.0, mat_.frobenius_norm());
  if (mat_.hermiticity_defect() > kStateHermTol * scale)
    fail(errc::not_hermitian, "state is not Hermitian within 1e-8");
  if (std::abs(mat_.trace() - cplx(1.0, 0.0)) > kTraceTol)
    fail(errc::bad_parameter, "state trace differs from 1 beyond 1e-10");
  const std::vector<double> ev = eigh_values(mat_);
  if (!ev.empty() && ev.front() < -kStateEigTol)
    fail(errc::not_psd, "state has eigenvalue below -1e-8");
}

DensityMatrix DensityMatrix::unchecked(SubsystemLayout layout,
                                       ComplexMatrix mat) {
  DensityMatrix d;
  d.layout_ = std::move(layout);
  d.mat_ = std::move(mat);
  return d;
}

double PureState::norm() const {
  return std::sqrt(kernels::norm_sq(amps.data(), amps.size()));
}

DensityMatrix PureState::to_density() const {
  const ComplexMatrix v = ComplexMatrix::column(amps);
  return DensityMatrix::unchecked(layout, outer(v, v));
}

Ensemble::Ensemble(std::vector<double> w, std::vector<DensityMatrix> m)
    : weights(std::move(w)), members(std::move(m)) {
  if (weights.size() != members.size())
    fail(errc::bad_distribution, "ensemble weight/member count mismatch");
  if (weights.empty()) fail(errc::bad_distribution, "empty ensemble");
  validate_distribution(weights);
  for (const DensityMatrix& d : members)
    if (d.layout() != members.front().layout())
      fail(errc::layout_mismatch, "ensemble members on different layouts");
}

SeparableAnsatz::SeparableAnsatz(std::vector<double> w,
                                 std::vector<ComplexMatrix> l,
                                 std::vector<ComplexMatrix> r)
    : weights(std::move(w)), left(std::move(l)), right(std::move(r)) {
  if (weights.empty() || weights.size() != left.size() ||
      weights.size() != right.size())
    fail(errc::bad_distribution, "ansatz term count mismatch");
  validate_distribution(weights);
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (left[k].rows() != left.front().rows() ||
        right[k].rows() != right.front().rows())
      fail(errc::layout_mismatch, "ansatz factor dimensions differ");
  }
}

DensityMatrix make_cq(const std::vector<double>& weights,
                      const ComplexMatrix& basis,
                      const std::vector<DensityMatrix>& conditionals) {
  if (weights.size() != basis.cols() || weights.size() != conditionals.size())
    fail(errc::bad_distribution, "make_cq: term count mismatch");
  validate_distribution(weights);
  validate_orthonormal_columns(basis);
  const std::size_t da = basis.rows();
  const std::size_t db = conditionals.front().dim();
  ComplexMatrix acc(da * db, da * db);
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (conditionals[i].dim() != db)
      fail(errc::dimension_mismatch, "make_cq: conditional dimension differs");
    ComplexMatrix bi(da, 1);
    for (std::size_t r = 0; r < da; ++r) bi(r, 0) = basis(r, i);
    ComplexMatrix term = tensor(outer(bi, bi), conditionals[i].mat());
    kernels::axpy(cplx(weights[i], 0.0), term.data(), acc.data(), acc.size());
  }
  return DensityMatrix(SubsystemLayout::bipartite(da, db), std::move(acc));
}

DensityMatrix make_cc(const std::vector<double>& joint_weights,
                      const ComplexMatrix& left_basis,
                      const ComplexMatrix& right_basis) {
  const std::size_t kl = left_basis.cols(), kr = right_basis.cols();
  if (joint_weights.size() != kl * kr)
    fail(errc::bad_distribution, "make_cc: weight grid shape mismatch");
  validate_distribution(joint_weights);
  validate_orthonormal_columns(left_basis);
  validate_orthonormal_columns(right_basis);
  const std::size_t da = left_basis.rows(), db = right_basis.rows();
  ComplexMatrix acc(da * db, da * db);
  for (std::size_t i = 0; i < kl; ++i)
    for (std::size_t j = 0; j < kr; ++j) {
      const double p = joint_weights[i * kr + j];
      if (p == 0.0) continue;
      ComplexMatrix li(da, 1), rj(db, 1);
      for (std::size_t r = 0; r < da; ++r) li(r, 0) = left_basis(r, i);
      for (std::size_t r = 0; r < db; ++r) rj(r, 0) = right_basis(r, j);
      ComplexMatrix term = tensor(outer(li, li), outer(rj, rj));
      kernels::axpy(cplx(p, 0.0), term.data(), acc.data(), acc.size());
    }
  return DensityMatrix(SubsystemLayout::bipartite(da, db), std::move(acc));
}

DensityMatrix assemble_separable(const SeparableAnsatz& ansatz) {
  const std::size_t da = ansatz.left.front().rows();
  const std::size_t db = ansatz.right.front().rows();
  ComplexMatrix acc(da * db, da * db);
  for (std::size_t k = 0; k < ansatz.terms(); ++k) {
    ComplexMatrix term = tensor(ansatz.left[k], ansatz.right[k]);
    kernels::axpy(cplx(ansatz.weights[k], 0.0), term.data(), acc.data(),
                  acc.size());
  }
  return DensityMatrix(SubsystemLayout::bipartite(da, db), std::move(acc));
}

DensityMatrix embed_separable_to_cq(const SeparableAnsatz& ansatz,
                                    std::size_t ancilla_dim) {
  const std::size_t da = ansatz.left.front().rows();
  const std::size_t db = ansatz.right.front().rows();
  const std::size_t K = ansatz.terms();
  if (ancilla_dim == 0) ancilla_dim = K * da;

  // Pack the purification of each left factor into its own a' block; the
  // resulting |alpha_i> are orthonormal by disjoint support.
  std::vector<std::vector<cplx>> alphas;
  std::size_t offset = 0;
  for (std::size_t k = 0; k < K; ++k) {
    DensityMatrix lk(SubsystemLayout({{"a", da}}), ansatz.left[k]);
    PureState pk = purify(lk);
    const std::size_t rk = pk.dim() / da;
    if (offset + rk > ancilla_dim)
      fail(errc::ancilla_too_small,
           "embed_separable_to_cq: ancilla dimension " +
               std::to_string(ancilla_dim) + " cannot hold " +
               std::to_string(K) + " orthogonal purifications");
    std::vector<cplx> alpha(da * ancilla_dim, cplx(0.0, 0.0));
    for (std::size_t x = 0; x < da; ++x)
      for (std::size_t e = 0; e < rk; ++e)
        alpha[x * ancilla_dim + offset + e] = pk.amps[x * rk + e];
    alphas.push_back(std::move(alpha));
    offset += rk;
  }

  const std::size_t dext = da * ancilla_dim * db;
  ComplexMatrix acc(dext, dext);
  for (std::size_t k = 0; k < K; ++k) {
    const ComplexMatrix av = ComplexMatrix::column(alphas[k]);
    ComplexMatrix term = tensor(outer(av, av), ansatz.right[k]);
    kernels::axpy(cplx(ansatz.weights[k], 0.0), term.data(), acc.data(),
                  acc.size());
  }
  SubsystemLayout layout({{"a", da}, {"a'", ancilla_dim}, {"b", db}});
  return DensityMatrix(layout, std::move(acc));
}

namespace detail {

ComplexMatrix random_ginibre(std::size_t rows, std::size_t cols, Rng& rng) {
  ComplexMatrix g(rows, cols);
  for (std::size_t i = 0; i < rows * cols; ++i) {
    const double re = rng.next_normal();
    const double im = rng.next_normal();
    g.data()[i] = cplx(re, im) * 0.7071067811865476;
  }
  return g;
}

void orthonormalize_columns(ComplexMatrix& m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  for (std::size_t j = 0; j < cols; ++j) {
    for (int pass = 0; pass < 2; ++pass) {  // re-orthogonalize once
      for (std::size_t p = 0; p < j; ++p) {
        cplx g(0.0, 0.0);
        for (std::size_t r = 0; r < rows; ++r)
          g += std::conj(m(r, p)) * m(r, j);
        for (std::size_t r = 0; r < rows; ++r) m(r, j) -= g * m(r, p);
      }
    }
    double nrm = 0.0;
    for (std::size_t r = 0; r < rows; ++r) nrm += std::norm(m(r, j));
    nrm = std::sqrt(nrm);
    if (nrm < 1e-14)
      fail(errc::bad_parameter, "orthonormalize: dependent columns");
    for (std::size_t r = 0; r < rows; ++r) m(r, j) /= nrm;
  }
}

}  // namespace detail

DensityMatrix random_density(const SubsystemLayout& layout, std::size_t rank,
                             std::uint64_t seed) {
  const std::size_t d = layout.total_dim();
  if (rank < 1 || rank > d)
    fail(errc::bad_rank, "random_density: rank must be in [1, dim]");
  Rng rng(seed);
  ComplexMatrix g = detail::random_ginibre(d, rank, rng);
  ComplexMatrix rho = g * g.adjoint();
  const double tr = rho.trace().real();
  rho *= cplx(1.0 / tr, 0.0);
  return DensityMatrix(layout, std::move(rho));
}

PureState random_pure(const SubsystemLayout& layout, std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t d = layout.total_dim();
  PureState psi{layout, std::vector<cplx>(d)};
  for (std::size_t i = 0; i < d; ++i) {
    const double re = rng.next_normal();
    const double im = rng.next_normal();
    psi.amps[i] = cplx(re, im);
  }
  const double nrm = psi.norm();
  for (cplx& z : psi.amps) z /= nrm;
  return psi;
}

ComplexMatrix random_unitary(std::size_t dim, std::uint64_t seed) {
  Rng rng(seed);
  ComplexMatrix g = detail::random_ginibre(dim, dim, rng);
  detail::orthonormalize_columns(g);
  return g;
}

std::vector<ComplexMatrix> random_kraus_channel(std::size_t dim,
                                                std::size_t kraus_count,
                                                std::uint64_t seed) {
  Rng rng(seed);
  ComplexMatrix v = detail::random_ginibre(dim * kraus_count, dim, rng);
  detail::orthonormalize_columns(v);
  std::vector<ComplexMatrix> kraus(kraus_count, ComplexMatrix(dim, dim));
  for (std::size_t e = 0; e < kraus_count; ++e)
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j)
        kraus[e](i, j) = v(i * kraus_count + e, j);
  return kraus;
}

DensityMatrix werner(double p) {
  if (!(p >= 0.0 && p <= 1.0))
    fail(errc::bad_parameter, "werner: p must lie in [0, 1]");
  const PureState phi = bell();
  ComplexMatrix m = outer(ComplexMatrix::column(phi.amps),
                          ComplexMatrix::column(phi.amps));
  m *= cplx(p, 0.0);
  for (std::size_t i = 0; i < 4; ++i) m(i, i) += (1.0 - p) / 4.0;
  return DensityMatrix(SubsystemLayout::bipartite(2, 2), std::move(m));
}

PureState bell() {
  PureState psi{SubsystemLayout::bipartite(2, 2), std::vector<cplx>(4)};
  psi.amps[0] = psi.amps[3] = 0.7071067811865476;
  return psi;
}

// -- tensor-structure operations ---------------------------------------------

namespace detail {

std::vector<std::size_t> permutation_map(const SubsystemLayout& layout,
                                         const std::vector<std::string>& order) {
  if (order.size() != layout.part_count())
    fail(errc::layout_mismatch, "permutation must list every label");
  std::vector<std::size_t> perm;  // position in old layout of each new part
  for (const std::string& l : order) perm.push_back(layout.index_of(l));
  const std::vector<std::size_t> old_strides = layout.strides();

  std::vector<Part> new_parts;
  for (std::size_t idx : perm) new_parts.push_back(layout.part(idx));
  SubsystemLayout new_layout(new_parts);
  const std::vector<std::size_t> new_strides = new_layout.strides();

  const std::size_t d = layout.total_dim();
  std::vector<std::size_t> map(d);
  for (std::size_t r = 0; r < d; ++r) {
    std::size_t rest = r, out = 0;
    std::vector<std::size_t> sub(layout.part_count());
    for (std::size_t k = 0; k < layout.part_count(); ++k) {
      sub[k] = rest / old_strides[k];
      rest %= old_strides[k];
    }
    for (std::size_t k = 0; k < perm.size(); ++k)
      out += sub[perm[k]] * new_strides[k];
    map[r] = out;
  }
  return map;
}

ComplexMatrix permute_raw(const ComplexMatrix& m, const SubsystemLayout& layout,
                          const std::vector<std::string>& order) {
  const std::vector<std::size_t> map = permutation_map(layout, order);
  const std::size_t d = m.rows();
  ComplexMatrix out(d, d);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) out(map[r], map[c]) = m(r, c);
  return out;
}

ComplexMatrix partial_trace_raw(const ComplexMatrix& m,
                                const SubsystemLayout& layout,
                                const std::vector<std::string>& keep) {
  for (const std::string& l : keep) (void)layout.index_of(l);
  const std::vector<std::string> traced = layout.complement(keep);
  // Kept labels in original order.
  std::vector<std::string> kept_ordered;
  for (const Part& p : layout.parts())
    if (std::find(keep.begin(), keep.end(), p.label) != keep.end())
      kept_ordered.push_back(p.label);
  if (kept_ordered.size() != keep.size())
    fail(errc::unknown_label, "partial_trace: repeated label in keep set");

  const std::vector<std::size_t> strides = layout.strides();
  std::size_t dk = 1, dt = 1;
  std::vector<std::size_t> k_idx, t_idx;
  for (std::size_t i = 0; i < layout.part_count(); ++i) {
    const std::string& l = layout.part(i).label;
    if (std::find(keep.begin(), keep.end(), l) != keep.end()) {
      dk *= layout.part(i).dim;
      k_idx.push_back(i);
    } else {
      dt *= layout.part(i).dim;
      t_idx.push_back(i);
    }
  }

  // Flat offsets of every kept and traced multi-index.
  auto offsets = [&](const std::vector<std::size_t>& parts_sel,
                     std::size_t count) {
    std::vector<std::size_t> off(count, 0);
    for (std::size_t flat = 0; flat < count; ++flat) {
      std::size_t rest = flat;
      for (std::size_t k = parts_sel.size(); k-- > 0;) {
        const std::size_t dim = layout.part(parts_sel[k]).dim;
        off[flat] += (rest % dim) * strides[parts_sel[k]];
        rest /= dim;
      }
    }
    return off;
  };
  const std::vector<std::size_t> k_off = offsets(k_idx, dk);
  const std::vector<std::size_t> t_off = offsets(t_idx, dt);

  const std::size_t d = m.rows();
  ComplexMatrix out(dk, dk);
  for (std::size_t i = 0; i < dk; ++i)
    for (std::size_t j = 0; j < dk; ++j) {
      cplx s(0.0, 0.0);
      for (std::size_t t = 0; t < dt; ++t)
        s += m.data()[(k_off[i] + t_off[t]) * d + (k_off[j] + t_off[t])];
      out(i, j) = s;
    }
  return out;
}

ComplexMatrix embed_operator(const ComplexMatrix& op,
                             const SubsystemLayout& layout,
                             const std::vector<std::string>& labels) {
  const std::vector<std::size_t> strides = layout.strides();
  std::size_t ds = 1, dr = 1;
  std::vector<std::size_t> s_idx, r_idx;
  for (const std::string& l : labels) s_idx.push_back(layout.index_of(l));
  for (std::size_t i = 0; i < layout.part_count(); ++i)
    if (std::find(s_idx.begin(), s_idx.end(), i) == s_idx.end()) {
      r_idx.push_back(i);
      dr *= layout.part(i).dim;
    }
  for (std::size_t i : s_idx) ds *= layout.part(i).dim;
  if (op.rows() != ds || op.cols() != ds)
    fail(errc::dimension_mismatch, "embed_operator: operator/label mismatch");

  auto offsets = [&](const std::vector<std::size_t>& parts_sel,
                     std::size_t count) {
    std::vector<std::size_t> off(count, 0);
    for (std::size_t flat = 0; flat < count; ++flat) {
      std::size_t rest = flat;
      for (std::size_t k = parts_sel.size(); k-- > 0;) {
        const std::size_t dim = layout.part(parts_sel[k]).dim;
        off[flat] += (rest % dim) * strides[parts_sel[k]];
        rest /= dim;
      }
    }
    return off;
  };
  const std::vector<std::size_t> s_off = offsets(s_idx, ds);
  const std::vector<std::size_t> r_off = offsets(r_idx, dr);

  const std::size_t d = layout.total_dim();
  ComplexMatrix out(d, d);
  for (std::size_t i = 0; i < ds; ++i)
    for (std::size_t j = 0; j < ds; ++j) {
      const cplx v = op(i, j);
      if (v == cplx(0.0, 0.0)) continue;
      for (std::size_t r = 0; r < dr; ++r)
        out.data()[(s_off[i] + r_off[r]) * d + (s_off[j] + r_off[r])] = v;
    }
  return out;
}

}  // namespace detail

DensityMatrix partial_trace(const DensityMatrix& rho,
                            const std::vector<std::string>& keep) {
  ComplexMatrix out = detail::partial_trace_raw(rho.mat(), rho.layout(), keep);
  std::vector<Part> parts;
  for (const Part& p : rho.layout().parts())
    if (std::find(keep.begin(), keep.end(), p.label) != keep.end())
      parts.push_back(p);
  return DensityMatrix::unchecked(SubsystemLayout(parts), std::move(out));
}

DensityMatrix permute_subsystems(const DensityMatrix& rho,
                                 const std::vector<std::string>& order) {
  ComplexMatrix out = detail::permute_raw(rho.mat(), rho.layout(), order);
  std::vector<Part> parts;
  for (const std::string& l : order)
    parts.push_back(rho.layout().part(rho.layout().index_of(l)));
  return DensityMatrix::unchecked(SubsystemLayout(parts), std::move(out));
}

ComplexMatrix partial_transpose(const DensityMatrix& rho,
                                const std::vector<std::string>& transposed) {
  const SubsystemLayout& layout = rho.layout();
  const std::vector<std::size_t> strides = layout.strides();
  std::vector<bool> flip(layout.part_count(), false);
  for (const std::string& l : transposed) flip[layout.index_of(l)] = true;

  const std::size_t d = rho.dim();
  ComplexMatrix out(d, d);
  std::vector<std::size_t> ri(layout.part_count()), ci(layout.part_count());
  for (std::size_t r = 0; r < d; ++r) {
    std::size_t rest = r;
    for (std::size_t k = 0; k < layout.part_count(); ++k) {
      ri[k] = rest / strides[k];
      rest %= strides[k];
    }
    for (std::size_t c = 0; c < d; ++c) {
      std::size_t cr = c;
      for (std::size_t k = 0; k < layout.part_count(); ++k) {
        ci[k] = cr / strides[k];
        cr %= strides[k];
      }
      std::size_t nr = 0, nc = 0;
      for (std::size_t k = 0; k < layout.part_count(); ++k) {
        nr += (flip[k] ? ci[k] : ri[k]) * strides[k];
        nc += (flip[k] ? ri[k] : ci[k]) * strides[k];
      }
      out.data()[nr * d + nc] = rho.mat()(r, c);
    }
  }
  return out;
}

double min_pt_eigenvalue(const DensityMatrix& rho,
                         const std::vector<std::string>& transposed) {
  const std::vector<double> ev = eigh_values(partial_transpose(rho, transposed));
  return ev.front();
}

PureState purify(const DensityMatrix& rho, const std::string& ancilla_label) {
  HermitianEigen eg = eigh(rho.mat());
  const std::size_t d = rho.dim();
  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::reverse(order.begin(), order.end());  // descending eigenvalues
  std::size_t rank = 0;
  for (std::size_t k : order)
    if (eg.eigenvalues[k] > kSupportCutoff) ++rank;
  if (rank == 0) fail(errc::bad_parameter, "purify: zero state");

  std::vector<Part> parts = rho.layout().parts();
  parts.push_back({ancilla_label, rank});
  PureState psi{SubsystemLayout(parts), std::vector<cplx>(d * rank)};
  for (std::size_t k = 0; k < rank; ++k) {
    const std::size_t col = order[k];
    const double root = std::sqrt(std::max(0.0, eg.eigenvalues[col]));
    for (std::size_t i = 0; i < d; ++i)
      psi.amps[i * rank + k] = root * eg.eigenvectors(i, col);
  }
  return psi;
}

SchmidtDecomposition schmidt(const PureState& psi,
                             const std::vector<std::string>& left_labels) {
  if (std::abs(psi.norm() - 1.0) > 1e-10)
    fail(errc::not_normalized, "schmidt: state is not normalized");

  // Amplitudes as a (left x right) matrix, permuting if the cut is not a
  // layout prefix.
  const std::vector<std::string> right_labels =
      psi.layout.complement(left_labels);
  std::vector<std::string> order;
  for (const Part& p : psi.layout.parts())
    if (std::find(left_labels.begin(), left_labels.end(), p.label) !=
        left_labels.end())
      order.push_back(p.label);
  for (const std::string& l : right_labels) order.push_back(l);

  std::vector<cplx> amps = psi.amps;
  if (order != psi.layout.labels()) {
    // Permute amplitudes with the row map of the reordered layout.
    std::vector<std::size_t> map = detail::permutation_map(psi.layout, order);
    std::vector<cplx> p(amps.size());
    for (std::size_t i = 0; i < amps.size(); ++i) p[map[i]] = amps[i];
    amps = std::move(p);
  }

  const std::size_t dl = psi.layout.dim_of(order) /
                         psi.layout.dim_of(right_labels);
  const std::size_t dr = psi.layout.dim_of(right_labels);
  ComplexMatrix m(dl, dr, std::move(amps));
  HermitianEigen eg = eigh(m * m.adjoint());

  SchmidtDecomposition out;
  std::vector<std::size_t> cols;
  for (std::size_t k = eg.eigenvalues.size(); k-- > 0;)
    if (eg.eigenvalues[k] > 1e-12) cols.push_back(k);  // descending
  out.coefficients.reserve(cols.size());
  out.left = ComplexMatrix(dl, cols.size());
  out.right = ComplexMatrix(dr, cols.size());
  for (std::size_t kk = 0; kk < cols.size(); ++kk) {
    const std::size_t col = cols[kk];
    const double lam = eg.eigenvalues[col];
    out.coefficients.push_back(lam);
    for (std::size_t i = 0; i < dl; ++i) out.left(i, kk) = eg.eigenvectors(i, col);
    // y_k[r] = sum_l M[l,r] conj(x_k[l]) / sqrt(lambda)
    const double root = std::sqrt(lam);
    for (std::size_t r = 0; r < dr; ++r) {
      cplx s(0.0, 0.0);
      for (std::size_t l = 0; l < dl; ++l)
        s += m(l, r) * std::conj(eg.eigenvectors(l, col));
      out.right(r, kk) = s / root;
    }
  }
  return out;
}

DensityMatrix apply_local_unitary(const DensityMatrix& rho,
                                  const std::string& label,
                                  const ComplexMatrix& u) {
  const ComplexMatrix full = detail::embed_operator(u, rho.layout(), {label});
  return DensityMatrix::unchecked(rho.layout(), full * rho.mat() * full.adjoint());
}

DensityMatrix apply_channel(const DensityMatrix& rho, const std::string& label,
                            const std::vector<ComplexMatrix>& kraus) {
  ComplexMatrix acc(rho.dim(), rho.dim());
  for (const ComplexMatrix& k : kraus) {
    const ComplexMatrix full = detail::embed_operator(k, rho.layout(), {label});
    ComplexMatrix term = full * rho.mat() * full.adjoint();
    kernels::axpy(cplx(1.0, 0.0), term.data(), acc.data(), acc.size());
  }
  return DensityMatrix::unchecked(rho.layout(), std::move(acc));
}

// -- structure tests -----------------------------------------------------------

namespace {

// Simultaneous eigenbasis of a commuting Hermitian family, refining
// eigenvalue clusters operator by operator.
ComplexMatrix simultaneous_eigenbasis(const std::vector<ComplexMatrix>& family,
                                      std::size_t dim, double cluster_tol) {
  ComplexMatrix u = ComplexMatrix::identity(dim);
  std::vector<std::pair<std::size_t, std::size_t>> blocks{{0, dim}};
  for (const ComplexMatrix& a : family) {
    std::vector<std::pair<std::size_t, std::size_t>> next;
    const ComplexMatrix au = u.adjoint() * a * u;
    for (auto [lo, hi] : blocks) {
      const std::size_t w = hi - lo;
      if (w == 1) {
        next.emplace_back(lo, hi);
        continue;
      }
      ComplexMatrix sub(w, w);
      for (std::size_t i = 0; i < w; ++i)
        for (std::size_t j = 0; j < w; ++j) sub(i, j) = au(lo + i, lo + j);
      // Hermitize to wash out commutator noise before decomposing.
      ComplexMatrix subh = sub;
      for (std::size_t i = 0; i < w; ++i)
        for (std::size_t j = 0; j < w; ++j)
          subh(i, j) = 0.5 * (sub(i, j) + std::conj(sub(j, i)));
      HermitianEigen eg = eigh(subh);
      // u[:, lo..hi] <- u[:, lo..hi] * V
      ComplexMatrix cols(dim, w);
      for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < w; ++c) cols(r, c) = u(r, lo + c);
      ComplexMatrix rotated = cols * eg.eigenvectors;
      for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < w; ++c) u(r, lo + c) = rotated(r, c);
      // Split into eigenvalue clusters.
      std::size_t start = 0;
      for (std::size_t k = 1; k <= w; ++k) {
        if (k == w ||
            eg.eigenvalues[k] - eg.eigenvalues[k - 1] > cluster_tol) {
          next.emplace_back(lo + start, lo + k);
          start = k;
        }
      }
    }
    blocks = std::move(next);
    if (blocks.size() == dim) break;
  }
  return u;
}

}  // namespace

bool is_cq(const DensityMatrix& rho, const std::vector<std::string>& cut,
           double tol) {
  const SubsystemLayout& layout = rho.layout();
  const std::vector<std::string> rest = layout.complement(cut);

  // Move the cut in front so blocks are contiguous.
  std::vector<std::string> order = cut;
  for (const std::string& l : rest) order.push_back(l);
  const ComplexMatrix m = detail::permute_raw(rho.mat(), layout, order);
  const std::size_t dc = layout.dim_of(cut);
  const std::size_t dr = rho.dim() / dc;

  // Conditional operators A_M = tr_rest[(I (x) M) rho] for a Hermitian basis
  // M of the rest space; rho is CQ iff this family is commuting, and then a
  // simultaneous eigenbasis is the classical basis.
  std::vector<ComplexMatrix> family;
  auto block = [&](std::size_t i, std::size_t j, std::size_t bi,
                   std::size_t bj) {
    return m.data()[(i * dr + bi) * (dc * dr) + (j * dr + bj)];
  };
  for (std::size_t p = 0; p < dr; ++p)
    for (std::size_t q = p; q < dr; ++q) {
      ComplexMatrix are(dc, dc), aim(dc, dc);
      for (std::size_t i = 0; i < dc; ++i)
        for (std::size_t j = 0; j < dc; ++j) {
          // tr[M R_ij] for M = E_pq family; R_ij the (i,j) rest-space block
          const cplx rpq = block(i, j, q, p);
          const cplx rqp = block(i, j, p, q);
          are(i, j) = rpq + rqp;
          aim(i, j) = cplx(0.0, 1.0) * (rpq - rqp);
        }
      family.push_back(std::move(are));
      if (p != q) family.push_back(std::move(aim));
    }

  const double scale = std::max(1.0, rho.mat().frobenius_norm());
  for (std::size_t x = 0; x < family.size(); ++x)
    for (std::size_t y = x + 1; y < family.size(); ++y) {
      ComplexMatrix comm = family[x] * family[y] - family[y] * family[x];
      if (comm.frobenius_norm() > tol * scale) return false;
    }

  const ComplexMatrix u = simultaneous_eigenbasis(family, dc, 1e-9);
  // Pinch test in the found basis.
  const ComplexMatrix mu = detail::embed_operator(
      u, SubsystemLayout({{"c", dc}, {"r", dr}}), {"c"});
  const ComplexMatrix rot = mu.adjoint() * m * mu;
  double off = 0.0;
  for (std::size_t i = 0; i < dc; ++i)
    for (std::size_t j = 0; j < dc; ++j) {
      if (i == j) continue;
      for (std::size_t bi = 0; bi < dr; ++bi)
        for (std::size_t bj = 0; bj < dr; ++bj)
          off += std::norm(rot.data()[(i * dr + bi) * (dc * dr) + (j * dr + bj)]);
    }
  return std::sqrt(off) <= tol * scale;
}

bool is_cc(const DensityMatrix& rho, double tol) {
  if (rho.layout().part_count() != 2)
    fail(errc::layout_mismatch, "is_cc expects a bipartite layout");
  const std::string left = rho.layout().part(0).label;
  const std::string right = rho.layout().part(1).label;
  return is_cq(rho, {left}, tol) && is_cq(rho, {right}, tol);
}

}  // namespace qcorr
