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

// Multi-start finite-difference descent and the closest-set searches built on
// it. Restarts are independent (own RNG stream, own scratch), so they run on
// worker threads without changing any result; the merge is ordered by restart
// index, which keeps reports bit-for-bit reproducible.

#include "qcorr/optimize.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <memory>
#include <mutex>
#include <thread>

#include "qcorr/errors.hpp"
#include "qcorr/rng.hpp"

namespace qcorr {
namespace detail {

std::vector<double> fd_gradient(const Objective& f, std::vector<double>& x,
                                double f0, double base_h) {
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    const double h = base_h * std::max(1.0, std::abs(xi));
    x[i] = xi + h;
    const double fp = f(x);
    x[i] = xi - h;
    const double fm = f(x);
    x[i] = xi;
    if (std::isnan(fp) || std::isnan(fm))
      fail(errc::non_finite, "objective returned NaN");
    if (std::isfinite(fp) && std::isfinite(fm)) {
      g[i] = (fp - fm) / (2.0 * h);
    } else if (std::isfinite(fm) && std::isfinite(f0)) {
      g[i] = (f0 - fm) / h;  // wall on the + side
    } else if (std::isfinite(fp) && std::isfinite(f0)) {
      g[i] = (fp - f0) / h;  // wall on the - side
    } else {
      g[i] = 0.0;
    }
  }
  return g;
}

std::vector<double> simplex_weights(const double* params, std::size_t k) {
  std::vector<double> w(k);
  double s = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    w[i] = params[i] * params[i];
    s += w[i];
  }
  if (s < 1e-300) {
    std::fill(w.begin(), w.end(), 1.0 / static_cast<double>(k));
    return w;
  }
  for (double& v : w) v /= s;
  return w;
}

ComplexMatrix isometry_from_params(const double* params, std::size_t rows,
                                   std::size_t cols) {
  ComplexMatrix z(rows, cols);
  for (std::size_t i = 0; i < rows * cols; ++i)
    z.data()[i] = cplx(params[2 * i], params[2 * i + 1]);
  // V = Z (Z^dag Z)^(-1/2)
  const ComplexMatrix g = z.adjoint() * z;
  HermitianEigen eg = eigh(g);
  const double lmax = std::max(1e-300, eg.eigenvalues.back());
  ComplexMatrix scaled(cols, cols);
  for (std::size_t i = 0; i < cols; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      const double lam = std::max(eg.eigenvalues[j], 1e-14 * lmax);
      scaled(i, j) = eg.eigenvectors(i, j) / std::sqrt(lam);
    }
  return z * (scaled * eg.eigenvectors.adjoint());
}

std::vector<double> isometry_to_params(const ComplexMatrix& v) {
  std::vector<double> p(2 * v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    p[2 * i] = v.data()[i].real();
    p[2 * i + 1] = v.data()[i].imag();
  }
  return p;
}

std::size_t cq_param_count(std::size_t dc, std::size_t dr) {
  return dc * dc + dc * 2 * dr * dr;
}

CqDecoded decode_cq(const double* params, std::size_t dc, std::size_t dr) {
  CqDecoded out;
  out.basis = matrix_exp_ih(hermitian_from_params(params, dc));
  const double* p = params + dc * dc;
  out.blocks.reserve(dc);
  double total = 0.0;
  for (std::size_t i = 0; i < dc; ++i) {
    ComplexMatrix a(dr, dr);
    for (std::size_t e = 0; e < dr * dr; ++e)
      a.data()[e] = cplx(p[0], p[1]), p += 2;
    ComplexMatrix b = a * a.adjoint();
    total += b.trace().real();
    out.blocks.push_back(std::move(b));
  }
  if (total < 1e-300) {
    for (ComplexMatrix& b : out.blocks) {
      b = ComplexMatrix::identity(dr);
      b *= cplx(1.0 / static_cast<double>(dc * dr), 0.0);
    }
    total = 1.0;
  } else {
    for (ComplexMatrix& b : out.blocks) b *= cplx(1.0 / total, 0.0);
  }
  out.weights.reserve(dc);
  for (const ComplexMatrix& b : out.blocks)
    out.weights.push_back(b.trace().real());
  return out;
}

std::vector<double> encode_cq(const ComplexMatrix& basis,
                              const std::vector<ComplexMatrix>& weighted_blocks) {
  const std::size_t dc = basis.rows();
  const std::size_t dr = weighted_blocks.front().rows();
  std::vector<double> params;
  params.reserve(cq_param_count(dc, dr));
  const std::vector<double> h = hermitian_to_params(unitary_log(basis));
  params.insert(params.end(), h.begin(), h.end());
  for (const ComplexMatrix& b : weighted_blocks) {
    const ComplexMatrix a = matrix_sqrt(b);
    for (std::size_t e = 0; e < dr * dr; ++e) {
      params.push_back(a.data()[e].real());
      params.push_back(a.data()[e].imag());
    }
  }
  return params;
}

ComplexMatrix assemble_cq(const CqDecoded& cq) {
  const std::size_t dc = cq.basis.rows();
  const std::size_t dr = cq.blocks.front().rows();
  const std::size_t d = dc * dr;
  ComplexMatrix block_diag(d, d);
  for (std::size_t i = 0; i < dc; ++i)
    for (std::size_t bi = 0; bi < dr; ++bi)
      for (std::size_t bj = 0; bj < dr; ++bj)
        block_diag(i * dr + bi, i * dr + bj) = cq.blocks[i](bi, bj);
  ComplexMatrix g(d, d);
  kernels::kron(cq.basis.data(), dc, dc,
                ComplexMatrix::identity(dr).data(), dr, dr, g.data());
  return g * block_diag * g.adjoint();
}

namespace {

// Principal square root of a small PSD block; closed forms up to 2x2.
ComplexMatrix sqrt_psd_small(const ComplexMatrix& b) {
  const std::size_t n = b.rows();
  if (n == 1) {
    ComplexMatrix r(1, 1);
    r(0, 0) = std::sqrt(std::max(0.0, b(0, 0).real()));
    return r;
  }
  if (n == 2) {
    const double a = std::max(0.0, b(0, 0).real());
    const double d = std::max(0.0, b(1, 1).real());
    const cplx c = b(0, 1);
    const double det = std::max(0.0, a * d - std::norm(c));
    const double s = std::sqrt(det);
    const double t = std::sqrt(std::max(0.0, a + d + 2.0 * s));
    ComplexMatrix r(2, 2);
    if (t < 1e-150) return r;
    r(0, 0) = (a + s) / t;
    r(1, 1) = (d + s) / t;
    r(0, 1) = c / t;
    r(1, 0) = std::conj(c) / t;
    return r;
  }
  return matrix_sqrt(b);
}

}  // namespace
}  // namespace detail

namespace {

struct StartResult {
  double value = std::numeric_limits<double>::infinity();
  std::vector<double> x;
  bool converged = false;
  double grad_norm = 0.0;
  double step_norm = 0.0;
  std::int64_t evals = 0;
  std::vector<std::pair<int, double>> trace;
};

StartResult run_descent(const Objective& raw, std::vector<double> x,
                        const OptimizerConfig& cfg, bool track) {
  StartResult res;
  std::int64_t evals = 0;
  const auto f = [&](const std::vector<double>& p) {
    ++evals;
    const double v = raw(p);
    if (std::isnan(v)) fail(errc::non_finite, "objective returned NaN");
    return v;
  };

  double fcur = f(x);
  double alpha = 0.25;
  int small_improvements = 0;
  if (track) res.trace.emplace_back(0, fcur);

  int iter = 0;
  for (; iter < cfg.max_iters; ++iter) {
    const std::vector<double> g = detail::fd_gradient(f, x, fcur);
    evals += static_cast<std::int64_t>(2 * x.size());
    double gn2 = 0.0;
    for (double v : g) gn2 += v * v;
    const double gn = std::sqrt(gn2);
    res.grad_norm = gn;
    if (gn < 1e-13) {
      res.converged = true;
      break;
    }

    alpha = std::min(alpha * 2.0, 1e3 / gn);
    bool accepted = false;
    std::vector<double> xt(x.size());
    double ft = fcur;
    while (alpha * gn > cfg.step_tol) {
      for (std::size_t i = 0; i < x.size(); ++i) xt[i] = x[i] - alpha * g[i];
      ft = f(xt);
      if (std::isfinite(ft) && ft <= fcur - 1e-4 * alpha * gn2) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      res.converged = true;  // no productive step above step_tol
      break;
    }
    res.step_norm = alpha * gn;
    const double improvement = fcur - ft;
    x.swap(xt);
    fcur = ft;
    if (track) res.trace.emplace_back(iter + 1, fcur);
    if (improvement < cfg.value_tol) {
      if (++small_improvements >= 3) {
        res.converged = true;
        break;
      }
    } else {
      small_improvements = 0;
    }
  }

  res.value = fcur;
  res.x = std::move(x);
  res.evals = evals;
  return res;
}

}  // namespace

MeasureReport minimize(const ObjectiveFactory& make_objective,
                       std::size_t param_count, const OptimizerConfig& config,
                       double init_scale) {
  if (config.restarts < 1) fail(errc::bad_parameter, "restarts must be >= 1");
  for (const auto& w : config.warm_starts)
    if (w.size() != param_count)
      fail(errc::bad_parameter, "warm start has wrong parameter count");

  const int random_starts = config.restarts;
  const int total = random_starts + static_cast<int>(config.warm_starts.size());
  std::vector<StartResult> results(total);

  auto run_one = [&](int idx) {
    const Objective obj = make_objective();
    std::vector<double> x0;
    if (idx < random_starts) {
      Rng rng(Rng::derive(config.seed, static_cast<std::uint64_t>(idx)));
      x0.resize(param_count);
      for (double& v : x0) v = init_scale * rng.next_normal();
    } else {
      x0 = config.warm_starts[static_cast<std::size_t>(idx - random_starts)];
    }
    results[idx] = run_descent(obj, std::move(x0), config, config.track_trace);
  };

  int jobs = config.jobs > 0
                 ? config.jobs
                 : static_cast<int>(std::thread::hardware_concurrency());
  jobs = std::max(1, std::min(jobs, total));
  if (jobs == 1 || total == 1) {
    for (int i = 0; i < total; ++i) run_one(i);
  } else {
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&]() {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= total) break;
        try {
          run_one(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs - 1; ++t) pool.emplace_back(worker);
    worker();
    for (std::thread& t : pool) t.join();
    if (error) std::rethrow_exception(error);
  }

  int best = 0;
  for (int i = 1; i < total; ++i)
    if (results[i].value < results[best].value) best = i;

  MeasureReport report;
  report.value = results[best].value;
  report.argmin = std::move(results[best].x);
  report.restarts_used = total;
  report.best_restart = best;
  report.converged = results[best].converged;
  report.final_grad_norm = results[best].grad_norm;
  report.final_step_norm = results[best].step_norm;
  report.best_trace = std::move(results[best].trace);
  for (const StartResult& r : results) report.objective_evals += r.evals;
  return report;
}

MeasureReport minimize_over_unitaries(
    const std::function<double(const ComplexMatrix&)>& objective,
    std::size_t dim, const OptimizerConfig& config) {
  const std::size_t params = detail::hermitian_param_count(dim);
  ObjectiveFactory factory = [objective, dim]() -> Objective {
    return [objective, dim](const std::vector<double>& x) {
      return objective(
          matrix_exp_ih(detail::hermitian_from_params(x.data(), dim)));
    };
  };
  return minimize(factory, params, config);
}

MeasureReport minimize_over_simplex(
    const std::function<double(const std::vector<double>&)>& objective,
    std::size_t k, const OptimizerConfig& config) {
  if (k < 1) fail(errc::bad_parameter, "simplex dimension must be >= 1");
  ObjectiveFactory factory = [objective, k]() -> Objective {
    return [objective, k](const std::vector<double>& x) {
      return objective(detail::simplex_weights(x.data(), k));
    };
  };
  return minimize(factory, k, config);
}

// -- closest-set searches ------------------------------------------------------

namespace {

using detail::CqDecoded;

// Shared immutable context for one closest_cq call.
struct CqContext {
  ComplexMatrix rho_p;      // rho permuted to (cut..., rest...)
  std::size_t dc = 0, dr = 0;
  Distance distance = Distance::bures_sq;
  double tr_rho_log_rho = 0.0;  // relent only
};

// rho'' = (U (x) I)^dag rho_p (U (x) I)
ComplexMatrix rotate_by_cut_unitary(const ComplexMatrix& rho_p,
                                    const ComplexMatrix& u, std::size_t dr) {
  const std::size_t d = rho_p.rows();
  const std::size_t dc = u.rows();
  ComplexMatrix g(d, d);
  kernels::kron(u.data(), dc, dc, ComplexMatrix::identity(dr).data(), dr, dr,
                g.data());
  return g.adjoint() * rho_p * g;
}

double cq_objective_eval(const CqContext& ctx, const std::vector<double>& x) {
  const CqDecoded cq = detail::decode_cq(x.data(), ctx.dc, ctx.dr);
  const std::size_t d = ctx.dc * ctx.dr;

  if (ctx.distance == Distance::bures_sq) {
    const ComplexMatrix rot = rotate_by_cut_unitary(ctx.rho_p, cq.basis, ctx.dr);
    // M = blockdiag(sqrt B_i) rho'' blockdiag(sqrt B_j)
    std::vector<ComplexMatrix> roots;
    roots.reserve(ctx.dc);
    for (const ComplexMatrix& b : cq.blocks)
      roots.push_back(detail::sqrt_psd_small(b));
    ComplexMatrix m(d, d);
    ComplexMatrix tmp(ctx.dr, ctx.dr), blk(ctx.dr, ctx.dr);
    for (std::size_t i = 0; i < ctx.dc; ++i)
      for (std::size_t j = 0; j < ctx.dc; ++j) {
        for (std::size_t bi = 0; bi < ctx.dr; ++bi)
          for (std::size_t bj = 0; bj < ctx.dr; ++bj)
            blk(bi, bj) = rot(i * ctx.dr + bi, j * ctx.dr + bj);
        kernels::matmul(roots[i].data(), blk.data(), tmp.data(), ctx.dr,
                        ctx.dr, ctx.dr);
        kernels::matmul(tmp.data(), roots[j].data(), blk.data(), ctx.dr,
                        ctx.dr, ctx.dr);
        for (std::size_t bi = 0; bi < ctx.dr; ++bi)
          for (std::size_t bj = 0; bj < ctx.dr; ++bj)
            m(i * ctx.dr + bi, j * ctx.dr + bj) = blk(bi, bj);
      }
    const std::vector<double> ev = eigh_values(m);
    double fid = 0.0;
    for (double v : ev) fid += std::sqrt(std::max(0.0, v));
    fid = std::clamp(fid, 0.0, 1.0);
    return 2.0 - 2.0 * fid;
  }

  // Relative entropy: C - sum_i tr(rho''_ii log2 B_i); only diagonal blocks
  // of the rotated state are needed.
  const std::size_t d_full = d;
  ComplexMatrix g(d_full, d_full);
  kernels::kron(cq.basis.data(), ctx.dc, ctx.dc,
                ComplexMatrix::identity(ctx.dr).data(), ctx.dr, ctx.dr,
                g.data());
  ComplexMatrix w(d_full, d_full);
  kernels::matmul(ctx.rho_p.data(), g.data(), w.data(), d_full, d_full, d_full);

  double tr_rho_log_sigma = 0.0;
  ComplexMatrix diag_block(ctx.dr, ctx.dr);
  for (std::size_t i = 0; i < ctx.dc; ++i) {
    for (std::size_t bi = 0; bi < ctx.dr; ++bi)
      for (std::size_t bj = 0; bj < ctx.dr; ++bj) {
        cplx s(0.0, 0.0);
        const std::size_t ci = i * ctx.dr + bi, cj = i * ctx.dr + bj;
        for (std::size_t r = 0; r < d_full; ++r)
          s += std::conj(g(r, ci)) * w(r, cj);
        diag_block(bi, bj) = s;
      }
    HermitianEigen eg = eigh(cq.blocks[i]);
    double kernel_weight = 0.0;
    for (std::size_t k = 0; k < ctx.dr; ++k) {
      double p = 0.0;
      for (std::size_t bi = 0; bi < ctx.dr; ++bi) {
        cplx s(0.0, 0.0);
        for (std::size_t bj = 0; bj < ctx.dr; ++bj)
          s += diag_block(bi, bj) * eg.eigenvectors(bj, k);
        p += (std::conj(eg.eigenvectors(bi, k)) * s).real();
      }
      if (eg.eigenvalues[k] > kSupportCutoff)
        tr_rho_log_sigma += p * std::log2(eg.eigenvalues[k]);
      else
        kernel_weight += std::max(0.0, p);
    }
    if (kernel_weight > 1e-9)
      return std::numeric_limits<double>::infinity();
  }
  return std::max(0.0, ctx.tr_rho_log_rho - tr_rho_log_sigma);
}

}  // namespace

MeasureReport closest_cq(const DensityMatrix& rho,
                         const std::vector<std::string>& cut,
                         Distance distance, const OptimizerConfig& config) {
  const SubsystemLayout& layout = rho.layout();
  std::vector<std::string> order = cut;
  for (const std::string& l : layout.complement(cut)) order.push_back(l);

  auto ctx = std::make_shared<CqContext>();
  ctx->rho_p = detail::permute_raw(rho.mat(), layout, order);
  ctx->dc = layout.dim_of(cut);
  ctx->dr = rho.dim() / ctx->dc;
  ctx->distance = distance;
  if (distance == Distance::relent)
    ctx->tr_rho_log_rho = -detail::entropy_raw(rho.mat());

  const std::size_t params = detail::cq_param_count(ctx->dc, ctx->dr);
  ObjectiveFactory factory = [ctx]() -> Objective {
    return [ctx](const std::vector<double>& x) {
      return cq_objective_eval(*ctx, x);
    };
  };
  MeasureReport report = minimize(factory, params, config);

  // Certificate: the closest CQ state, back in the original label order.
  const CqDecoded cq = detail::decode_cq(report.argmin.data(), ctx->dc, ctx->dr);
  ComplexMatrix sigma_p = detail::assemble_cq(cq);
  std::vector<Part> parts;
  for (const std::string& l : order)
    parts.push_back(layout.part(layout.index_of(l)));
  report.certificate =
      detail::permute_raw(sigma_p, SubsystemLayout(parts), layout.labels());
  report.certificate_layout = layout;
  return report;
}

namespace {

struct CcContext {
  ComplexMatrix rho_p;  // (left..., right...) order
  std::size_t cl = 0, cr = 0;
  Distance distance = Distance::bures_sq;
  double tr_rho_log_rho = 0.0;
};

double cc_objective_eval(const CcContext& ctx, const std::vector<double>& x) {
  const std::size_t d = ctx.cl * ctx.cr;
  const double* p = x.data();
  const ComplexMatrix ul = matrix_exp_ih(detail::hermitian_from_params(p, ctx.cl));
  p += ctx.cl * ctx.cl;
  const ComplexMatrix ur = matrix_exp_ih(detail::hermitian_from_params(p, ctx.cr));
  p += ctx.cr * ctx.cr;
  const std::vector<double> w = detail::simplex_weights(p, d);

  ComplexMatrix g(d, d);
  kernels::kron(ul.data(), ctx.cl, ctx.cl, ur.data(), ctx.cr, ctx.cr, g.data());
  const ComplexMatrix rot = g.adjoint() * ctx.rho_p * g;

  if (ctx.distance == Distance::bures_sq) {
    ComplexMatrix m(d, d);
    std::vector<double> roots(d);
    for (std::size_t i = 0; i < d; ++i) roots[i] = std::sqrt(std::max(0.0, w[i]));
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        m(i, j) = roots[i] * roots[j] * rot(i, j);
    const std::vector<double> ev = eigh_values(m);
    double fid = 0.0;
    for (double v : ev) fid += std::sqrt(std::max(0.0, v));
    return 2.0 - 2.0 * std::clamp(fid, 0.0, 1.0);
  }

  double tr_rho_log_sigma = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    const double pop = rot(i, i).real();
    if (w[i] > kSupportCutoff)
      tr_rho_log_sigma += pop * std::log2(w[i]);
    else if (pop > 1e-9)
      return std::numeric_limits<double>::infinity();
  }
  return std::max(0.0, ctx.tr_rho_log_rho - tr_rho_log_sigma);
}

}  // namespace

MeasureReport closest_cc(const DensityMatrix& rho,
                         const std::vector<std::string>& left_cut,
                         Distance distance, const OptimizerConfig& config) {
  const SubsystemLayout& layout = rho.layout();
  const std::vector<std::string> right_cut = layout.complement(left_cut);
  if (right_cut.empty())
    fail(errc::layout_mismatch, "closest_cc: cut must leave a right side");
  std::vector<std::string> order = left_cut;
  for (const std::string& l : right_cut) order.push_back(l);

  auto ctx = std::make_shared<CcContext>();
  ctx->rho_p = detail::permute_raw(rho.mat(), layout, order);
  ctx->cl = layout.dim_of(left_cut);
  ctx->cr = rho.dim() / ctx->cl;
  ctx->distance = distance;
  if (distance == Distance::relent)
    ctx->tr_rho_log_rho = -detail::entropy_raw(rho.mat());

  const std::size_t params =
      ctx->cl * ctx->cl + ctx->cr * ctx->cr + ctx->cl * ctx->cr;
  ObjectiveFactory factory = [ctx]() -> Objective {
    return [ctx](const std::vector<double>& x) {
      return cc_objective_eval(*ctx, x);
    };
  };
  MeasureReport report = minimize(factory, params, config);

  // Assemble the certificate.
  const double* p = report.argmin.data();
  const ComplexMatrix ul =
      matrix_exp_ih(detail::hermitian_from_params(p, ctx->cl));
  const ComplexMatrix ur = matrix_exp_ih(
      detail::hermitian_from_params(p + ctx->cl * ctx->cl, ctx->cr));
  const std::vector<double> w = detail::simplex_weights(
      p + ctx->cl * ctx->cl + ctx->cr * ctx->cr, ctx->cl * ctx->cr);
  const std::size_t d = ctx->cl * ctx->cr;
  ComplexMatrix g(d, d);
  kernels::kron(ul.data(), ctx->cl, ctx->cl, ur.data(), ctx->cr, ctx->cr,
                g.data());
  ComplexMatrix diag(d, d);
  for (std::size_t i = 0; i < d; ++i) diag(i, i) = w[i];
  ComplexMatrix sigma_p = g * diag * g.adjoint();
  std::vector<Part> parts;
  for (const std::string& l : order)
    parts.push_back(layout.part(layout.index_of(l)));
  report.certificate =
      detail::permute_raw(sigma_p, SubsystemLayout(parts), layout.labels());
  report.certificate_layout = layout;
  return report;
}

namespace {

struct SepContext {
  ComplexMatrix rho;
  ComplexMatrix sqrt_rho;  // bures only
  std::size_t da = 0, db = 0, terms = 0;
  Distance distance = Distance::bures_sq;
  double tr_rho_log_rho = 0.0;
};

// sigma = sum_k (A_k A_k^dag) (x) (B_k B_k^dag) / total
ComplexMatrix assemble_separable_from_params(const SepContext& ctx,
                                             const double* p) {
  const std::size_t d = ctx.da * ctx.db;
  ComplexMatrix sigma(d, d);
  ComplexMatrix la(ctx.da, ctx.da), rb(ctx.db, ctx.db), term(d, d);
  double total = 0.0;
  std::vector<ComplexMatrix> lefts, rights;
  lefts.reserve(ctx.terms);
  rights.reserve(ctx.terms);
  for (std::size_t k = 0; k < ctx.terms; ++k) {
    ComplexMatrix a(ctx.da, ctx.da);
    for (std::size_t e = 0; e < ctx.da * ctx.da; ++e)
      a.data()[e] = cplx(p[0], p[1]), p += 2;
    ComplexMatrix b(ctx.db, ctx.db);
    for (std::size_t e = 0; e < ctx.db * ctx.db; ++e)
      b.data()[e] = cplx(p[0], p[1]), p += 2;
    ComplexMatrix l = a * a.adjoint();
    ComplexMatrix r = b * b.adjoint();
    total += l.trace().real() * r.trace().real();
    lefts.push_back(std::move(l));
    rights.push_back(std::move(r));
  }
  if (total < 1e-300) {
    for (std::size_t i = 0; i < d; ++i) sigma(i, i) = 1.0 / d;
    return sigma;
  }
  for (std::size_t k = 0; k < ctx.terms; ++k) {
    kernels::kron(lefts[k].data(), ctx.da, ctx.da, rights[k].data(), ctx.db,
                  ctx.db, term.data());
    kernels::axpy(cplx(1.0 / total, 0.0), term.data(), sigma.data(),
                  sigma.size());
  }
  return sigma;
}

double separable_objective_eval(const SepContext& ctx,
                                const std::vector<double>& x) {
  const ComplexMatrix sigma = assemble_separable_from_params(ctx, x.data());
  if (ctx.distance == Distance::bures_sq) {
    const double fid = detail::fidelity_with_sqrt(ctx.sqrt_rho, sigma);
    return 2.0 - 2.0 * fid;
  }
  return detail::relent_with_tr_rho_log_rho(ctx.tr_rho_log_rho, ctx.rho, sigma);
}

}  // namespace

MeasureReport closest_separable(const DensityMatrix& rho, std::size_t K,
                                Distance distance,
                                const OptimizerConfig& config) {
  if (rho.layout().part_count() != 2)
    fail(errc::layout_mismatch, "closest_separable expects a bipartite layout");
  auto ctx = std::make_shared<SepContext>();
  ctx->rho = rho.mat();
  ctx->da = rho.layout().part(0).dim;
  ctx->db = rho.layout().part(1).dim;
  if (K == 0) K = (ctx->da * ctx->db) * (ctx->da * ctx->db);
  ctx->terms = K;
  ctx->distance = distance;
  if (distance == Distance::bures_sq)
    ctx->sqrt_rho = matrix_sqrt(rho.mat());
  else
    ctx->tr_rho_log_rho = -detail::entropy_raw(rho.mat());

  const std::size_t params =
      K * 2 * (ctx->da * ctx->da + ctx->db * ctx->db);
  ObjectiveFactory factory = [ctx]() -> Objective {
    return [ctx](const std::vector<double>& x) {
      return separable_objective_eval(*ctx, x);
    };
  };
  MeasureReport report = minimize(factory, params, config);
  report.certificate = assemble_separable_from_params(*ctx, report.argmin.data());
  report.certificate_layout = rho.layout();
  return report;
}

}  // namespace qcorr
