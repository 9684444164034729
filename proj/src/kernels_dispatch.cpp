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

#include "qcorr/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <cstring>
#include <mutex>
#include <stdexcept>

#include "kernels_table.hpp"

namespace qcorr::kernels {
namespace {

using detail::KernelTable;

std::atomic<const KernelTable*> g_table{nullptr};
std::atomic<Lane> g_lane{Lane::scalar};
std::once_flag g_init;

bool cpu_has_avx2() {
#if defined(QCORR_HAVE_AVX2_BUILD)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* table_for(Lane lane) {
  switch (lane) {
    case Lane::scalar:
      return &detail::scalar_table;
    case Lane::avx2:
#if defined(QCORR_HAVE_AVX2_BUILD)
      return &detail::avx2_table;
#else
      return nullptr;
#endif
  }
  return nullptr;
}

void init() {
  Lane lane = cpu_has_avx2() ? Lane::avx2 : Lane::scalar;
  if (const char* env = std::getenv("QCORR_KERNEL_LANE")) {
    if (std::strcmp(env, "scalar") == 0) lane = Lane::scalar;
    else if (std::strcmp(env, "avx2") == 0 && cpu_has_avx2()) lane = Lane::avx2;
  }
  g_table.store(table_for(lane), std::memory_order_release);
  g_lane.store(lane, std::memory_order_release);
}

inline const KernelTable& tbl() {
  std::call_once(g_init, init);
  return *g_table.load(std::memory_order_acquire);
}

}  // namespace

Lane active_lane() {
  std::call_once(g_init, init);
  return g_lane.load(std::memory_order_acquire);
}

bool lane_supported(Lane lane) {
  return lane == Lane::scalar || (lane == Lane::avx2 && cpu_has_avx2());
}

void set_lane(Lane lane) {
  std::call_once(g_init, init);
  if (!lane_supported(lane))
    throw std::invalid_argument("kernel lane not supported on this host: " +
                                std::string(lane_name(lane)));
  g_table.store(table_for(lane), std::memory_order_release);
  g_lane.store(lane, std::memory_order_release);
}

std::string_view lane_name(Lane lane) {
  switch (lane) {
    case Lane::scalar: return "scalar";
    case Lane::avx2: return "avx2";
  }
  return "unknown";
}

void matmul(const cplx* a, const cplx* b, cplx* c, std::size_t m,
            std::size_t k, std::size_t n) {
  std::fill(c, c + m * n, cplx(0.0, 0.0));
  tbl().matmul_acc(a, b, c, m, k, n);
}

void matmul_acc(const cplx* a, const cplx* b, cplx* c, std::size_t m,
                std::size_t k, std::size_t n) {
  tbl().matmul_acc(a, b, c, m, k, n);
}

void axpy(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  tbl().axpy(alpha, x, y, n);
}

void scaled_copy(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  tbl().scaled_copy(alpha, x, y, n);
}

void scale(cplx alpha, cplx* x, std::size_t n) { tbl().scale(alpha, x, n); }

double norm_sq(const cplx* x, std::size_t n) { return tbl().norm_sq(x, n); }

cplx dot_conj(const cplx* x, const cplx* y, std::size_t n) {
  return tbl().dot_conj(x, y, n);
}

void kron(const cplx* a, std::size_t ma, std::size_t na, const cplx* b,
          std::size_t mb, std::size_t nb, cplx* out) {
  const std::size_t ncols = na * nb;
  for (std::size_t ia = 0; ia < ma; ++ia)
    for (std::size_t ib = 0; ib < mb; ++ib) {
      cplx* orow = out + (ia * mb + ib) * ncols;
      const cplx* brow = b + ib * nb;
      for (std::size_t ja = 0; ja < na; ++ja)
        tbl().scaled_copy(a[ia * na + ja], brow, orow + ja * nb, nb);
    }
}

}  // namespace qcorr::kernels
