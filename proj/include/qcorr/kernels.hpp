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

#include <complex>
#include <cstddef>
#include <string_view>

namespace qcorr {

using cplx = std::complex<double>;

/// Dense complex kernels behind everything arithmetic in the library.
///
/// Two lanes are built: a scalar reference lane and (on x86-64) an AVX2+FMA
/// lane. The active lane is picked once at startup from CPUID and can be
/// forced through the QCORR_KERNEL_LANE environment variable ("scalar",
/// "avx2") or set_lane(). Lanes are equivalence-tested against each other;
/// all matrices are dense row-major.
namespace kernels {

enum class Lane { scalar, avx2 };

Lane active_lane();
bool lane_supported(Lane lane);
void set_lane(Lane lane);  // throws std::invalid_argument if unsupported
std::string_view lane_name(Lane lane);

// c (m x n) = a (m x k) * b (k x n); c must not alias a or b.
void matmul(const cplx* a, const cplx* b, cplx* c, std::size_t m,
            std::size_t k, std::size_t n);
// c += a * b
void matmul_acc(const cplx* a, const cplx* b, cplx* c, std::size_t m,
                std::size_t k, std::size_t n);
// y += alpha * x
void axpy(cplx alpha, const cplx* x, cplx* y, std::size_t n);
// y = alpha * x
void scaled_copy(cplx alpha, const cplx* x, cplx* y, std::size_t n);
void scale(cplx alpha, cplx* x, std::size_t n);
// sum_i |x_i|^2
double norm_sq(const cplx* x, std::size_t n);
// sum_i conj(x_i) * y_i
cplx dot_conj(const cplx* x, const cplx* y, std::size_t n);
// out (ma*mb x na*nb) = a (ma x na) kron b (mb x nb), left factor on the
// slower index.
void kron(const cplx* a, std::size_t ma, std::size_t na, const cplx* b,
          std::size_t mb, std::size_t nb, cplx* out);

}  // namespace kernels
}  // namespace qcorr
