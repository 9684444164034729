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

#include "qcorr/kernels.hpp"

namespace qcorr::kernels::detail {

struct KernelTable {
  void (*matmul_acc)(const cplx*, const cplx*, cplx*, std::size_t, std::size_t,
                     std::size_t);
  void (*axpy)(cplx, const cplx*, cplx*, std::size_t);
  void (*scaled_copy)(cplx, const cplx*, cplx*, std::size_t);
  void (*scale)(cplx, cplx*, std::size_t);
  double (*norm_sq)(const cplx*, std::size_t);
  cplx (*dot_conj)(const cplx*, const cplx*, std::size_t);
};

extern const KernelTable scalar_table;
#if defined(QCORR_HAVE_AVX2_BUILD)
extern const KernelTable avx2_table;
#endif

}  // namespace qcorr::kernels::detail
