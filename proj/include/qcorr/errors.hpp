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

#include <stdexcept>
#include <string>

namespace qcorr {

enum class errc {
  not_square,
  not_hermitian,
  not_psd,
  not_normalized,
  unknown_label,
  non_orthonormal_basis,
  bad_distribution,
  bad_rank,
  bad_parameter,
  bad_length,
  bad_isometry,
  ancilla_too_small,
  layout_mismatch,
  dimension_mismatch,
  basis_mismatch,
  incomplete_basis,
  wrong_arity,
  too_many_hypotheses,
  non_finite,
  parse_error,
  unknown_measure,
  unknown_suite,
};

/// Library error carrying a machine-checkable kind next to the message.
class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace qcorr
