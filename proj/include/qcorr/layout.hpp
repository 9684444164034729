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

#include <cstddef>
#include <string>
#include <vector>

namespace qcorr {

struct Part {
  std::string label;
  std::size_t dim;
};

/// Ordered, labeled tensor factors of a state space. The order is fixed at
/// creation and defines the row-major index arithmetic everywhere; partial
/// traces never reorder the kept labels.
class SubsystemLayout {
 public:
  SubsystemLayout() = default;
  explicit SubsystemLayout(std::vector<Part> parts);

  /// Two-party layout with labels "a" and "b".
  static SubsystemLayout bipartite(std::size_t da, std::size_t db);

  std::size_t part_count() const { return parts_.size(); }
  const Part& part(std::size_t i) const { return parts_[i]; }
  const std::vector<Part>& parts() const { return parts_; }
  std::size_t total_dim() const;

  bool has(const std::string& label) const;
  std::size_t index_of(const std::string& label) const;  // UnknownLabel
  std::size_t dim_of(const std::string& label) const;
  std::size_t dim_of(const std::vector<std::string>& labels) const;
  std::vector<std::string> labels() const;
  /// Labels not in the given set, in layout order.
  std::vector<std::string> complement(
      const std::vector<std::string>& labels) const;

  /// Row-major strides per part.
  std::vector<std::size_t> strides() const;

  bool operator==(const SubsystemLayout& o) const;
  bool operator!=(const SubsystemLayout& o) const { return !(*this == o); }

  std::string to_string() const;

 private:
  std::vector<Part> parts_;
};

}  // namespace qcorr
