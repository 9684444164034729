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

#include "qcorr/layout.hpp"

#include <algorithm>

#include "qcorr/errors.hpp"

namespace qcorr {

SubsystemLayout::SubsystemLayout(std::vector<Part> parts)
    : parts_(std::move(parts)) {
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (parts_[i].dim < 1)
      fail(errc::bad_parameter, "subsystem dimension must be >= 1");
    for (std::size_t j = i + 1; j < parts_.size(); ++j)
      if (parts_[i].label == parts_[j].label)
        fail(errc::bad_parameter, "duplicate subsystem label '" +
                                      parts_[i].label + "'");
  }
}

SubsystemLayout SubsystemLayout::bipartite(std::size_t da, std::size_t db) {
  return SubsystemLayout({{"a", da}, {"b", db}});
}

std::size_t SubsystemLayout::total_dim() const {
  std::size_t d = 1;
  for (const Part& p : parts_) d *= p.dim;
  return d;
}

bool SubsystemLayout::has(const std::string& label) const {
  return std::any_of(parts_.begin(), parts_.end(),
                     [&](const Part& p) { return p.label == label; });
}

std::size_t SubsystemLayout::index_of(const std::string& label) const {
  for (std::size_t i = 0; i < parts_.size(); ++i)
    if (parts_[i].label == label) return i;
  fail(errc::unknown_label, "unknown subsystem label '" + label + "'");
}

std::size_t SubsystemLayout::dim_of(const std::string& label) const {
  return parts_[index_of(label)].dim;
}

std::size_t SubsystemLayout::dim_of(
    const std::vector<std::string>& labels) const {
  std::size_t d = 1;
  for (const std::string& l : labels) d *= dim_of(l);
  return d;
}

std::vector<std::string> SubsystemLayout::labels() const {
  std::vector<std::string> out;
  out.reserve(parts_.size());
  for (const Part& p : parts_) out.push_back(p.label);
  return out;
}

std::vector<std::string> SubsystemLayout::complement(
    const std::vector<std::string>& labels) const {
  for (const std::string& l : labels) (void)index_of(l);  // validate
  std::vector<std::string> out;
  for (const Part& p : parts_)
    if (std::find(labels.begin(), labels.end(), p.label) == labels.end())
      out.push_back(p.label);
  return out;
}

std::vector<std::size_t> SubsystemLayout::strides() const {
  std::vector<std::size_t> s(parts_.size(), 1);
  for (std::size_t i = parts_.size(); i-- > 1;)
    s[i - 1] = s[i] * parts_[i].dim;
  return s;
}

bool SubsystemLayout::operator==(const SubsystemLayout& o) const {
  if (parts_.size() != o.parts_.size()) return false;
  for (std::size_t i = 0; i < parts_.size(); ++i)
    if (parts_[i].label != o.parts_[i].label ||
        parts_[i].dim != o.parts_[i].dim)
      return false;
  return true;
}

std::string SubsystemLayout::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (i) s += ", ";
    s += parts_[i].label + ":" + std::to_string(parts_[i].dim);
  }
  return s + ")";
}

}  // namespace qcorr
