// Copyright 2026 The scanrig Authors
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

#include "common/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "common/error.hpp"

namespace scanrig {

void SparseRows::appendRow(std::span<const Entry> entries) {
  std::vector<Entry> sorted;
  sorted.reserve(entries.size());
  for (const auto& e : entries) {
    if (e.col < 0 || e.col >= cols_) {
      throwInvalid("sparse entry column " + std::to_string(e.col) + " out of range [0, " +
                   std::to_string(cols_) + ")");
    }
    if (e.value != 0.0) {
      sorted.push_back(e);
    }
  }
  std::sort(sorted.begin(), sorted.end(), [](const Entry& a, const Entry& b) { return a.col < b.col; });
  // Merge duplicate columns.
  for (const auto& e : sorted) {
    if (entries_.size() > offsets_.back() && entries_.back().col == e.col) {
      entries_.back().value += e.value;
    } else {
      entries_.push_back(e);
    }
  }
  offsets_.push_back(entries_.size());
}

double SparseRows::rowSum(int r) const {
  double s = 0.0;
  for (const auto& e : row(r)) {
    s += e.value;
  }
  return s;
}

double SparseRows::maxRowSumError() const {
  double worst = 0.0;
  for (int r = 0; r < rows(); ++r) {
    worst = std::max(worst, std::abs(rowSum(r) - 1.0));
  }
  return worst;
}

bool SparseRows::allNonNegative() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const Entry& e) { return e.value >= 0.0; });
}

size_t SparseRows::maxRowNonZeros() const {
  size_t m = 0;
  for (size_t r = 0; r + 1 < offsets_.size(); ++r) {
    m = std::max(m, offsets_[r + 1] - offsets_[r]);
  }
  return m;
}

Points SparseRows::apply(const Points& points) const {
  if (static_cast<int>(points.size()) != cols_) {
    throwInvalid("sparse apply: expected " + std::to_string(cols_) + " points, got " +
                 std::to_string(points.size()));
  }
  Points out(rows(), Vec3::Zero());
  for (int r = 0; r < rows(); ++r) {
    for (const auto& e : row(r)) {
      out[r] += e.value * points[e.col];
    }
  }
  return out;
}

Eigen::MatrixXd SparseRows::multiply(const Eigen::MatrixXd& dense) const {
  if (dense.rows() != cols_) {
    throwInvalid("sparse multiply: dimension mismatch");
  }
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(rows(), dense.cols());
  for (int r = 0; r < rows(); ++r) {
    for (const auto& e : row(r)) {
      out.row(r) += e.value * dense.row(e.col);
    }
  }
  return out;
}

SparseRows SparseRows::multiply(const SparseRows& other) const {
  if (other.rows() != cols_) {
    throwInvalid("sparse product: inner dimensions " + std::to_string(cols_) + " vs " +
                 std::to_string(other.rows()));
  }
  SparseRows out(other.cols());
  std::map<int, double> acc;
  std::vector<Entry> merged;
  for (int r = 0; r < rows(); ++r) {
    acc.clear();
    for (const auto& a : row(r)) {
      for (const auto& b : other.row(a.col)) {
        acc[b.col] += a.value * b.value;
      }
    }
    merged.clear();
    for (const auto& [c, v] : acc) {
      merged.push_back({c, v});
    }
    out.appendRow(merged);
  }
  return out;
}

Eigen::MatrixXd SparseRows::toDense() const {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(rows(), cols_);
  for (int r = 0; r < rows(); ++r) {
    for (const auto& e : row(r)) {
      out(r, e.col) += e.value;
    }
  }
  return out;
}

}  // namespace scanrig
