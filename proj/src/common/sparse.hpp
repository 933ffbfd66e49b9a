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

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "common/types.hpp"

namespace scanrig {

// Compressed sparse rows. Used for skinning weights, the joint regressor and
// the scan-to-body connection matrix.
class SparseRows {
 public:
  struct Entry {
    int col;
    double value;
  };

  SparseRows() = default;
  explicit SparseRows(int cols) : cols_(cols) {}

  // Appends one row; entries need not be sorted. Zero values are dropped.
  void appendRow(std::span<const Entry> entries);

  int rows() const { return static_cast<int>(offsets_.size()) - 1; }
  int cols() const { return cols_; }
  std::span<const Entry> row(int r) const {
    return {entries_.data() + offsets_[r], entries_.data() + offsets_[r + 1]};
  }
  size_t nonZeros() const { return entries_.size(); }

  double rowSum(int r) const;
  // Largest |rowSum - 1| over all rows.
  double maxRowSumError() const;
  bool allNonNegative() const;
  size_t maxRowNonZeros() const;

  // this * points, with one point per column.
  Points apply(const Points& points) const;
  // this * dense, where dense is cols() x k.
  Eigen::MatrixXd multiply(const Eigen::MatrixXd& dense) const;
  // this * other (sparse product, rows merged by column).
  SparseRows multiply(const SparseRows& other) const;
  Eigen::MatrixXd toDense() const;

 private:
  int cols_ = 0;
  std::vector<size_t> offsets_{0};
  std::vector<Entry> entries_;
};

}  // namespace scanrig
