/*
 * Copyright 2026 The rfidqv Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace rfidqv {

struct MatrixEntry {
  std::size_t column = 0;
  double value = 0.0;

  friend bool operator==(const MatrixEntry&, const MatrixEntry&) = default;
};

struct Triplet {
  std::size_t row = 0;
  std::size_t column = 0;
  double value = 0.0;
};

/// Compressed sparse rows; entries within a row are sorted by column.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  /// Empty rows x cols matrix.
  SparseMatrix(std::size_t rows, std::size_t cols) : cols_(cols), row_start_(rows + 1, 0) {}

  /// Duplicate (row, column) pairs are summed.
  static SparseMatrix from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> triplets);

  std::size_t rows() const { return row_start_.empty() ? 0 : row_start_.size() - 1; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const { return entries_.size(); }

  std::span<const MatrixEntry> row(std::size_t r) const {
    return {entries_.data() + row_start_[r], entries_.data() + row_start_[r + 1]};
  }
  /// Zero when the entry is not stored.
  double at(std::size_t r, std::size_t c) const;
  bool contains(std::size_t r, std::size_t c) const;

  SparseMatrix transpose() const;

  friend bool operator==(const SparseMatrix&, const SparseMatrix&) = default;

 private:
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_start_{0};
  std::vector<MatrixEntry> entries_;
};

}  // namespace rfidqv
