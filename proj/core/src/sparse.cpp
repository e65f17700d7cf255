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

#include "rfidqv/sparse.hpp"

#include <algorithm>

#include "rfidqv/errors.hpp"

namespace rfidqv {

SparseMatrix SparseMatrix::from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> triplets) {
  std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.column < b.column;
  });
  SparseMatrix m(rows, cols);
  m.entries_.reserve(triplets.size());
  std::vector<std::size_t> counts(rows, 0);
  for (const auto& t : triplets) {
    if (t.row >= rows || t.column >= cols) {
      throw InvalidArgument("matrix entry (" + std::to_string(t.row) + ", " + std::to_string(t.column) +
                            ") outside " + std::to_string(rows) + "x" + std::to_string(cols));
    }
    if (counts[t.row] > 0 && m.entries_.back().column == t.column) {
      m.entries_.back().value += t.value;
      continue;
    }
    m.entries_.push_back({t.column, t.value});
    ++counts[t.row];
  }
  for (std::size_t r = 0; r < rows; ++r) m.row_start_[r + 1] = m.row_start_[r] + counts[r];
  return m;
}

double SparseMatrix::at(std::size_t r, std::size_t c) const {
  const auto entries = row(r);
  const auto it = std::lower_bound(entries.begin(), entries.end(), c,
                                   [](const MatrixEntry& e, std::size_t col) { return e.column < col; });
  return it != entries.end() && it->column == c ? it->value : 0.0;
}

bool SparseMatrix::contains(std::size_t r, std::size_t c) const {
  const auto entries = row(r);
  const auto it = std::lower_bound(entries.begin(), entries.end(), c,
                                   [](const MatrixEntry& e, std::size_t col) { return e.column < col; });
  return it != entries.end() && it->column == c;
}

SparseMatrix SparseMatrix::transpose() const {
  SparseMatrix t(cols_, rows());
  std::vector<std::size_t> counts(cols_, 0);
  for (const auto& e : entries_) ++counts[e.column];
  for (std::size_t c = 0; c < cols_; ++c) t.row_start_[c + 1] = t.row_start_[c] + counts[c];
  t.entries_.resize(entries_.size());
  std::vector<std::size_t> fill(t.row_start_.begin(), t.row_start_.end() - 1);
  for (std::size_t r = 0; r < rows(); ++r) {
    for (const auto& e : row(r)) t.entries_[fill[e.column]++] = {r, e.value};
  }
  return t;
}

}  // namespace rfidqv
