// Copyright 2026 The Hybrid DST Authors.
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

#ifndef HDST_AUTODIFF_SPARSE_H_
#define HDST_AUTODIFF_SPARSE_H_

#include <cstddef>
#include <vector>

namespace hdst {

struct SparseEntry {
  size_t index = 0;
  double weight = 0.0;
  bool operator==(const SparseEntry&) const = default;
};

// Sparse vector with strictly increasing indices.
struct SparseVector {
  std::vector<SparseEntry> entries;

  bool empty() const { return entries.empty(); }
  size_t nnz() const { return entries.size(); }
  bool operator==(const SparseVector&) const = default;
};

}  // namespace hdst

#endif  // HDST_AUTODIFF_SPARSE_H_
