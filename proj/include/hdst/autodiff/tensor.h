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

#ifndef HDST_AUTODIFF_TENSOR_H_
#define HDST_AUTODIFF_TENSOR_H_

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace hdst {

class Rng;

// Dense row-major tensor of at most two dimensions. A 1-D tensor of length n
// behaves as an n x 1 column.
class Tensor {
 public:
  Tensor() = default;
  Tensor(std::vector<size_t> shape, std::vector<double> values);
  static Tensor Zeros(std::vector<size_t> shape);

  const std::vector<size_t>& shape() const { return shape_; }
  size_t size() const { return values_.size(); }
  size_t rows() const { return shape_.empty() ? 1 : shape_[0]; }
  size_t cols() const { return shape_.size() < 2 ? 1 : shape_[1]; }

  std::span<const double> values() const { return values_; }
  std::span<double> mutable_values() { return values_; }
  double at(size_t r, size_t c) const { return values_[r * cols() + c]; }

  bool operator==(const Tensor& other) const = default;

 private:
  std::vector<size_t> shape_;
  std::vector<double> values_;
};

// Strong index of a parameter inside a ParameterStore.
struct ParamId {
  size_t index = 0;
  bool operator==(const ParamId&) const = default;
};

// Named trainable tensors. Ids are assigned in insertion order and never
// change; names are unique.
class ParameterStore {
 public:
  static constexpr int kFormatVersion = 1;

  ParamId Add(const std::string& name, std::vector<size_t> shape);

  std::optional<ParamId> Find(const std::string& name) const;
  // Throws ContractViolation for unknown names.
  ParamId Id(const std::string& name) const;

  const Tensor& Get(ParamId id) const { return tensors_[id.index]; }
  Tensor& GetMutable(ParamId id) { return tensors_[id.index]; }
  const std::string& Name(ParamId id) const { return names_[id.index]; }

  size_t count() const { return tensors_.size(); }
  size_t total_size() const;

  // Uniform in [-scale, scale], drawn in sorted-name order so that the result
  // depends only on (names, shapes, seed).
  void InitializeUniform(double scale, Rng& rng);

  // {"format_version": 1, "parameters": {name: {"shape": [...], "values": [...]}}}
  nlohmann::json ToJson() const;
  // Builds a store holding exactly the parameters in the document.
  static ParameterStore FromJson(const nlohmann::json& doc);
  // Overwrites values of this store from the document. Names and shapes must
  // match this store's layout exactly.
  void LoadValues(const nlohmann::json& doc);

  bool operator==(const ParameterStore& other) const {
    return names_ == other.names_ && tensors_ == other.tensors_;
  }

 private:
  std::vector<std::string> names_;
  std::vector<Tensor> tensors_;
  std::map<std::string, size_t> index_;
};

// Gradient buffers aligned with a ParameterStore layout. Kept apart from the
// parameters so that forward/backward passes can share parameters read-only.
class GradientSet {
 public:
  GradientSet() = default;
  explicit GradientSet(const ParameterStore& params);

  std::span<double> operator[](ParamId id) { return buffers_[id.index]; }
  std::span<const double> operator[](ParamId id) const { return buffers_[id.index]; }
  size_t count() const { return buffers_.size(); }

  void SetZero();
  void Scale(double factor);
  void Accumulate(const GradientSet& other);

  bool operator==(const GradientSet& other) const = default;

 private:
  std::vector<std::vector<double>> buffers_;
};

}  // namespace hdst

#endif  // HDST_AUTODIFF_TENSOR_H_
