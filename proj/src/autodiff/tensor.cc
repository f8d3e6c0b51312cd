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

#include "hdst/autodiff/tensor.h"

#include <algorithm>
#include <functional>
#include <numeric>

#include "hdst/common/errors.h"
#include "hdst/common/random.h"

namespace hdst {
namespace {

size_t ShapeSize(const std::vector<size_t>& shape) {
  return std::accumulate(shape.begin(), shape.end(), size_t{1}, std::multiplies<>());
}

}  // namespace

Tensor::Tensor(std::vector<size_t> shape, std::vector<double> values)
    : shape_(std::move(shape)), values_(std::move(values)) {
  if (shape_.size() > 2) throw ShapeError("Tensor: at most two dimensions supported");
  if (ShapeSize(shape_) != values_.size()) {
    throw ShapeError("Tensor: values length " + std::to_string(values_.size()) +
                     " does not match shape size " + std::to_string(ShapeSize(shape_)));
  }
}

Tensor Tensor::Zeros(std::vector<size_t> shape) {
  const size_t n = ShapeSize(shape);
  return Tensor(std::move(shape), std::vector<double>(n, 0.0));
}

ParamId ParameterStore::Add(const std::string& name, std::vector<size_t> shape) {
  if (index_.count(name)) throw ContractViolation("duplicate parameter name: " + name);
  const ParamId id{tensors_.size()};
  index_.emplace(name, id.index);
  names_.push_back(name);
  tensors_.push_back(Tensor::Zeros(std::move(shape)));
  return id;
}

std::optional<ParamId> ParameterStore::Find(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return ParamId{it->second};
}

ParamId ParameterStore::Id(const std::string& name) const {
  auto id = Find(name);
  if (!id) throw ContractViolation("unknown parameter: " + name);
  return *id;
}

size_t ParameterStore::total_size() const {
  size_t n = 0;
  for (const Tensor& t : tensors_) n += t.size();
  return n;
}

void ParameterStore::InitializeUniform(double scale, Rng& rng) {
  // index_ iterates in sorted-name order.
  for (const auto& [name, index] : index_) {
    for (double& v : tensors_[index].mutable_values()) v = rng.Uniform(-scale, scale);
  }
}

nlohmann::json ParameterStore::ToJson() const {
  nlohmann::json params = nlohmann::json::object();
  for (size_t i = 0; i < tensors_.size(); ++i) {
    const Tensor& t = tensors_[i];
    params[names_[i]] = {{"shape", t.shape()},
                         {"values", std::vector<double>(t.values().begin(), t.values().end())}};
  }
  return {{"format_version", kFormatVersion}, {"parameters", std::move(params)}};
}

namespace {

void CheckVersion(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("format_version") || !doc.contains("parameters")) {
    throw VersionError("parameter document lacks format_version/parameters");
  }
  const int version = doc.at("format_version").get<int>();
  if (version != ParameterStore::kFormatVersion) {
    throw VersionError("unsupported parameter format version " + std::to_string(version));
  }
}

}  // namespace

ParameterStore ParameterStore::FromJson(const nlohmann::json& doc) {
  CheckVersion(doc);
  ParameterStore store;
  for (const auto& [name, entry] : doc.at("parameters").items()) {
    const ParamId id = store.Add(name, entry.at("shape").get<std::vector<size_t>>());
    store.tensors_[id.index] = Tensor(entry.at("shape").get<std::vector<size_t>>(),
                                      entry.at("values").get<std::vector<double>>());
  }
  return store;
}

void ParameterStore::LoadValues(const nlohmann::json& doc) {
  CheckVersion(doc);
  const auto& params = doc.at("parameters");
  if (params.size() != tensors_.size()) {
    throw VersionError("parameter count mismatch: document has " + std::to_string(params.size()) +
                       ", model expects " + std::to_string(tensors_.size()));
  }
  for (size_t i = 0; i < tensors_.size(); ++i) {
    if (!params.contains(names_[i])) throw VersionError("missing parameter " + names_[i]);
    const auto& entry = params.at(names_[i]);
    Tensor loaded(entry.at("shape").get<std::vector<size_t>>(),
                  entry.at("values").get<std::vector<double>>());
    if (loaded.shape() != tensors_[i].shape()) {
      throw VersionError("shape mismatch for parameter " + names_[i]);
    }
    tensors_[i] = std::move(loaded);
  }
}

GradientSet::GradientSet(const ParameterStore& params) {
  buffers_.reserve(params.count());
  for (size_t i = 0; i < params.count(); ++i) {
    buffers_.emplace_back(params.Get(ParamId{i}).size(), 0.0);
  }
}

void GradientSet::SetZero() {
  for (auto& b : buffers_) std::fill(b.begin(), b.end(), 0.0);
}

void GradientSet::Scale(double factor) {
  for (auto& b : buffers_) {
    for (double& x : b) x *= factor;
  }
}

void GradientSet::Accumulate(const GradientSet& other) {
  if (other.buffers_.size() != buffers_.size()) throw ShapeError("GradientSet layout mismatch");
  for (size_t i = 0; i < buffers_.size(); ++i) {
    if (other.buffers_[i].size() != buffers_[i].size()) throw ShapeError("GradientSet layout mismatch");
    for (size_t j = 0; j < buffers_[i].size(); ++j) buffers_[i][j] += other.buffers_[i][j];
  }
}

}  // namespace hdst
