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

#include "hdst/features/vocabulary.h"

#include <algorithm>
#include <fstream>

#include "hdst/common/errors.h"
#include "hdst/common/hash.h"

namespace hdst {

std::string VocabularyKindName(VocabularyKind kind) {
  return kind == VocabularyKind::kTurn ? "turn" : "value";
}

FeatureVocabulary::FeatureVocabulary(VocabularyKind kind, std::vector<std::string> features)
    : kind_(kind), features_(std::move(features)) {
  for (size_t i = 0; i < features_.size(); ++i) {
    if (features_[i].empty() || features_[i].find('\n') != std::string::npos) {
      throw ContractViolation("invalid vocabulary feature at index " + std::to_string(i));
    }
    if (!index_.emplace(features_[i], i).second) {
      throw ContractViolation("duplicate vocabulary feature: " + features_[i]);
    }
  }
}

int64_t FeatureVocabulary::Find(const std::string& feature) const {
  auto it = index_.find(feature);
  return it == index_.end() ? -1 : static_cast<int64_t>(it->second);
}

SparseVector FeatureVocabulary::Vectorize(const FeatureBag& bag) const {
  SparseVector out;
  for (const auto& [feature, weight] : bag) {
    auto it = index_.find(feature);
    if (it != index_.end() && weight != 0.0) out.entries.push_back({it->second, weight});
  }
  std::sort(out.entries.begin(), out.entries.end(),
            [](const auto& a, const auto& b) { return a.index < b.index; });
  return out;
}

std::string FeatureVocabulary::Hash() const {
  std::string content;
  for (const auto& f : features_) {
    content += f;
    content += '\n';
  }
  return HexDigest(Fnv1a64(content));
}

void FeatureVocabulary::Save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw LoadError("cannot write vocabulary " + path);
  for (const auto& f : features_) out << f << '\n';
  if (!out) throw LoadError("failed writing vocabulary " + path);
}

FeatureVocabulary FeatureVocabulary::Load(const std::string& path, VocabularyKind kind) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot read vocabulary " + path);
  std::vector<std::string> features;
  std::string line;
  while (std::getline(in, line)) features.push_back(line);
  try {
    return FeatureVocabulary(kind, std::move(features));
  } catch (const ContractViolation& e) {
    throw LoadError(path + ": " + e.what());
  }
}

void VocabularyCounter::Add(const FeatureBag& bag) {
  for (const auto& [feature, weight] : bag) totals_[feature] += weight;
}

FeatureVocabulary VocabularyCounter::Build(VocabularyKind kind, size_t capacity) const {
  if (capacity == 0) throw ConfigError("vocabulary capacity must be positive");
  std::vector<std::pair<std::string, double>> ranked(totals_.begin(), totals_.end());
  // totals_ is already in lexicographic order, so a stable sort by weight
  // breaks ties lexicographically.
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  if (ranked.size() > capacity) ranked.resize(capacity);
  std::vector<std::string> features;
  features.reserve(ranked.size());
  for (auto& [feature, weight] : ranked) features.push_back(std::move(feature));
  return FeatureVocabulary(kind, std::move(features));
}

FeatureVocabulary BuildVocabulary(std::span<const FeatureBag> bags, VocabularyKind kind,
                                  size_t capacity) {
  VocabularyCounter counter;
  for (const auto& bag : bags) counter.Add(bag);
  return counter.Build(kind, capacity);
}

}  // namespace hdst
