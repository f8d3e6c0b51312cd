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

#ifndef HDST_FEATURES_VOCABULARY_H_
#define HDST_FEATURES_VOCABULARY_H_

#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "hdst/autodiff/sparse.h"
#include "hdst/features/features.h"

namespace hdst {

enum class VocabularyKind { kTurn, kValue };

inline constexpr size_t kTurnVocabularyCapacity = 2000;
inline constexpr size_t kValueVocabularyCapacity = 100;

std::string VocabularyKindName(VocabularyKind kind);

// Frozen, dense feature index.
class FeatureVocabulary {
 public:
  FeatureVocabulary() = default;
  FeatureVocabulary(VocabularyKind kind, std::vector<std::string> features);

  VocabularyKind kind() const { return kind_; }
  size_t size() const { return features_.size(); }
  const std::vector<std::string>& features() const { return features_; }
  const std::string& feature(size_t index) const { return features_.at(index); }
  // -1 when absent.
  int64_t Find(const std::string& feature) const;

  // Drops out-of-vocabulary features and copies the rest.
  SparseVector Vectorize(const FeatureBag& bag) const;

  // FNV-1a digest of the file contents.
  std::string Hash() const;

  // One feature per line; line number is the index.
  void Save(const std::string& path) const;
  static FeatureVocabulary Load(const std::string& path, VocabularyKind kind);

  bool operator==(const FeatureVocabulary& other) const {
    return kind_ == other.kind_ && features_ == other.features_;
  }

 private:
  VocabularyKind kind_ = VocabularyKind::kTurn;
  std::vector<std::string> features_;
  std::unordered_map<std::string, size_t> index_;
};

// Sums feature weights over a corpus of bags.
class VocabularyCounter {
 public:
  void Add(const FeatureBag& bag);
  // Top `capacity` features by summed weight; ties broken lexicographically.
  // Throws ConfigError for capacity 0.
  FeatureVocabulary Build(VocabularyKind kind, size_t capacity) const;

  const std::map<std::string, double>& totals() const { return totals_; }

 private:
  std::map<std::string, double> totals_;
};

FeatureVocabulary BuildVocabulary(std::span<const FeatureBag> bags, VocabularyKind kind,
                                  size_t capacity);

}  // namespace hdst

#endif  // HDST_FEATURES_VOCABULARY_H_
