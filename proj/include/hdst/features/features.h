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

#ifndef HDST_FEATURES_FEATURES_H_
#define HDST_FEATURES_FEATURES_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hdst/data/dialog.h"
#include "hdst/data/ontology.h"

namespace hdst {

// Feature string -> accumulated weight. Weights are positive; zero-weight
// features are never stored.
using FeatureBag = std::map<std::string, double>;

// Adds weight to a feature. Non-positive weights are ignored.
void AddFeature(FeatureBag& bag, const std::string& feature, double weight);
// bag += other, feature-wise.
void MergeInto(FeatureBag& bag, const FeatureBag& other);
double TotalWeight(const FeatureBag& bag);

// Lowercases, strips punctuation and splits on whitespace.
std::vector<std::string> Tokenize(std::string_view text);

// Unigrams, bigrams and trigrams of every hypothesis, each weighted by the
// hypothesis probability and summed across hypotheses. Features get `prefix`
// prepended.
FeatureBag ExtractAsrNgrams(const std::vector<AsrHypothesis>& nbest,
                            const std::string& prefix = "");

// "act-slot-value" with weight 1 per act; missing fields are empty segments.
FeatureBag EncodeMachineActs(const std::vector<DialogAct>& acts);

// Batch hypotheses as n-grams under "batch:", confusion unigrams as
// "batchcm:word" with their weight. Absent input gives an empty bag.
FeatureBag EncodeBatchAsr(const std::optional<BatchAsr>& batch);

// "slu:act-slot-value" weighted by SLU hypothesis probability, after affirm
// normalization against the machine acts.
FeatureBag EncodeLiveSlu(const std::vector<SluHypothesis>& live_slu,
                         const std::vector<DialogAct>& machine_acts);

// {"slot:<name>": 1}. Throws ConfigError for a slot outside the ontology.
FeatureBag EncodeTrackedSlot(const std::string& slot, const Ontology& ontology);

inline constexpr std::string_view kValueTag = "<value>";
inline constexpr std::string_view kSlotTag = "<slot>";

// Surface forms used to find slots and values inside features. The canonical
// name is always a rendering; the tables add alternatives.
struct RenderingTable {
  std::map<std::string, std::vector<std::string>> slots;
  std::map<std::string, std::vector<std::string>> values;

  // Default table: "price range" for pricerange, "dont care" / "dont mind"
  // for dontcare.
  static RenderingTable Default();

  std::vector<std::string> SlotRenderings(const std::string& slot) const;
  std::vector<std::string> ValueRenderings(const std::string& value) const;
};

// Keeps the features that contain one of the value renderings, replacing each
// occurrence by <value> and any slot rendering by <slot>. Matches are whole
// tokens, where tokens are delimited by spaces, '-' and ':'. Features that
// collide after substitution have their weights summed.
FeatureBag Delexicalize(const FeatureBag& bag, const std::vector<std::string>& slot_renderings,
                        const std::vector<std::string>& value_renderings);

// Replaces whole-token occurrences of `from` in `text` by `to`. Returns the
// number of replacements.
size_t ReplaceTokens(std::string& text, std::string_view from, std::string_view to);

}  // namespace hdst

#endif  // HDST_FEATURES_FEATURES_H_
