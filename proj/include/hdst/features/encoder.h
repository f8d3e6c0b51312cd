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

#ifndef HDST_FEATURES_ENCODER_H_
#define HDST_FEATURES_ENCODER_H_

#include <string>
#include <vector>

#include "hdst/autodiff/sparse.h"
#include "hdst/data/candidates.h"
#include "hdst/data/dialog.h"
#include "hdst/data/ontology.h"
#include "hdst/features/features.h"
#include "hdst/features/vocabulary.h"
#include "json.hpp"

namespace hdst {

struct FeatureConfig {
  bool use_live_asr = true;
  bool use_batch_asr = true;
  // Replaces all ASR input by live SLU hypothesis features.
  bool use_live_slu_only = false;
  size_t turn_capacity = kTurnVocabularyCapacity;
  size_t value_capacity = kValueVocabularyCapacity;
  RenderingTable renderings = RenderingTable::Default();

  nlohmann::json ToJson() const;
  static FeatureConfig FromJson(const nlohmann::json& json);
};

// Inputs of one slot at one turn, indexed by the slot's candidate set.
struct EncodedSlotTurn {
  SparseVector turn_features;                // f_t, including the slot indicator
  std::vector<SparseVector> value_features;  // f_v; the None entry is empty
  std::vector<double> informs;               // i; None gets 1 - min(1, sum)
  int goal = -1;                             // label indices, -1 when unlabelled
  int semantic = -1;
};

struct EncodedSlot {
  std::string slot;
  std::vector<EncodedSlotTurn> turns;
};

struct EncodedDialog {
  std::string session_id;
  size_t num_turns = 0;
  std::vector<EncodedSlot> slots;  // in tracked-slot order
};

class FeatureEncoder {
 public:
  FeatureEncoder(Ontology ontology, std::vector<std::string> tracked_slots, FeatureConfig config,
                 FeatureVocabulary turn_vocabulary, FeatureVocabulary value_vocabulary);

  // Builds both vocabularies from a training corpus.
  static FeatureEncoder Build(const Corpus& corpus, const Ontology& ontology,
                              const std::vector<std::string>& tracked_slots,
                              const FeatureConfig& config);

  const Ontology& ontology() const { return ontology_; }
  const std::vector<std::string>& tracked_slots() const { return tracked_slots_; }
  const FeatureConfig& config() const { return config_; }
  const FeatureVocabulary& turn_vocabulary() const { return turn_vocabulary_; }
  const FeatureVocabulary& value_vocabulary() const { return value_vocabulary_; }
  const CandidateSet& candidates(const std::string& slot) const;
  const std::vector<CandidateSet>& candidate_sets() const { return candidates_; }

  // Digest of both vocabularies.
  std::string VocabularyHash() const;

  // Slot-independent turn features under the configured toggles.
  FeatureBag TurnBag(const DialogTurn& turn) const;
  // Delexicalized features of one candidate (empty for None).
  FeatureBag ValueBag(const FeatureBag& turn_bag, const std::string& slot,
                      const std::string& value) const;

  // Labels may be null for unlabelled dialogs. Throws ContractViolation when
  // labels do not align or name values outside the candidate sets.
  EncodedDialog Encode(const Dialog& dialog, const DialogLabels* labels) const;
  EncodedDialog Encode(const LabeledDialog& dialog) const {
    return Encode(dialog.dialog, &dialog.labels);
  }
  std::vector<EncodedDialog> EncodeCorpus(const Corpus& corpus) const;

 private:
  // Per-turn value bags for every candidate of every tracked slot, in
  // candidate order.
  std::vector<std::vector<FeatureBag>> ValueBags(const FeatureBag& turn_bag) const;

  Ontology ontology_;
  std::vector<std::string> tracked_slots_;
  FeatureConfig config_;
  FeatureVocabulary turn_vocabulary_;
  FeatureVocabulary value_vocabulary_;
  std::vector<CandidateSet> candidates_;
};

}  // namespace hdst

#endif  // HDST_FEATURES_ENCODER_H_
