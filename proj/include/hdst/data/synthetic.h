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

#ifndef HDST_DATA_SYNTHETIC_H_
#define HDST_DATA_SYNTHETIC_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hdst/data/dialog.h"
#include "hdst/data/ontology.h"
#include "json.hpp"

namespace hdst {

// A natural-language variant used instead of a value's own surface form,
// e.g. food=chinese spoken as "oriental".
struct AliasEntry {
  std::string slot;
  std::string value;
  std::string phrase;
  bool operator==(const AliasEntry&) const = default;
};

struct SyntheticConfig {
  size_t num_dialogs = 100;
  std::vector<std::string> slots = {"food", "pricerange", "area"};
  size_t values_per_slot = 5;
  // Probability that a value mention in the top ASR hypothesis is replaced
  // by another value of the same slot. Lower-ranked hypotheses use
  // max(rate, 0.5).
  double asr_confusion_rate = 0.1;
  // Per user turn probability of changing an already informed goal.
  double goal_change_rate = 0.05;
  std::vector<AliasEntry> alias_table;
  // Probability of using the alias phrase when informing an aliased value.
  double alias_rate = 0.5;
  double dontcare_rate = 0.05;
  size_t min_turns = 3;
  size_t max_turns = 8;
  bool batch_asr = true;
  bool include_name_slot = true;
  // Values never chosen as goals nor produced by ASR confusions.
  std::map<std::string, std::vector<std::string>> excluded_values;
  // Values always chosen as the initial goal of their slot.
  std::map<std::string, std::string> forced_values;
  uint64_t seed = 1;
  std::string session_prefix = "synth";

  // Throws ConfigError for rates outside [0, 1] and inconsistent entries.
  void Validate() const;
  nlohmann::json ToJson() const;
  // Missing keys keep their defaults.
  static SyntheticConfig FromJson(const nlohmann::json& doc);
};

struct SyntheticCorpus {
  Ontology ontology;
  Corpus dialogs;
};

// Deterministic given the config (including its seed).
SyntheticCorpus GenerateSyntheticCorpus(const SyntheticConfig& config);

// Ontology the generator uses for a config.
Ontology SyntheticOntology(const SyntheticConfig& config);

// Surface phrase used for a slot name in generated utterances.
std::string SyntheticSlotPhrase(const std::string& slot);

// True when `text` contains `phrase` as a whole-word subsequence.
bool ContainsPhrase(const std::string& text, const std::string& phrase);

}  // namespace hdst

#endif  // HDST_DATA_SYNTHETIC_H_
