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

#include "hdst/features/encoder.h"

#include <algorithm>
#include <set>

#include "hdst/common/errors.h"
#include "hdst/common/hash.h"
#include "hdst/data/preprocess.h"

namespace hdst {
namespace {

// Whole tokens of all features, split on the delimiters used by
// Delexicalize.
std::set<std::string> FeatureTokens(const FeatureBag& bag) {
  std::set<std::string> tokens;
  for (const auto& [feature, weight] : bag) {
    size_t start = 0;
    for (size_t i = 0; i <= feature.size(); ++i) {
      if (i == feature.size() || feature[i] == ' ' || feature[i] == '-' || feature[i] == ':') {
        if (i > start) tokens.insert(feature.substr(start, i - start));
        start = i + 1;
      }
    }
  }
  return tokens;
}

bool MayOccur(const std::set<std::string>& tokens, const std::vector<std::string>& renderings) {
  for (const auto& r : renderings) {
    const auto first = r.substr(0, r.find_first_of(" -:"));
    if (tokens.count(first)) return true;
  }
  return false;
}

}  // namespace

nlohmann::json FeatureConfig::ToJson() const {
  return {{"use_live_asr", use_live_asr},
          {"use_batch_asr", use_batch_asr},
          {"use_live_slu_only", use_live_slu_only},
          {"turn_capacity", turn_capacity},
          {"value_capacity", value_capacity},
          {"slot_renderings", renderings.slots},
          {"value_renderings", renderings.values}};
}

FeatureConfig FeatureConfig::FromJson(const nlohmann::json& json) {
  FeatureConfig c;
  try {
    c.use_live_asr = json.value("use_live_asr", c.use_live_asr);
    c.use_batch_asr = json.value("use_batch_asr", c.use_batch_asr);
    c.use_live_slu_only = json.value("use_live_slu_only", c.use_live_slu_only);
    c.turn_capacity = json.value("turn_capacity", c.turn_capacity);
    c.value_capacity = json.value("value_capacity", c.value_capacity);
    if (json.contains("slot_renderings")) {
      c.renderings.slots =
          json.at("slot_renderings").get<std::map<std::string, std::vector<std::string>>>();
    }
    if (json.contains("value_renderings")) {
      c.renderings.values =
          json.at("value_renderings").get<std::map<std::string, std::vector<std::string>>>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid feature config: ") + e.what());
  }
  if (c.turn_capacity == 0 || c.value_capacity == 0) {
    throw ConfigError("vocabulary capacities must be positive");
  }
  return c;
}

FeatureEncoder::FeatureEncoder(Ontology ontology, std::vector<std::string> tracked_slots,
                               FeatureConfig config, FeatureVocabulary turn_vocabulary,
                               FeatureVocabulary value_vocabulary)
    : ontology_(std::move(ontology)),
      tracked_slots_(std::move(tracked_slots)),
      config_(std::move(config)),
      turn_vocabulary_(std::move(turn_vocabulary)),
      value_vocabulary_(std::move(value_vocabulary)) {
  if (tracked_slots_.empty()) throw ConfigError("no tracked slots");
  for (const auto& slot : tracked_slots_) {
    if (!ontology_.HasSlot(slot)) throw ConfigError("unknown tracked slot: " + slot);
    candidates_.emplace_back(ontology_, slot);
  }
}

FeatureEncoder FeatureEncoder::Build(const Corpus& corpus, const Ontology& ontology,
                                     const std::vector<std::string>& tracked_slots,
                                     const FeatureConfig& config) {
  // Vocabularies start empty so the bag helpers can run before they exist.
  FeatureEncoder probe(ontology, tracked_slots, config, {}, {});
  VocabularyCounter turn_counter;
  VocabularyCounter value_counter;
  for (const auto& dialog : corpus) {
    for (const auto& turn : dialog.dialog.turns) {
      const FeatureBag base = probe.TurnBag(turn);
      for (const auto& slot : tracked_slots) {
        FeatureBag bag = base;
        MergeInto(bag, EncodeTrackedSlot(slot, ontology));
        turn_counter.Add(bag);
      }
      for (const auto& slot_bags : probe.ValueBags(base)) {
        for (const auto& bag : slot_bags) value_counter.Add(bag);
      }
    }
  }
  return FeatureEncoder(ontology, tracked_slots, config,
                        turn_counter.Build(VocabularyKind::kTurn, config.turn_capacity),
                        value_counter.Build(VocabularyKind::kValue, config.value_capacity));
}

const CandidateSet& FeatureEncoder::candidates(const std::string& slot) const {
  for (const auto& c : candidates_) {
    if (c.slot() == slot) return c;
  }
  throw ContractViolation("slot is not tracked: " + slot);
}

std::string FeatureEncoder::VocabularyHash() const {
  return HexDigest(Fnv1a64(turn_vocabulary_.Hash() + value_vocabulary_.Hash()));
}

FeatureBag FeatureEncoder::TurnBag(const DialogTurn& turn) const {
  FeatureBag bag = EncodeMachineActs(turn.machine_acts);
  if (config_.use_live_slu_only) {
    MergeInto(bag, EncodeLiveSlu(turn.live_slu, turn.machine_acts));
    return bag;
  }
  if (config_.use_live_asr) MergeInto(bag, ExtractAsrNgrams(turn.live_asr));
  if (config_.use_batch_asr) MergeInto(bag, EncodeBatchAsr(turn.batch_asr));
  return bag;
}

FeatureBag FeatureEncoder::ValueBag(const FeatureBag& turn_bag, const std::string& slot,
                                    const std::string& value) const {
  if (value == kNoneValue) return {};
  return Delexicalize(turn_bag, config_.renderings.SlotRenderings(slot),
                      config_.renderings.ValueRenderings(value));
}

std::vector<std::vector<FeatureBag>> FeatureEncoder::ValueBags(const FeatureBag& turn_bag) const {
  const auto tokens = FeatureTokens(turn_bag);
  std::vector<std::vector<FeatureBag>> out;
  for (const auto& cands : candidates_) {
    const auto slot_renderings = config_.renderings.SlotRenderings(cands.slot());
    auto& bags = out.emplace_back(cands.size());
    for (size_t k = 0; k < cands.none_index(); ++k) {
      const auto renderings = config_.renderings.ValueRenderings(cands.value(k));
      if (MayOccur(tokens, renderings)) {
        bags[k] = Delexicalize(turn_bag, slot_renderings, renderings);
      }
    }
  }
  return out;
}

EncodedDialog FeatureEncoder::Encode(const Dialog& dialog, const DialogLabels* labels) const {
  if (labels && labels->turns.size() != dialog.turns.size()) {
    throw ContractViolation("labels of " + dialog.session_id + " do not align with its turns");
  }
  EncodedDialog out;
  out.session_id = dialog.session_id;
  out.num_turns = dialog.turns.size();
  for (const auto& slot : tracked_slots_) out.slots.push_back({slot, {}});

  for (size_t t = 0; t < dialog.turns.size(); ++t) {
    const DialogTurn& turn = dialog.turns[t];
    const FeatureBag base = TurnBag(turn);
    const auto value_bags = ValueBags(base);
    for (size_t s = 0; s < candidates_.size(); ++s) {
      const CandidateSet& cands = candidates_[s];
      EncodedSlotTurn enc;
      FeatureBag bag = base;
      MergeInto(bag, EncodeTrackedSlot(cands.slot(), ontology_));
      enc.turn_features = turn_vocabulary_.Vectorize(bag);
      enc.value_features.reserve(cands.size());
      for (const auto& vb : value_bags[s]) {
        enc.value_features.push_back(value_vocabulary_.Vectorize(vb));
      }
      enc.informs.assign(cands.size(), 0.0);
      double total = 0.0;
      for (const auto& [value, weight] :
           BuildInformDistribution(turn.live_slu, turn.machine_acts, cands.slot())) {
        if (!cands.Contains(value) || value == kNoneValue) continue;
        enc.informs[cands.Index(value)] = weight;
        total += weight;
      }
      enc.informs[cands.none_index()] = 1.0 - std::min(1.0, total);
      if (labels) {
        const TurnLabel& label = labels->turns[t];
        enc.goal = static_cast<int>(cands.Index(label.Goal(cands.slot())));
        enc.semantic = static_cast<int>(
            cands.Index(SemanticTarget(label.semantics, turn.machine_acts, cands.slot())));
      }
      out.slots[s].turns.push_back(std::move(enc));
    }
  }
  return out;
}

std::vector<EncodedDialog> FeatureEncoder::EncodeCorpus(const Corpus& corpus) const {
  std::vector<EncodedDialog> out;
  out.reserve(corpus.size());
  for (const auto& d : corpus) out.push_back(Encode(d));
  return out;
}

}  // namespace hdst
