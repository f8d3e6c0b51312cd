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

#include "hdst/features/features.h"

#include <algorithm>
#include <cctype>

#include "hdst/common/errors.h"
#include "hdst/data/preprocess.h"

namespace hdst {
namespace {

bool IsDelimiter(char c) { return c == ' ' || c == '-' || c == ':'; }

std::string JoinRange(const std::vector<std::string>& tokens, size_t begin, size_t end) {
  std::string out = tokens[begin];
  for (size_t i = begin + 1; i < end; ++i) {
    out += ' ';
    out += tokens[i];
  }
  return out;
}

}  // namespace

void AddFeature(FeatureBag& bag, const std::string& feature, double weight) {
  if (weight > 0.0) bag[feature] += weight;
}

void MergeInto(FeatureBag& bag, const FeatureBag& other) {
  for (const auto& [feature, weight] : other) AddFeature(bag, feature, weight);
}

double TotalWeight(const FeatureBag& bag) {
  double total = 0.0;
  for (const auto& [feature, weight] : bag) total += weight;
  return total;
}

std::vector<std::string> Tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char raw : text) {
    const auto c = static_cast<unsigned char>(raw);
    if (std::isspace(c)) {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
    } else if (!std::ispunct(c)) {
      current += static_cast<char>(std::tolower(c));
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

FeatureBag ExtractAsrNgrams(const std::vector<AsrHypothesis>& nbest, const std::string& prefix) {
  FeatureBag bag;
  for (const auto& hyp : nbest) {
    const auto tokens = Tokenize(hyp.text);
    for (size_t n = 1; n <= 3; ++n) {
      for (size_t i = 0; i + n <= tokens.size(); ++i) {
        AddFeature(bag, prefix + JoinRange(tokens, i, i + n), hyp.probability);
      }
    }
  }
  return bag;
}

FeatureBag EncodeMachineActs(const std::vector<DialogAct>& acts) {
  FeatureBag bag;
  for (const auto& act : acts) AddFeature(bag, act.act + "-" + act.slot + "-" + act.value, 1.0);
  return bag;
}

FeatureBag EncodeBatchAsr(const std::optional<BatchAsr>& batch) {
  if (!batch) return {};
  FeatureBag bag = ExtractAsrNgrams(batch->nbest, "batch:");
  for (const auto& c : batch->confusions) {
    for (const auto& token : Tokenize(c.word)) AddFeature(bag, "batchcm:" + token, c.weight);
  }
  return bag;
}

FeatureBag EncodeLiveSlu(const std::vector<SluHypothesis>& live_slu,
                         const std::vector<DialogAct>& machine_acts) {
  FeatureBag bag;
  for (const auto& hyp : live_slu) {
    for (const auto& act : AffirmToInform(hyp.acts, machine_acts)) {
      AddFeature(bag, "slu:" + act.act + "-" + act.slot + "-" + act.value, hyp.probability);
    }
  }
  return bag;
}

FeatureBag EncodeTrackedSlot(const std::string& slot, const Ontology& ontology) {
  if (!ontology.HasSlot(slot)) throw ConfigError("unknown tracked slot: " + slot);
  return {{"slot:" + slot, 1.0}};
}

RenderingTable RenderingTable::Default() {
  RenderingTable table;
  table.slots["pricerange"] = {"price range"};
  table.values[std::string(kDontCare)] = {"dont care", "dont mind"};
  return table;
}

std::vector<std::string> RenderingTable::SlotRenderings(const std::string& slot) const {
  std::vector<std::string> out = {slot};
  if (auto it = slots.find(slot); it != slots.end()) {
    out.insert(out.end(), it->second.begin(), it->second.end());
  }
  return out;
}

std::vector<std::string> RenderingTable::ValueRenderings(const std::string& value) const {
  std::vector<std::string> out = {value};
  if (auto it = values.find(value); it != values.end()) {
    out.insert(out.end(), it->second.begin(), it->second.end());
  }
  return out;
}

size_t ReplaceTokens(std::string& text, std::string_view from, std::string_view to) {
  if (from.empty()) return 0;
  size_t count = 0;
  size_t pos = 0;
  while ((pos = text.find(from, pos)) != std::string::npos) {
    const size_t end = pos + from.size();
    const bool left = pos == 0 || IsDelimiter(text[pos - 1]);
    const bool right = end == text.size() || IsDelimiter(text[end]);
    if (left && right) {
      text.replace(pos, from.size(), to);
      pos += to.size();
      ++count;
    } else {
      ++pos;
    }
  }
  return count;
}

FeatureBag Delexicalize(const FeatureBag& bag, const std::vector<std::string>& slot_renderings,
                        const std::vector<std::string>& value_renderings) {
  // Longest renderings first so "asian oriental" wins over "asian".
  auto by_length = [](std::vector<std::string> v) {
    std::stable_sort(v.begin(), v.end(),
                     [](const auto& a, const auto& b) { return a.size() > b.size(); });
    return v;
  };
  const auto values = by_length(value_renderings);
  const auto slots = by_length(slot_renderings);
  FeatureBag out;
  for (const auto& [feature, weight] : bag) {
    std::string text = feature;
    size_t hits = 0;
    for (const auto& v : values) hits += ReplaceTokens(text, v, kValueTag);
    if (hits == 0) continue;
    for (const auto& s : slots) ReplaceTokens(text, s, kSlotTag);
    AddFeature(out, text, weight);
  }
  return out;
}

}  // namespace hdst
