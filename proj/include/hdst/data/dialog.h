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

#ifndef HDST_DATA_DIALOG_H_
#define HDST_DATA_DIALOG_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hdst {

inline constexpr char kDontCare[] = "dontcare";
// Display name of the no-information hypothesis.
inline constexpr char kNoneValue[] = "None";

// One act(slot, value) triple. Acts without slots keep both fields empty;
// slot-only acts such as request(food) leave the value empty.
struct DialogAct {
  std::string act;
  std::string slot;
  std::string value;

  bool operator==(const DialogAct&) const = default;
  auto operator<=>(const DialogAct&) const = default;
};

std::string ToString(const DialogAct& act);

struct AsrHypothesis {
  std::string text;
  double probability = 0.0;
  bool operator==(const AsrHypothesis&) const = default;
};

struct SluHypothesis {
  std::vector<DialogAct> acts;
  double probability = 0.0;
  bool operator==(const SluHypothesis&) const = default;
};

struct WordConfusion {
  std::string word;
  double weight = 0.0;
  bool operator==(const WordConfusion&) const = default;
};

struct BatchAsr {
  std::vector<AsrHypothesis> nbest;
  std::vector<WordConfusion> confusions;
  bool operator==(const BatchAsr&) const = default;
};

struct DialogTurn {
  std::vector<DialogAct> machine_acts;
  std::vector<AsrHypothesis> live_asr;
  std::vector<SluHypothesis> live_slu;
  std::optional<BatchAsr> batch_asr;
  bool operator==(const DialogTurn&) const = default;
};

struct Dialog {
  std::string session_id;
  std::vector<DialogTurn> turns;
  bool operator==(const Dialog&) const = default;
};

struct TurnLabel {
  // Slot -> goal value; a missing slot means None.
  std::map<std::string, std::string> goals;
  std::vector<DialogAct> semantics;
  std::string transcription;
  bool operator==(const TurnLabel&) const = default;

  std::string Goal(const std::string& slot) const {
    auto it = goals.find(slot);
    return it == goals.end() ? kNoneValue : it->second;
  }
};

struct DialogLabels {
  std::string session_id;
  std::vector<TurnLabel> turns;
  bool operator==(const DialogLabels&) const = default;
};

struct LabeledDialog {
  Dialog dialog;
  DialogLabels labels;
  bool operator==(const LabeledDialog&) const = default;
};

using Corpus = std::vector<LabeledDialog>;

}  // namespace hdst

#endif  // HDST_DATA_DIALOG_H_
