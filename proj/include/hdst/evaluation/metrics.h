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

#ifndef HDST_EVALUATION_METRICS_H_
#define HDST_EVALUATION_METRICS_H_

#include <span>
#include <string>
#include <vector>

#include "hdst/data/dialog.h"
#include "hdst/tracker/tracker.h"
#include "json.hpp"

namespace hdst {

enum class Schedule { kAllTurns, kLabelledTurns };

Schedule ParseSchedule(const std::string& name);
std::string ScheduleName(Schedule schedule);

// One evaluated turn: a distribution and the labelled candidate per slot.
struct TurnPrediction {
  std::vector<std::vector<double>> beliefs;
  std::vector<size_t> labels;
};

// First index of the maximum.
size_t Argmax(std::span<const double> p);

// Fraction of turns whose per-slot argmax matches every label.
double JointAccuracy(std::span<const TurnPrediction> turns);
// Mean squared L2 distance between the product of the slot distributions and
// the one-hot joint label, in closed form.
double JointL2(std::span<const TurnPrediction> turns);
double JointL2(const TurnPrediction& turn);

struct SlotScore {
  std::string slot;
  double accuracy = 0.0;
  double l2 = 0.0;
};

struct EvaluationReport {
  Schedule schedule = Schedule::kAllTurns;
  double joint_accuracy = 0.0;
  double joint_l2 = 0.0;
  std::vector<SlotScore> slots;
  size_t dialogs = 0;
  size_t total_turns = 0;
  size_t evaluated_turns = 0;
  size_t skipped_turns = 0;
  nlohmann::json config;

  nlohmann::ordered_json ToJson() const;
  std::string ToText() const;
};

// Pairs beliefs with labels under the schedule. Every slot in the beliefs is
// evaluated, with an unlabelled goal counting as None. Throws
// ContractViolation when dialogs, turns or candidates do not line up.
std::vector<TurnPrediction> CollectPredictions(std::span<const DialogBeliefs> beliefs,
                                               const Corpus& labels, Schedule schedule,
                                               size_t* skipped = nullptr);

// Throws Error when the schedule leaves no turn to evaluate.
EvaluationReport Evaluate(std::span<const DialogBeliefs> beliefs, const Corpus& labels,
                          Schedule schedule);

}  // namespace hdst

#endif  // HDST_EVALUATION_METRICS_H_
