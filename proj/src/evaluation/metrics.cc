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

#include "hdst/evaluation/metrics.h"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "hdst/common/errors.h"

namespace hdst {
namespace {

void CheckTurn(const TurnPrediction& turn) {
  if (turn.beliefs.size() != turn.labels.size() || turn.beliefs.empty()) {
    throw ContractViolation("every slot needs a belief and a label");
  }
  for (size_t s = 0; s < turn.beliefs.size(); ++s) {
    if (turn.labels[s] >= turn.beliefs[s].size()) {
      throw ContractViolation("label outside the candidate set");
    }
  }
}

double SquaredNorm(std::span<const double> p) {
  double total = 0.0;
  for (double x : p) total += x * x;
  return total;
}

double SlotL2(std::span<const double> p, size_t label) {
  return SquaredNorm(p) - 2.0 * p[label] + 1.0;
}

}  // namespace

Schedule ParseSchedule(const std::string& name) {
  if (name == "all_turns") return Schedule::kAllTurns;
  if (name == "labelled_turns") return Schedule::kLabelledTurns;
  throw ConfigError("unknown schedule: " + name);
}

std::string ScheduleName(Schedule schedule) {
  return schedule == Schedule::kAllTurns ? "all_turns" : "labelled_turns";
}

size_t Argmax(std::span<const double> p) {
  if (p.empty()) throw ContractViolation("argmax of an empty distribution");
  return static_cast<size_t>(std::max_element(p.begin(), p.end()) - p.begin());
}

double JointAccuracy(std::span<const TurnPrediction> turns) {
  if (turns.empty()) throw ContractViolation("no turns to score");
  size_t correct = 0;
  for (const auto& turn : turns) {
    CheckTurn(turn);
    bool all = true;
    for (size_t s = 0; s < turn.beliefs.size() && all; ++s) {
      all = Argmax(turn.beliefs[s]) == turn.labels[s];
    }
    correct += all ? 1 : 0;
  }
  return static_cast<double>(correct) / static_cast<double>(turns.size());
}

double JointL2(const TurnPrediction& turn) {
  CheckTurn(turn);
  double label_mass = 1.0;
  double norm = 1.0;
  for (size_t s = 0; s < turn.beliefs.size(); ++s) {
    label_mass *= turn.beliefs[s][turn.labels[s]];
    norm *= SquaredNorm(turn.beliefs[s]);
  }
  return 1.0 - 2.0 * label_mass + norm;
}

double JointL2(std::span<const TurnPrediction> turns) {
  if (turns.empty()) throw ContractViolation("no turns to score");
  double total = 0.0;
  for (const auto& turn : turns) total += JointL2(turn);
  return total / static_cast<double>(turns.size());
}

std::vector<TurnPrediction> CollectPredictions(std::span<const DialogBeliefs> beliefs,
                                               const Corpus& labels, Schedule schedule,
                                               size_t* skipped) {
  if (beliefs.size() != labels.size()) {
    throw ContractViolation("beliefs cover " + std::to_string(beliefs.size()) + " dialogs, labels " +
                            std::to_string(labels.size()));
  }
  std::vector<TurnPrediction> out;
  size_t skip = 0;
  for (size_t d = 0; d < beliefs.size(); ++d) {
    const DialogBeliefs& b = beliefs[d];
    const DialogLabels& l = labels[d].labels;
    if (b.num_turns != l.turns.size()) {
      throw ContractViolation("dialog " + b.session_id + ": belief and label turn counts differ");
    }
    std::vector<std::map<std::string, size_t>> index(b.slots.size());
    for (size_t s = 0; s < b.slots.size(); ++s) {
      if (b.slots[s].beliefs.size() != b.num_turns) {
        throw ContractViolation("dialog " + b.session_id + ": slot " + b.slots[s].slot +
                                " is missing turns");
      }
      for (size_t k = 0; k < b.slots[s].candidates.size(); ++k) {
        index[s][b.slots[s].candidates[k]] = k;
      }
    }
    for (size_t t = 0; t < b.num_turns; ++t) {
      const TurnLabel& label = l.turns[t];
      bool labelled = false;
      for (const auto& s : b.slots) labelled |= label.goals.count(s.slot) > 0;
      if (schedule == Schedule::kLabelledTurns && !labelled) {
        ++skip;
        continue;
      }
      TurnPrediction p;
      for (size_t s = 0; s < b.slots.size(); ++s) {
        const std::string goal = label.Goal(b.slots[s].slot);
        auto it = index[s].find(goal);
        if (it == index[s].end()) {
          throw ContractViolation("dialog " + b.session_id + ": goal '" + goal +
                                  "' is not a candidate of slot " + b.slots[s].slot);
        }
        p.beliefs.push_back(b.slots[s].beliefs[t]);
        p.labels.push_back(it->second);
      }
      out.push_back(std::move(p));
    }
  }
  if (skipped) *skipped = skip;
  return out;
}

EvaluationReport Evaluate(std::span<const DialogBeliefs> beliefs, const Corpus& labels,
                          Schedule schedule) {
  EvaluationReport report;
  report.schedule = schedule;
  report.dialogs = beliefs.size();
  const auto turns = CollectPredictions(beliefs, labels, schedule, &report.skipped_turns);
  for (const auto& d : labels) report.total_turns += d.labels.turns.size();
  report.evaluated_turns = turns.size();
  if (turns.empty()) throw Error("no turns to evaluate under schedule " + ScheduleName(schedule));
  report.joint_accuracy = JointAccuracy(turns);
  report.joint_l2 = JointL2(turns);
  for (size_t s = 0; s < beliefs.front().slots.size(); ++s) {
    SlotScore score{beliefs.front().slots[s].slot, 0.0, 0.0};
    for (const auto& turn : turns) {
      score.accuracy += Argmax(turn.beliefs[s]) == turn.labels[s] ? 1.0 : 0.0;
      score.l2 += SlotL2(turn.beliefs[s], turn.labels[s]);
    }
    score.accuracy /= static_cast<double>(turns.size());
    score.l2 /= static_cast<double>(turns.size());
    report.slots.push_back(score);
  }
  return report;
}

nlohmann::ordered_json EvaluationReport::ToJson() const {
  nlohmann::ordered_json j;
  j["schedule"] = ScheduleName(schedule);
  j["joint_accuracy"] = joint_accuracy;
  j["joint_l2"] = joint_l2;
  j["dialogs"] = dialogs;
  j["total_turns"] = total_turns;
  j["evaluated_turns"] = evaluated_turns;
  j["skipped_turns"] = skipped_turns;
  nlohmann::ordered_json per_slot = nlohmann::ordered_json::object();
  for (const auto& s : slots) per_slot[s.slot] = {{"accuracy", s.accuracy}, {"l2", s.l2}};
  j["slots"] = std::move(per_slot);
  j["config"] = config;
  return j;
}

std::string EvaluationReport::ToText() const {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof(line), "schedule        %s\n", ScheduleName(schedule).c_str());
  out << line;
  std::snprintf(line, sizeof(line), "dialogs         %zu\nturns           %zu evaluated, %zu skipped\n",
                dialogs, evaluated_turns, skipped_turns);
  out << line;
  std::snprintf(line, sizeof(line), "joint accuracy  %.4f\njoint l2        %.4f\n", joint_accuracy,
                joint_l2);
  out << line;
  for (const auto& s : slots) {
    std::snprintf(line, sizeof(line), "  %-12s  accuracy %.4f  l2 %.4f\n", s.slot.c_str(),
                  s.accuracy, s.l2);
    out << line;
  }
  return out.str();
}

}  // namespace hdst
