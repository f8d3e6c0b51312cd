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

#include "hdst/data/preprocess.h"

#include <algorithm>
#include <set>

namespace hdst {

bool IsExplicitConfirm(const DialogAct& act) {
  return (act.act == "confirm" || act.act == "expl-conf") && !act.slot.empty() &&
         !act.value.empty();
}

std::vector<DialogAct> AffirmToInform(const std::vector<DialogAct>& user_acts,
                                      const std::vector<DialogAct>& machine_acts) {
  std::vector<DialogAct> out;
  for (const auto& act : user_acts) {
    if (act.act != "affirm") {
      out.push_back(act);
      continue;
    }
    for (const auto& m : machine_acts) {
      if (IsExplicitConfirm(m)) out.push_back({"inform", m.slot, m.value});
    }
  }
  return out;
}

std::map<std::string, double> BuildInformDistribution(const std::vector<SluHypothesis>& live_slu,
                                                      const std::vector<DialogAct>& machine_acts,
                                                      const std::string& slot) {
  std::map<std::string, double> weights;
  for (const auto& hyp : live_slu) {
    std::set<std::string> informed;
    for (const auto& act : AffirmToInform(hyp.acts, machine_acts)) {
      if (act.act == "inform" && act.slot == slot && !act.value.empty()) informed.insert(act.value);
    }
    for (const auto& v : informed) weights[v] += hyp.probability;
  }
  for (auto& [v, w] : weights) w = std::min(w, 1.0);
  return weights;
}

std::string SemanticTarget(const std::vector<DialogAct>& semantics,
                           const std::vector<DialogAct>& machine_acts, const std::string& slot,
                           bool* conflict) {
  std::string target = kNoneValue;
  bool clash = false;
  for (const auto& act : AffirmToInform(semantics, machine_acts)) {
    if (act.act != "inform" || act.slot != slot || act.value.empty()) continue;
    if (target != kNoneValue && target != act.value) clash = true;
    target = act.value;
  }
  if (conflict) *conflict = clash;
  return target;
}

}  // namespace hdst
