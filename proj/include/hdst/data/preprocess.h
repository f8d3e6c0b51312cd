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

#ifndef HDST_DATA_PREPROCESS_H_
#define HDST_DATA_PREPROCESS_H_

#include <map>
#include <string>
#include <vector>

#include "hdst/data/dialog.h"

namespace hdst {

// True for machine acts that explicitly confirm a slot value
// (`confirm` and DSTC2's `expl-conf`).
bool IsExplicitConfirm(const DialogAct& act);

// Replaces every affirm() by inform(s=v) for each (s, v) the machine
// explicitly confirmed in the same turn. An affirm with nothing to bind to is
// dropped. All other acts pass through unchanged, so the transform is
// idempotent.
std::vector<DialogAct> AffirmToInform(const std::vector<DialogAct>& user_acts,
                                      const std::vector<DialogAct>& machine_acts);

// Weight of value v = total probability of the SLU hypotheses that inform
// slot=v after affirm normalization, capped at 1. Values without weight are
// absent from the map.
std::map<std::string, double> BuildInformDistribution(const std::vector<SluHypothesis>& live_slu,
                                                      const std::vector<DialogAct>& machine_acts,
                                                      const std::string& slot);

// Value the user informed for `slot` in the (normalized) semantic
// annotation, or None. With several distinct values the last one wins and
// `conflict` is set.
std::string SemanticTarget(const std::vector<DialogAct>& semantics,
                           const std::vector<DialogAct>& machine_acts, const std::string& slot,
                           bool* conflict = nullptr);

}  // namespace hdst

#endif  // HDST_DATA_PREPROCESS_H_
