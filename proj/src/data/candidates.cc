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

#include "hdst/data/candidates.h"

#include "hdst/common/errors.h"
#include "hdst/data/dialog.h"

namespace hdst {

CandidateSet::CandidateSet(std::string slot, const std::vector<std::string>& values)
    : slot_(std::move(slot)), values_(values) {
  values_.push_back(kDontCare);
  values_.push_back(kNoneValue);
  for (size_t i = 0; i < values_.size(); ++i) {
    if (!index_.emplace(values_[i], i).second) {
      throw ContractViolation("duplicate candidate '" + values_[i] + "' for slot " + slot_);
    }
  }
}

CandidateSet::CandidateSet(const Ontology& ontology, const std::string& slot)
    : CandidateSet(slot, ontology.values(slot)) {}

size_t CandidateSet::Index(const std::string& value) const {
  auto it = index_.find(value);
  if (it == index_.end()) {
    throw ContractViolation("value '" + value + "' is not a candidate for slot " + slot_);
  }
  return it->second;
}

}  // namespace hdst
