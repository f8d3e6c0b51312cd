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

#ifndef HDST_DATA_CANDIDATES_H_
#define HDST_DATA_CANDIDATES_H_

#include <map>
#include <string>
#include <vector>

#include "hdst/data/ontology.h"

namespace hdst {

// Values a slot's distributions range over: the ontology values in ontology
// order, then dontcare, then None last.
class CandidateSet {
 public:
  CandidateSet() = default;
  CandidateSet(std::string slot, const std::vector<std::string>& values);
  CandidateSet(const Ontology& ontology, const std::string& slot);

  const std::string& slot() const { return slot_; }
  const std::vector<std::string>& values() const { return values_; }
  size_t size() const { return values_.size(); }
  const std::string& value(size_t index) const { return values_.at(index); }
  size_t none_index() const { return values_.size() - 1; }
  size_t dontcare_index() const { return values_.size() - 2; }

  bool Contains(const std::string& value) const { return index_.count(value) > 0; }
  // Throws ContractViolation for a value outside the set.
  size_t Index(const std::string& value) const;

  bool operator==(const CandidateSet& other) const {
    return slot_ == other.slot_ && values_ == other.values_;
  }

 private:
  std::string slot_;
  std::vector<std::string> values_;
  std::map<std::string, size_t> index_;
};

}  // namespace hdst

#endif  // HDST_DATA_CANDIDATES_H_
