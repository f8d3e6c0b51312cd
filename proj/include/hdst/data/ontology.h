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

#ifndef HDST_DATA_ONTOLOGY_H_
#define HDST_DATA_ONTOLOGY_H_

#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace hdst {

// Informable slots and their values. `dontcare` and None are reserved and
// never stored in the value lists.
class Ontology {
 public:
  Ontology() = default;
  // Throws ConfigError on empty or duplicated value lists or reserved names.
  explicit Ontology(std::map<std::string, std::vector<std::string>> values);

  std::vector<std::string> slots() const;
  bool HasSlot(const std::string& slot) const { return values_.count(slot) > 0; }
  const std::vector<std::string>& values(const std::string& slot) const;
  bool HasValue(const std::string& slot, const std::string& value) const;

  // {"informable": {slot: [values...]}}; a `dontcare` entry in the input
  // lists is dropped since it is always implied.
  static Ontology FromJson(const nlohmann::json& doc);
  nlohmann::json ToJson() const;
  static Ontology Load(const std::string& path);
  void Save(const std::string& path) const;

  bool operator==(const Ontology&) const = default;

 private:
  std::map<std::string, std::vector<std::string>> values_;
};

}  // namespace hdst

#endif  // HDST_DATA_ONTOLOGY_H_
