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

#include "hdst/data/ontology.h"

#include <algorithm>
#include <fstream>
#include <set>

#include "hdst/common/errors.h"
#include "hdst/data/dialog.h"

namespace hdst {

Ontology::Ontology(std::map<std::string, std::vector<std::string>> values)
    : values_(std::move(values)) {
  for (const auto& [slot, list] : values_) {
    if (list.empty()) throw ConfigError("ontology slot '" + slot + "' has no values");
    std::set<std::string> seen;
    for (const auto& v : list) {
      if (v == kNoneValue || v == kDontCare) {
        throw ConfigError("ontology slot '" + slot + "' lists reserved value '" + v + "'");
      }
      if (!seen.insert(v).second) {
        throw ConfigError("ontology slot '" + slot + "' lists '" + v + "' twice");
      }
    }
  }
}

std::vector<std::string> Ontology::slots() const {
  std::vector<std::string> out;
  for (const auto& [slot, list] : values_) out.push_back(slot);
  return out;
}

const std::vector<std::string>& Ontology::values(const std::string& slot) const {
  auto it = values_.find(slot);
  if (it == values_.end()) throw ContractViolation("unknown slot '" + slot + "'");
  return it->second;
}

bool Ontology::HasValue(const std::string& slot, const std::string& value) const {
  auto it = values_.find(slot);
  if (it == values_.end()) return false;
  return std::find(it->second.begin(), it->second.end(), value) != it->second.end();
}

Ontology Ontology::FromJson(const nlohmann::json& doc) {
  if (!doc.contains("informable") || !doc.at("informable").is_object()) {
    throw LoadError("ontology document lacks an 'informable' object");
  }
  std::map<std::string, std::vector<std::string>> values;
  for (const auto& [slot, list] : doc.at("informable").items()) {
    std::vector<std::string> kept;
    for (const auto& v : list) {
      const std::string s = v.get<std::string>();
      if (s != kDontCare) kept.push_back(s);
    }
    values.emplace(slot, std::move(kept));
  }
  return Ontology(std::move(values));
}

nlohmann::json Ontology::ToJson() const {
  return {{"informable", values_}};
}

Ontology Ontology::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open ontology file " + path);
  try {
    return FromJson(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw LoadError("malformed ontology file " + path + ": " + e.what());
  }
}

void Ontology::Save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw LoadError("cannot write ontology file " + path);
  out << ToJson().dump(2) << "\n";
}

}  // namespace hdst
