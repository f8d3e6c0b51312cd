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


#include "hdst/training/artifacts.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hdst/common/errors.h"

namespace hdst {
namespace {

constexpr const char* kModelFormat = "hdst-model";
constexpr const char* kEnsembleFormat = "hdst-ensemble";

nlohmann::ordered_json CandidatesToJson(const std::vector<CandidateSet>& sets) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& c : sets) {
    nlohmann::ordered_json entry;
    entry["slot"] = c.slot();
    entry["candidates"] = c.values();
    out.push_back(std::move(entry));
  }
  return out;
}

std::vector<CandidateSet> CandidatesFromJson(const nlohmann::json& doc) {
  std::vector<CandidateSet> out;
  for (const auto& entry : doc) {
    auto all = entry.at("candidates").get<std::vector<std::string>>();
    if (all.size() < 3 || all[all.size() - 2] != "dontcare" || all.back() != "None") {
      throw VersionError("malformed candidate set for slot " +
                         entry.at("slot").get<std::string>());
    }
    all.resize(all.size() - 2);
    out.emplace_back(entry.at("slot").get<std::string>(), all);
  }
  return out;
}

void CheckFormat(const nlohmann::json& doc, const char* format) {
  if (!doc.is_object() || doc.value("format", "") != format) {
    throw VersionError(std::string("not a ") + format + " document");
  }
  const int version = doc.value("format_version", -1);
  if (version != kArtifactFormatVersion) {
    throw VersionError(std::string("unsupported ") + format + " version " + std::to_string(version));
  }
}

nlohmann::json ReadJson(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot read " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw LoadError(path + ": " + e.what());
  }
}

}  // namespace

void WriteFileAtomically(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw LoadError("cannot write " + path);
    out << content;
    if (!out) throw LoadError("failed writing " + path);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw LoadError("cannot rename " + tmp + ": " + ec.message());
}

ModelArtifact MakeModelArtifact(const TrackerModel& model, const FeatureEncoder& encoder,
                                const nlohmann::json& config) {
  if (model.tracked() != encoder.candidate_sets()) {
    throw ContractViolation("model and encoder disagree on candidate sets");
  }
  return ModelArtifact{model, encoder.VocabularyHash(), encoder.ontology(), encoder.config(),
                       config};
}

nlohmann::ordered_json ModelArtifactToJson(const ModelArtifact& artifact) {
  const TrackerModel& m = artifact.model;
  nlohmann::ordered_json doc;
  doc["format"] = kModelFormat;
  doc["format_version"] = kArtifactFormatVersion;
  doc["vocabulary_hash"] = artifact.vocabulary_hash;
  doc["config"] = artifact.config;
  doc["ontology"] = artifact.ontology.ToJson();
  doc["features"] = artifact.features.ToJson();
  doc["tracker"] = m.config().ToJson();
  doc["tracked"] = CandidatesToJson(m.tracked());
  doc["fixed"] = CandidatesToJson(m.fixed());
  doc["turn_dim"] = m.turn_dim();
  doc["value_dim"] = m.value_dim();
  doc["parameters"] = m.params().ToJson();
  return doc;
}

ModelArtifact ModelArtifactFromJson(const nlohmann::json& doc) {
  CheckFormat(doc, kModelFormat);
  try {
    TrackerModel model(TrackerConfig::FromJson(doc.at("tracker")),
                       CandidatesFromJson(doc.at("tracked")), CandidatesFromJson(doc.at("fixed")),
                       doc.at("turn_dim").get<size_t>(), doc.at("value_dim").get<size_t>());
    model.params().LoadValues(doc.at("parameters"));
    return ModelArtifact{std::move(model), doc.at("vocabulary_hash").get<std::string>(),
                         Ontology::FromJson(doc.at("ontology")),
                         FeatureConfig::FromJson(doc.at("features")), doc.at("config")};
  } catch (const nlohmann::json::exception& e) {
    throw VersionError(std::string("malformed model artifact: ") + e.what());
  }
}

void SaveModelArtifact(const std::string& path, const ModelArtifact& artifact) {
  WriteFileAtomically(path, ModelArtifactToJson(artifact).dump(1) + "\n");
}

ModelArtifact LoadModelArtifact(const std::string& path) {
  try {
    return ModelArtifactFromJson(ReadJson(path));
  } catch (const VersionError& e) {
    throw VersionError(path + ": " + e.what());
  }
}

nlohmann::ordered_json EnsembleManifest::ToJson() const {
  nlohmann::ordered_json doc;
  doc["format"] = kEnsembleFormat;
  doc["format_version"] = kArtifactFormatVersion;
  doc["vocabulary_hash"] = vocabulary_hash;
  doc["weighting"] = weighting;
  doc["config"] = config;
  doc["members"] = nlohmann::ordered_json::array();
  for (const auto& m : members) {
    nlohmann::ordered_json entry;
    entry["file"] = m.file;
    entry["weight"] = m.weight;
    entry["seed"] = m.seed;
    entry["dev_accuracy"] = m.dev_accuracy;
    entry["dev_l2"] = m.dev_l2;
    entry["best_epoch"] = m.best_epoch;
    doc["members"].push_back(std::move(entry));
  }
  doc["trained"] = nlohmann::ordered_json::array();
  for (const auto& m : candidates) {
    nlohmann::ordered_json entry;
    entry["seed"] = m.seed;
    entry["dev_accuracy"] = m.dev_accuracy;
    entry["dev_l2"] = m.dev_l2;
    entry["best_epoch"] = m.best_epoch;
    doc["trained"].push_back(std::move(entry));
  }
  return doc;
}

EnsembleManifest EnsembleManifest::FromJson(const nlohmann::json& doc) {
  CheckFormat(doc, kEnsembleFormat);
  EnsembleManifest out;
  try {
    out.vocabulary_hash = doc.at("vocabulary_hash").get<std::string>();
    out.weighting = doc.at("weighting").get<std::string>();
    out.config = doc.at("config");
    for (const auto& e : doc.at("members")) {
      out.members.push_back({e.at("file").get<std::string>(), e.at("weight").get<double>(),
                             e.at("seed").get<uint64_t>(), e.at("dev_accuracy").get<double>(),
                             e.at("dev_l2").get<double>(), e.at("best_epoch").get<size_t>()});
    }
    for (const auto& e : doc.value("trained", nlohmann::json::array())) {
      out.candidates.push_back({e.at("seed").get<uint64_t>(), e.at("dev_accuracy").get<double>(),
                                e.at("dev_l2").get<double>(), e.at("best_epoch").get<size_t>(),
                                {}});
    }
  } catch (const nlohmann::json::exception& e) {
    throw VersionError(std::string("malformed ensemble manifest: ") + e.what());
  }
  if (out.members.empty()) throw VersionError("ensemble manifest lists no members");
  return out;
}

void SaveEnsembleManifest(const std::string& path, const EnsembleManifest& manifest) {
  WriteFileAtomically(path, manifest.ToJson().dump(1) + "\n");
}

EnsembleManifest LoadEnsembleManifest(const std::string& path) {
  return EnsembleManifest::FromJson(ReadJson(path));
}

std::vector<DialogBeliefs> Predictor::Predict(std::span<const EncodedDialog> dialogs,
                                              size_t jobs) const {
  if (members.size() == 1) return PredictCorpus(members.front().model, dialogs, jobs);
  std::vector<TrackerModel> models;
  for (const auto& m : members) models.push_back(m.model);
  return EnsemblePredict(models, weights, dialogs, jobs);
}

Predictor LoadPredictor(const std::string& path) {
  const nlohmann::json doc = ReadJson(path);
  Predictor out;
  if (doc.is_object() && doc.value("format", "") == kEnsembleFormat) {
    const EnsembleManifest manifest = EnsembleManifest::FromJson(doc);
    const std::filesystem::path dir = std::filesystem::path(path).parent_path();
    for (const auto& m : manifest.members) {
      out.members.push_back(LoadModelArtifact((dir / m.file).string()));
      out.weights.push_back(m.weight);
      const ModelArtifact& loaded = out.members.back();
      if (loaded.vocabulary_hash != manifest.vocabulary_hash) {
        throw VersionError("ensemble member " + m.file + " has vocabulary hash " +
                           loaded.vocabulary_hash + ", manifest expects " +
                           manifest.vocabulary_hash);
      }
      if (loaded.model.tracked() != out.members.front().model.tracked()) {
        throw VersionError("ensemble member " + m.file + " has different candidate sets");
      }
    }
    return out;
  }
  try {
    out.members.push_back(ModelArtifactFromJson(doc));
  } catch (const VersionError& e) {
    throw VersionError(path + ": " + e.what());
  }
  out.weights = {1.0};
  return out;
}

void CheckEncoderCompatible(const ModelArtifact& artifact, const FeatureEncoder& encoder) {
  if (artifact.vocabulary_hash != encoder.VocabularyHash()) {
    throw VersionError("vocabulary hash mismatch: model expects " + artifact.vocabulary_hash +
                       ", vocabulary files hash to " + encoder.VocabularyHash());
  }
  if (artifact.model.tracked() != encoder.candidate_sets()) {
    throw VersionError("candidate sets of the model and the data ontology differ");
  }
}

}  // namespace hdst
