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


#ifndef HDST_TRAINING_ARTIFACTS_H_
#define HDST_TRAINING_ARTIFACTS_H_

#include <string>
#include <vector>

#include "hdst/data/ontology.h"
#include "hdst/features/encoder.h"
#include "hdst/tracker/tracker.h"
#include "hdst/training/ensemble.h"
#include "json.hpp"

namespace hdst {

inline constexpr int kArtifactFormatVersion = 1;

// A trained tracker together with what is needed to rebuild its encoder.
struct ModelArtifact {
  TrackerModel model;
  std::string vocabulary_hash;
  Ontology ontology;
  FeatureConfig features;
  nlohmann::json config;  // resolved run config, echoed verbatim
};

nlohmann::ordered_json ModelArtifactToJson(const ModelArtifact& artifact);
// Throws VersionError for unknown formats or inconsistent layouts.
ModelArtifact ModelArtifactFromJson(const nlohmann::json& doc);

ModelArtifact MakeModelArtifact(const TrackerModel& model, const FeatureEncoder& encoder,
                                const nlohmann::json& config);

// Throws LoadError when the file cannot be read or parsed.
void SaveModelArtifact(const std::string& path, const ModelArtifact& artifact);
ModelArtifact LoadModelArtifact(const std::string& path);

struct ManifestMember {
  std::string file;  // relative to the manifest
  double weight = 0.0;
  uint64_t seed = 0;
  double dev_accuracy = 0.0;
  double dev_l2 = 0.0;
  size_t best_epoch = 0;
};

struct EnsembleManifest {
  std::string vocabulary_hash;
  std::string weighting;  // "uniform" or "fitted"
  nlohmann::json config;
  std::vector<ManifestMember> members;    // kept members, best first
  std::vector<EnsembleMember> candidates;  // every trained member, metrics dropped

  nlohmann::ordered_json ToJson() const;
  static EnsembleManifest FromJson(const nlohmann::json& doc);
};

void SaveEnsembleManifest(const std::string& path, const EnsembleManifest& manifest);
EnsembleManifest LoadEnsembleManifest(const std::string& path);

// A single model or a weighted ensemble.
struct Predictor {
  std::vector<ModelArtifact> members;
  std::vector<double> weights;

  const ModelArtifact& primary() const { return members.front(); }
  std::vector<DialogBeliefs> Predict(std::span<const EncodedDialog> dialogs, size_t jobs = 1) const;
};

// Loads a model artifact or an ensemble manifest, told apart by their
// "format" field. Members of an ensemble must share vocabulary and
// candidate sets.
Predictor LoadPredictor(const std::string& path);

// Throws VersionError unless the encoder matches the artifact's vocabulary
// hash and candidate sets.
void CheckEncoderCompatible(const ModelArtifact& artifact, const FeatureEncoder& encoder);

// Writes `content` to `path` through a temporary file and a rename.
void WriteFileAtomically(const std::string& path, const std::string& content);

}  // namespace hdst

#endif  // HDST_TRAINING_ARTIFACTS_H_
