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


#ifndef HDST_CLI_CLI_H_
#define HDST_CLI_CLI_H_

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hdst/data/synthetic.h"
#include "hdst/evaluation/metrics.h"
#include "hdst/features/encoder.h"
#include "hdst/training/trainer.h"
#include "json.hpp"

namespace hdst::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitDataError = 2,
  kExitThreshold = 3,
};

// Corpus locations in the DSTC2 layout. Session lists name directories
// relative to `root`.
struct DataPaths {
  std::string root;
  std::string train;
  std::string dev;
  std::string test;
  std::string ontology;

  // The layout written by gen-synthetic into `dir`.
  static DataPaths SyntheticLayout(const std::string& dir);
  // Session list of a split name: train, dev or test.
  const std::string& List(const std::string& split) const;
};

struct EnsembleSettings {
  size_t members = 10;
  size_t keep = 10;
  std::string weighting = "uniform";
};

// Synthetic generation settings; `corpus.num_dialogs` is the train size.
struct SyntheticSettings {
  SyntheticConfig corpus;
  size_t dev_dialogs = 30;
  size_t test_dialogs = 30;
};

// Everything a run depends on. Loaded from a JSON file; flags override.
struct RunConfig {
  DataPaths data;
  std::string output_dir = "run";
  FeatureConfig features;
  TrainingConfig training;
  EnsembleSettings ensemble;
  Schedule schedule = Schedule::kAllTurns;
  SyntheticSettings synthetic;

  // Relative paths in `doc` resolve against `base_dir`. Unknown keys are
  // rejected with ConfigError.
  static RunConfig FromJson(const nlohmann::json& doc, const std::string& base_dir = "");
  static RunConfig Load(const std::string& path);
  // The resolved config embedded in artifacts. Leaves out the output
  // directory and the thread count, which do not affect results.
  nlohmann::ordered_json ToJson() const;
};

// Output directory layout.
struct RunLayout {
  std::string root;

  std::string vocab_dir() const;
  std::string models_dir() const;
  std::string logs_dir() const;
  std::string reports_dir() const;
  std::string turn_vocab() const;
  std::string value_vocab() const;
  std::string vocab_manifest() const;
  std::string incomplete_marker() const;
};

// Rebuilds the encoder stored by build-vocab in `vocab_dir`.
FeatureEncoder LoadEncoder(const std::string& vocab_dir);

// Entry point of the command-line tool. Returns an ExitCode.
int Run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hdst::cli

#endif  // HDST_CLI_CLI_H_
