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

#ifndef HDST_TRAINING_TRAINER_H_
#define HDST_TRAINING_TRAINER_H_

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "hdst/autodiff/adadelta.h"
#include "hdst/autodiff/tape.h"
#include "hdst/data/dialog.h"
#include "hdst/evaluation/metrics.h"
#include "hdst/features/encoder.h"
#include "hdst/tracker/tracker.h"
#include "json.hpp"

namespace hdst {

struct TrainingConfig {
  size_t epochs = 30;
  size_t batch_size = 16;
  uint64_t seed = 1;
  double init_scale = 0.1;
  AdaDeltaConfig optimizer;
  TrackerConfig tracker;
  std::vector<std::string> slots = {"food", "pricerange", "area"};
  Schedule dev_schedule = Schedule::kAllTurns;
  size_t jobs = 1;  // worker threads for gradient accumulation

  nlohmann::json ToJson() const;
  static TrainingConfig FromJson(const nlohmann::json& json);
  // Throws ConfigError.
  void Validate() const;
};

struct LossBreakdown {
  double tracking = 0.0;
  double slu = 0.0;
  double total() const { return tracking + slu; }
};

struct DialogLossVars {
  Var total;
  LossBreakdown values;
};

// Sum over turns and tracked slots of CE(h, goal) + CE(u, semantic target).
// Throws ContractViolation for unlabelled turns.
DialogLossVars BuildDialogLoss(Tape& tape, const TrackerModel& model, const EncodedDialog& dialog);
LossBreakdown DialogLoss(const TrackerModel& model, const EncodedDialog& dialog);

// Gradient of the summed loss of `dialogs`, each computed separately and
// added in order, so the result does not depend on `jobs`. Returns the
// summed loss.
double AccumulateGradients(const TrackerModel& model, std::span<const EncodedDialog* const> dialogs,
                           GradientSet& grads, size_t jobs = 1);

// A fresh model for the encoder's tracked slots, initialized uniformly from
// the config seed. Slots of the ontology that are not tracked stay fixed at
// None.
TrackerModel CreateModel(const FeatureEncoder& encoder, const TrainingConfig& config);

std::vector<DialogBeliefs> PredictCorpus(const TrackerModel& model,
                                         std::span<const EncodedDialog> dialogs, size_t jobs = 1);

struct EpochMetrics {
  size_t epoch = 0;
  double train_loss = 0.0;  // mean per dialog
  double dev_accuracy = 0.0;
  double dev_l2 = 0.0;
  double wall_time = 0.0;  // seconds since training started

  nlohmann::ordered_json ToJson() const;
};

struct TrainingResult {
  TrackerModel model;  // best epoch
  size_t best_epoch = 0;
  std::vector<EpochMetrics> metrics;  // epoch 0 is the initialization
};

// Called after every epoch with its metrics.
using EpochCallback = std::function<void(const EpochMetrics&)>;

// Shuffles the training dialogs every epoch, applies one AdaDelta step per
// batch and keeps the parameters of the epoch with the best dev accuracy
// (ties go to the later epoch). Throws DivergenceError naming the parameter
// that became non-finite.
TrainingResult Train(const FeatureEncoder& encoder, const std::vector<EncodedDialog>& train,
                     const std::vector<EncodedDialog>& dev, const Corpus& dev_labels,
                     const TrainingConfig& config, const EpochCallback& on_epoch = nullptr);

}  // namespace hdst

#endif  // HDST_TRAINING_TRAINER_H_
