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

#ifndef HDST_TRAINING_ENSEMBLE_H_
#define HDST_TRAINING_ENSEMBLE_H_

#include <span>
#include <vector>

#include "hdst/training/trainer.h"

namespace hdst {

struct EnsembleMember {
  uint64_t seed = 0;
  double dev_accuracy = 0.0;
  double dev_l2 = 0.0;
  size_t best_epoch = 0;
  std::vector<EpochMetrics> metrics;
};

struct EnsembleResult {
  std::vector<TrackerModel> models;      // kept members, best first
  std::vector<EnsembleMember> kept;      // parallel to models
  std::vector<double> weights;           // parallel to models, sum 1
  std::vector<EnsembleMember> all;       // every trained member in seed order
};

enum class EnsembleWeighting { kUniform, kFitted };

// Trains `num_members` trackers with seeds base.seed, base.seed + 1, ...;
// keeps the `keep` best by dev accuracy (ties: lower dev L2, then lower
// seed). Members train in parallel over `jobs` threads. Fitted weights are
// chosen on the dev set.
EnsembleResult TrainEnsemble(const FeatureEncoder& encoder, const std::vector<EncodedDialog>& train,
                             const std::vector<EncodedDialog>& dev, const Corpus& dev_labels,
                             const TrainingConfig& base, size_t num_members, size_t keep,
                             EnsembleWeighting weighting = EnsembleWeighting::kUniform,
                             size_t jobs = 1);

// Weighted average of member beliefs, renormalized per distribution. Throws
// ContractViolation when members disagree on slots or candidates, or weights
// are negative or do not sum to 1.
DialogBeliefs AverageBeliefs(std::span<const DialogBeliefs> members, std::span<const double> weights);

std::vector<DialogBeliefs> EnsemblePredict(std::span<const TrackerModel> models,
                                           std::span<const double> weights,
                                           std::span<const EncodedDialog> dialogs, size_t jobs = 1);

// Non-negative weights summing to 1 that maximize joint accuracy (ties:
// lower joint L2) of the averaged predictions. predictions[m][d] is member
// m's output for dialog d. Exhaustive over the 0.1 simplex grid for up to 3
// members, coordinate ascent on the same grid otherwise.
std::vector<double> FitEnsembleWeights(const std::vector<std::vector<DialogBeliefs>>& predictions,
                                       const Corpus& labels, Schedule schedule);

}  // namespace hdst

#endif  // HDST_TRAINING_ENSEMBLE_H_
