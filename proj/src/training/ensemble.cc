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

#include "hdst/training/ensemble.h"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <optional>
#include <thread>

#include "hdst/common/errors.h"

namespace hdst {
namespace {

void CheckWeights(std::span<const double> weights, size_t members) {
  if (weights.size() != members || members == 0) {
    throw ContractViolation("need one weight per ensemble member");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw ContractViolation("ensemble weights must be non-negative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) throw ContractViolation("ensemble weights must sum to 1");
}

struct Score {
  double accuracy;
  double l2;
  bool BetterThan(const Score& other) const {
    if (accuracy != other.accuracy) return accuracy > other.accuracy;
    return l2 < other.l2;
  }
};

Score ScoreWeights(const std::vector<std::vector<DialogBeliefs>>& predictions,
                   std::span<const double> weights, const Corpus& labels, Schedule schedule) {
  std::vector<DialogBeliefs> averaged;
  std::vector<DialogBeliefs> members(predictions.size());
  for (size_t d = 0; d < labels.size(); ++d) {
    for (size_t m = 0; m < predictions.size(); ++m) members[m] = predictions[m][d];
    averaged.push_back(AverageBeliefs(members, weights));
  }
  const auto turns = CollectPredictions(averaged, labels, schedule);
  return {JointAccuracy(turns), JointL2(turns)};
}

// Weight vectors with entries in tenths summing to 10, as fractions.
void EnumerateGrid(size_t members, size_t remaining, std::vector<int>& current,
                   std::vector<std::vector<double>>& out) {
  if (current.size() + 1 == members) {
    current.push_back(static_cast<int>(remaining));
    std::vector<double> w;
    for (int c : current) w.push_back(c / 10.0);
    out.push_back(std::move(w));
    current.pop_back();
    return;
  }
  for (size_t c = 0; c <= remaining; ++c) {
    current.push_back(static_cast<int>(c));
    EnumerateGrid(members, remaining - c, current, out);
    current.pop_back();
  }
}

}  // namespace

DialogBeliefs AverageBeliefs(std::span<const DialogBeliefs> members, std::span<const double> weights) {
  CheckWeights(weights, members.size());
  DialogBeliefs out = members.front();
  for (size_t m = 1; m < members.size(); ++m) {
    const DialogBeliefs& b = members[m];
    if (b.num_turns != out.num_turns || b.slots.size() != out.slots.size()) {
      throw ContractViolation("ensemble members disagree on dialog shape");
    }
    for (size_t s = 0; s < b.slots.size(); ++s) {
      if (b.slots[s].slot != out.slots[s].slot || b.slots[s].candidates != out.slots[s].candidates) {
        throw ContractViolation("ensemble members disagree on the candidates of slot " +
                                out.slots[s].slot);
      }
    }
  }
  for (size_t s = 0; s < out.slots.size(); ++s) {
    auto average = [&](auto field) {
      auto& target = out.slots[s].*field;
      for (size_t t = 0; t < target.size(); ++t) {
        std::vector<double> sum(target[t].size(), 0.0);
        for (size_t m = 0; m < members.size(); ++m) {
          const auto& p = (members[m].slots[s].*field)[t];
          for (size_t k = 0; k < sum.size(); ++k) sum[k] += weights[m] * p[k];
        }
        double total = 0.0;
        for (double x : sum) total += x;
        if (total > 0.0) {
          for (double& x : sum) x /= total;
        }
        target[t] = std::move(sum);
      }
    };
    average(&SlotBeliefs::beliefs);
    bool all_have_slu = true;
    for (const auto& m : members) all_have_slu &= m.slots[s].slu.size() == out.slots[s].slu.size();
    if (all_have_slu) {
      average(&SlotBeliefs::slu);
    } else {
      out.slots[s].slu.clear();
    }
  }
  return out;
}

std::vector<DialogBeliefs> EnsemblePredict(std::span<const TrackerModel> models,
                                           std::span<const double> weights,
                                           std::span<const EncodedDialog> dialogs, size_t jobs) {
  CheckWeights(weights, models.size());
  std::vector<std::vector<DialogBeliefs>> per_model;
  for (const auto& model : models) per_model.push_back(PredictCorpus(model, dialogs, jobs));
  std::vector<DialogBeliefs> out;
  std::vector<DialogBeliefs> members(models.size());
  for (size_t d = 0; d < dialogs.size(); ++d) {
    for (size_t m = 0; m < models.size(); ++m) members[m] = per_model[m][d];
    out.push_back(AverageBeliefs(members, weights));
  }
  return out;
}

std::vector<double> FitEnsembleWeights(const std::vector<std::vector<DialogBeliefs>>& predictions,
                                       const Corpus& labels, Schedule schedule) {
  const size_t n = predictions.size();
  if (n == 0) throw ContractViolation("no ensemble members to weight");
  if (n == 1) return {1.0};
  std::vector<double> best(n, 1.0 / static_cast<double>(n));
  Score best_score = ScoreWeights(predictions, best, labels, schedule);
  if (n <= 3) {
    std::vector<std::vector<double>> grid;
    std::vector<int> current;
    EnumerateGrid(n, 10, current, grid);
    for (const auto& w : grid) {
      const Score s = ScoreWeights(predictions, w, labels, schedule);
      if (s.BetterThan(best_score)) {
        best_score = s;
        best = w;
      }
    }
    return best;
  }
  // Coordinate ascent: move 0.1 of mass between pairs of members while that
  // improves the score.
  bool improved = true;
  for (int round = 0; improved && round < 100; ++round) {
    improved = false;
    for (size_t to = 0; to < n; ++to) {
      for (size_t from = 0; from < n; ++from) {
        if (from == to || best[from] < 0.1 - 1e-12) continue;
        std::vector<double> w = best;
        w[from] = std::max(0.0, w[from] - 0.1);
        w[to] += best[from] - w[from];
        const Score s = ScoreWeights(predictions, w, labels, schedule);
        if (s.BetterThan(best_score)) {
          best_score = s;
          best = std::move(w);
          improved = true;
        }
      }
    }
  }
  return best;
}

EnsembleResult TrainEnsemble(const FeatureEncoder& encoder, const std::vector<EncodedDialog>& train,
                             const std::vector<EncodedDialog>& dev, const Corpus& dev_labels,
                             const TrainingConfig& base, size_t num_members, size_t keep,
                             EnsembleWeighting weighting, size_t jobs) {
  if (keep == 0 || num_members < keep) {
    throw ConfigError("ensemble needs 0 < keep <= num_members");
  }
  std::vector<std::optional<TrainingResult>> results(num_members);
  std::vector<std::exception_ptr> errors(num_members);
  jobs = std::max<size_t>(1, std::min(jobs, num_members));
  auto run = [&](size_t m) {
    try {
      TrainingConfig config = base;
      config.seed = base.seed + m;
      config.jobs = 1;
      results[m] = Train(encoder, train, dev, dev_labels, config);
    } catch (...) {
      errors[m] = std::current_exception();
    }
  };
  std::vector<std::thread> workers;
  for (size_t w = 0; w < jobs; ++w) {
    workers.emplace_back([&, w] {
      for (size_t m = w; m < num_members; m += jobs) run(m);
    });
  }
  for (auto& t : workers) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  EnsembleResult out;
  for (size_t m = 0; m < num_members; ++m) {
    const auto& best = results[m]->metrics[results[m]->best_epoch];
    out.all.push_back({base.seed + m, best.dev_accuracy, best.dev_l2, results[m]->best_epoch,
                       results[m]->metrics});
  }
  std::vector<size_t> ranking(num_members);
  for (size_t m = 0; m < num_members; ++m) ranking[m] = m;
  std::stable_sort(ranking.begin(), ranking.end(), [&](size_t a, size_t b) {
    if (out.all[a].dev_accuracy != out.all[b].dev_accuracy) {
      return out.all[a].dev_accuracy > out.all[b].dev_accuracy;
    }
    return out.all[a].dev_l2 < out.all[b].dev_l2;
  });
  for (size_t r = 0; r < keep; ++r) {
    out.models.push_back(results[ranking[r]]->model);
    out.kept.push_back(out.all[ranking[r]]);
  }
  out.weights.assign(keep, 1.0 / static_cast<double>(keep));
  if (weighting == EnsembleWeighting::kFitted) {
    std::vector<std::vector<DialogBeliefs>> predictions;
    for (const auto& model : out.models) predictions.push_back(PredictCorpus(model, dev));
    out.weights = FitEnsembleWeights(predictions, dev_labels, base.dev_schedule);
  }
  return out;
}

}  // namespace hdst
