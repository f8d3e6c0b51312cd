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

#include "hdst/training/trainer.h"

#include <chrono>
#include <cmath>
#include <numeric>
#include <thread>

#include "hdst/common/errors.h"
#include "hdst/common/random.h"

namespace hdst {
namespace {

void CheckFinite(const ParameterStore& params, const GradientSet& grads, size_t epoch) {
  for (size_t i = 0; i < params.count(); ++i) {
    const ParamId id{i};
    for (double g : grads[id]) {
      if (!std::isfinite(g)) {
        throw DivergenceError("gradient of parameter " + params.Name(id) +
                              " became non-finite in epoch " + std::to_string(epoch));
      }
    }
    for (double v : params.Get(id).values()) {
      if (!std::isfinite(v)) {
        throw DivergenceError("parameter " + params.Name(id) + " became non-finite in epoch " +
                              std::to_string(epoch));
      }
    }
  }
}

// Names the first parameter with a non-finite value or gradient, else the
// one with the largest magnitude.
std::string OffendingParameter(const ParameterStore& params, const GradientSet& grads) {
  std::string largest;
  double largest_value = -1.0;
  for (size_t i = 0; i < params.count(); ++i) {
    const ParamId id{i};
    for (double g : grads[id]) {
      if (!std::isfinite(g)) return params.Name(id);
    }
    for (double v : params.Get(id).values()) {
      if (!std::isfinite(v)) return params.Name(id);
      if (std::abs(v) > largest_value) {
        largest_value = std::abs(v);
        largest = params.Name(id);
      }
    }
  }
  return largest;
}

// Runs fn(index) for index in [0, n) over `jobs` threads.
template <typename Fn>
void ParallelFor(size_t n, size_t jobs, Fn fn) {
  jobs = std::max<size_t>(1, std::min(jobs, n));
  if (jobs == 1) {
    for (size_t i = 0; i < n; ++i) fn(i, 0);
    return;
  }
  std::vector<std::thread> workers;
  std::vector<std::exception_ptr> errors(jobs);
  for (size_t w = 0; w < jobs; ++w) {
    workers.emplace_back([&, w] {
      try {
        for (size_t i = w; i < n; i += jobs) fn(i, w);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : workers) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

nlohmann::json TrainingConfig::ToJson() const {
  return {{"epochs", epochs},
          {"batch_size", batch_size},
          {"seed", seed},
          {"init_scale", init_scale},
          {"rho", optimizer.rho},
          {"epsilon", optimizer.epsilon},
          {"tracker", tracker.ToJson()},
          {"slots", slots},
          {"dev_schedule", ScheduleName(dev_schedule)}};
}

TrainingConfig TrainingConfig::FromJson(const nlohmann::json& json) {
  TrainingConfig c;
  try {
    c.epochs = json.value("epochs", c.epochs);
    c.batch_size = json.value("batch_size", c.batch_size);
    c.seed = json.value("seed", c.seed);
    c.init_scale = json.value("init_scale", c.init_scale);
    c.optimizer.rho = json.value("rho", c.optimizer.rho);
    c.optimizer.epsilon = json.value("epsilon", c.optimizer.epsilon);
    if (json.contains("tracker")) c.tracker = TrackerConfig::FromJson(json.at("tracker"));
    c.slots = json.value("slots", c.slots);
    c.dev_schedule = ParseSchedule(json.value("dev_schedule", ScheduleName(c.dev_schedule)));
    c.jobs = json.value("jobs", c.jobs);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid training config: ") + e.what());
  }
  c.Validate();
  return c;
}

void TrainingConfig::Validate() const {
  if (batch_size < 1) throw ConfigError("batch_size must be at least 1");
  if (slots.empty()) throw ConfigError("no slots to train");
  if (!(init_scale >= 0.0)) throw ConfigError("init_scale must be non-negative");
  if (!(optimizer.rho > 0.0 && optimizer.rho < 1.0)) throw ConfigError("rho must be in (0, 1)");
  if (!(optimizer.epsilon > 0.0)) throw ConfigError("epsilon must be positive");
}

DialogLossVars BuildDialogLoss(Tape& tape, const TrackerModel& model, const EncodedDialog& dialog) {
  model.CheckCompatible(dialog);
  DialogLossVars out;
  std::vector<Var> terms;
  for (size_t s = 0; s < dialog.slots.size(); ++s) {
    const auto& turns = dialog.slots[s].turns;
    const auto outputs = model.Unroll(tape, dialog.slots[s], s);
    for (size_t t = 0; t < turns.size(); ++t) {
      if (turns[t].goal < 0 || turns[t].semantic < 0) {
        throw ContractViolation("dialog " + dialog.session_id + " has an unlabelled turn " +
                                std::to_string(t));
      }
      const Var tracking = SluLoss(tape, outputs[t].state.belief, static_cast<size_t>(turns[t].goal));
      const Var slu = SluLoss(tape, outputs[t].slu, static_cast<size_t>(turns[t].semantic));
      out.values.tracking += tape.scalar(tracking);
      out.values.slu += tape.scalar(slu);
      terms.push_back(tracking);
      terms.push_back(slu);
    }
  }
  out.total = terms.empty() ? tape.Scalar(0.0) : tape.Sum(tape.Concat(terms));
  return out;
}

LossBreakdown DialogLoss(const TrackerModel& model, const EncodedDialog& dialog) {
  Tape tape(&model.params());
  return BuildDialogLoss(tape, model, dialog).values;
}

double AccumulateGradients(const TrackerModel& model, std::span<const EncodedDialog* const> dialogs,
                           GradientSet& grads, size_t jobs) {
  const size_t n = dialogs.size();
  std::vector<GradientSet> per_dialog(n);
  std::vector<double> losses(n, 0.0);
  jobs = std::max<size_t>(1, std::min(jobs, n));
  std::vector<Tape> tapes;
  for (size_t w = 0; w < jobs; ++w) tapes.emplace_back(&model.params());
  ParallelFor(n, jobs, [&](size_t i, size_t w) {
    Tape& tape = tapes[w];
    tape.Clear();
    const DialogLossVars loss = BuildDialogLoss(tape, model, *dialogs[i]);
    per_dialog[i] = GradientSet(model.params());
    tape.Backward(loss.total, per_dialog[i]);
    losses[i] = loss.values.total();
  });
  double total = 0.0;
  for (size_t i = 0; i < n; ++i) {
    grads.Accumulate(per_dialog[i]);
    total += losses[i];
  }
  return total;
}

TrackerModel CreateModel(const FeatureEncoder& encoder, const TrainingConfig& config) {
  if (encoder.tracked_slots() != config.slots) {
    throw ConfigError("encoder and training config track different slots");
  }
  std::vector<CandidateSet> fixed;
  for (const auto& slot : encoder.ontology().slots()) {
    if (std::find(config.slots.begin(), config.slots.end(), slot) == config.slots.end()) {
      fixed.emplace_back(encoder.ontology(), slot);
    }
  }
  TrackerModel model(config.tracker, encoder.candidate_sets(), std::move(fixed),
                     std::max<size_t>(1, encoder.turn_vocabulary().size()),
                     std::max<size_t>(1, encoder.value_vocabulary().size()));
  Rng rng(config.seed);
  model.params().InitializeUniform(config.init_scale, rng);
  return model;
}

std::vector<DialogBeliefs> PredictCorpus(const TrackerModel& model,
                                         std::span<const EncodedDialog> dialogs, size_t jobs) {
  std::vector<DialogBeliefs> out(dialogs.size());
  ParallelFor(dialogs.size(), jobs, [&](size_t i, size_t) { out[i] = model.Track(dialogs[i]); });
  return out;
}

nlohmann::ordered_json EpochMetrics::ToJson() const {
  nlohmann::ordered_json j;
  j["epoch"] = epoch;
  j["train_loss"] = train_loss;
  j["dev_accuracy"] = dev_accuracy;
  j["dev_l2"] = dev_l2;
  j["wall_time"] = wall_time;
  return j;
}

TrainingResult Train(const FeatureEncoder& encoder, const std::vector<EncodedDialog>& train,
                     const std::vector<EncodedDialog>& dev, const Corpus& dev_labels,
                     const TrainingConfig& config, const EpochCallback& on_epoch) {
  config.Validate();
  if (train.empty() || dev.empty()) throw ContractViolation("training needs non-empty corpora");
  const auto start = std::chrono::steady_clock::now();
  TrackerModel model = CreateModel(encoder, config);
  AdaDeltaState optimizer(model.params(), config.optimizer);
  // Shuffling draws from its own stream so it does not shift with the
  // initialization.
  Rng shuffle_rng(config.seed ^ 0x9e3779b97f4a7c15ULL);

  auto evaluate = [&](size_t epoch, double train_loss) {
    EpochMetrics m;
    m.epoch = epoch;
    m.train_loss = train_loss;
    const auto beliefs = PredictCorpus(model, dev, config.jobs);
    const auto turns = CollectPredictions(beliefs, dev_labels, config.dev_schedule);
    m.dev_accuracy = JointAccuracy(turns);
    m.dev_l2 = JointL2(turns);
    m.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (on_epoch) on_epoch(m);
    return m;
  };

  GradientSet grads(model.params());
  size_t epoch = 0;
  try {
    double initial_loss = 0.0;
    {
      Tape tape(&model.params());
      for (const auto& d : train) {
        tape.Clear();
        initial_loss += BuildDialogLoss(tape, model, d).values.total();
      }
    }
    TrainingResult result{model, 0,
                          {evaluate(0, initial_loss / static_cast<double>(train.size()))}};

    std::vector<size_t> order(train.size());
    for (epoch = 1; epoch <= config.epochs; ++epoch) {
      std::iota(order.begin(), order.end(), size_t{0});
      shuffle_rng.Shuffle(order);
      double epoch_loss = 0.0;
      for (size_t begin = 0; begin < order.size(); begin += config.batch_size) {
        const size_t end = std::min(order.size(), begin + config.batch_size);
        std::vector<const EncodedDialog*> batch;
        for (size_t i = begin; i < end; ++i) batch.push_back(&train[order[i]]);
        grads.SetZero();
        epoch_loss += AccumulateGradients(model, batch, grads, config.jobs);
        CheckFinite(model.params(), grads, epoch);
        optimizer.Update(model.params(), grads);
      }
      CheckFinite(model.params(), grads, epoch);
      const EpochMetrics m = evaluate(epoch, epoch_loss / static_cast<double>(train.size()));
      result.metrics.push_back(m);
      if (m.dev_accuracy >= result.metrics[result.best_epoch].dev_accuracy) {
        result.best_epoch = epoch;
        result.model = model;
      }
    }
    return result;
  } catch (const NumericError& e) {
    throw DivergenceError("training diverged in epoch " + std::to_string(epoch) + " (" +
                          e.what() + "); offending parameter " +
                          OffendingParameter(model.params(), grads));
  }
}

}  // namespace hdst
