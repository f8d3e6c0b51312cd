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

#include <cmath>

#include "gtest/gtest.h"
#include "hdst/common/errors.h"
#include "hdst/data/synthetic.h"
#include "hdst/features/encoder.h"
#include "hdst/training/ensemble.h"
#include "hdst/training/trainer.h"
#include "model_fixtures.h"

namespace hdst {
namespace {

class TrainingTest : public ::testing::Test {
 protected:
  void SetUpCorpus(size_t dialogs, uint64_t seed) {
    SyntheticConfig sc;
    sc.num_dialogs = dialogs;
    sc.seed = seed;
    synthetic_ = GenerateSyntheticCorpus(sc);
    config_.seed = 3;
    encoder_.emplace(FeatureEncoder::Build(synthetic_.dialogs, synthetic_.ontology, config_.slots,
                                           FeatureConfig{}));
    encoded_ = encoder_->EncodeCorpus(synthetic_.dialogs);
  }

  SyntheticCorpus synthetic_;
  TrainingConfig config_;
  std::optional<FeatureEncoder> encoder_;
  std::vector<EncodedDialog> encoded_;
};

TEST_F(TrainingTest, LossMatchesScriptedComputation) {
  SetUpCorpus(3, 21);
  TrackerModel model = CreateModel(*encoder_, config_);
  for (const auto& dialog : encoded_) {
    const DialogBeliefs beliefs = model.Track(dialog);
    double tracking = 0.0;
    double slu = 0.0;
    for (size_t s = 0; s < dialog.slots.size(); ++s) {
      for (size_t t = 0; t < dialog.num_turns; ++t) {
        tracking -= std::log(beliefs.slots[s].beliefs[t][dialog.slots[s].turns[t].goal]);
        slu -= std::log(beliefs.slots[s].slu[t][dialog.slots[s].turns[t].semantic]);
      }
    }
    const LossBreakdown loss = DialogLoss(model, dialog);
    EXPECT_NEAR(loss.tracking, tracking, 1e-9);
    EXPECT_NEAR(loss.slu, slu, 1e-9);
    EXPECT_NEAR(loss.total(), tracking + slu, 1e-9);
  }
}

TEST_F(TrainingTest, UniformSluOutputsGiveLogKPerTurn) {
  SetUpCorpus(2, 22);
  config_.init_scale = 0.0;
  TrackerModel model = CreateModel(*encoder_, config_);
  const EncodedDialog& d = encoded_[0];
  double expected = 0.0;
  for (size_t s = 0; s < d.slots.size(); ++s) {
    expected += static_cast<double>(d.num_turns) *
                std::log(static_cast<double>(model.tracked()[s].size()));
  }
  EXPECT_NEAR(DialogLoss(model, d).slu, expected, 1e-9);
}

TEST_F(TrainingTest, UnlabelledTurnsAreRejected) {
  SetUpCorpus(1, 23);
  TrackerModel model = CreateModel(*encoder_, config_);
  EncodedDialog d = encoded_[0];
  d.slots[0].turns[0].goal = -1;
  EXPECT_THROW(DialogLoss(model, d), ContractViolation);
}

TEST_F(TrainingTest, BatchOfCopiesScalesTheGradient) {
  SetUpCorpus(1, 24);
  TrackerModel model = CreateModel(*encoder_, config_);
  const EncodedDialog* one[] = {&encoded_[0]};
  GradientSet single(model.params());
  AccumulateGradients(model, one, single);
  for (size_t k : {2u, 3u, 16u}) {
    std::vector<const EncodedDialog*> copies(k, &encoded_[0]);
    GradientSet batch(model.params());
    AccumulateGradients(model, copies, batch, 2);
    for (size_t p = 0; p < model.params().count(); ++p) {
      const auto b = batch[ParamId{p}];
      const auto g = single[ParamId{p}];
      for (size_t i = 0; i < b.size(); ++i) {
        if (k <= 3) {
          EXPECT_EQ(b[i], static_cast<double>(k) * g[i]);
        } else {
          EXPECT_NEAR(b[i], static_cast<double>(k) * g[i], 1e-12 * std::abs(k * g[i]) + 1e-300);
        }
      }
    }
  }
}

TEST_F(TrainingTest, OverfitsASingleDialog) {
  SetUpCorpus(1, 25);
  config_.epochs = 40;
  const auto result = Train(*encoder_, encoded_, encoded_, synthetic_.dialogs, config_);
  size_t decreases = 0;
  for (size_t e = 1; e < result.metrics.size(); ++e) {
    decreases += result.metrics[e].train_loss < result.metrics[e - 1].train_loss ? 1 : 0;
  }
  EXPECT_GE(static_cast<double>(decreases), 0.9 * static_cast<double>(config_.epochs));
  EXPECT_EQ(result.metrics.back().dev_accuracy, 1.0);
}

TEST_F(TrainingTest, ZeroEpochsReturnsInitialization) {
  SetUpCorpus(2, 26);
  config_.epochs = 0;
  const auto result = Train(*encoder_, encoded_, encoded_, synthetic_.dialogs, config_);
  EXPECT_EQ(result.best_epoch, 0u);
  EXPECT_EQ(result.metrics.size(), 1u);
  EXPECT_TRUE(result.model.params() == CreateModel(*encoder_, config_).params());
}

TEST_F(TrainingTest, ReproducibleAndIndependentOfJobs) {
  SetUpCorpus(20, 27);
  config_.epochs = 3;
  config_.batch_size = 4;
  const auto a = Train(*encoder_, encoded_, encoded_, synthetic_.dialogs, config_);
  config_.jobs = 3;
  const auto b = Train(*encoder_, encoded_, encoded_, synthetic_.dialogs, config_);
  EXPECT_TRUE(a.model.params() == b.model.params());
  ASSERT_EQ(a.metrics.size(), b.metrics.size());
  for (size_t e = 0; e < a.metrics.size(); ++e) {
    EXPECT_EQ(a.metrics[e].train_loss, b.metrics[e].train_loss);
    EXPECT_EQ(a.metrics[e].dev_accuracy, b.metrics[e].dev_accuracy);
    EXPECT_EQ(a.metrics[e].dev_l2, b.metrics[e].dev_l2);
  }
}

TEST_F(TrainingTest, BestSnapshotDominatesTheLog) {
  SetUpCorpus(20, 28);
  config_.epochs = 6;
  const auto result = Train(*encoder_, encoded_, encoded_, synthetic_.dialogs, config_);
  const double best = result.metrics[result.best_epoch].dev_accuracy;
  for (const auto& m : result.metrics) EXPECT_GE(best, m.dev_accuracy);
  // The returned model is the snapshot of that epoch.
  const auto turns = CollectPredictions(PredictCorpus(result.model, encoded_), synthetic_.dialogs,
                                        Schedule::kAllTurns);
  EXPECT_EQ(JointAccuracy(turns), best);
}

TEST_F(TrainingTest, DivergenceNamesAParameter) {
  SetUpCorpus(2, 29);
  config_.init_scale = 1e200;
  config_.epochs = 1;
  try {
    Train(*encoder_, encoded_, encoded_, synthetic_.dialogs, config_);
    FAIL() << "expected DivergenceError";
  } catch (const DivergenceError& e) {
    EXPECT_NE(std::string(e.what()).find("parameter "), std::string::npos) << e.what();
  }
}

TEST(TrainingConfigTest, JsonRoundTripAndValidation) {
  TrainingConfig c;
  c.epochs = 7;
  c.tracker.cnew_case = CNewCase::kVjNone;
  EXPECT_EQ(TrainingConfig::FromJson(c.ToJson()).ToJson(), c.ToJson());
  EXPECT_THROW(TrainingConfig::FromJson({{"batch_size", 0}}), ConfigError);
  EXPECT_THROW(TrainingConfig::FromJson({{"rho", 1.0}}), ConfigError);
}

DialogBeliefs OneSlot(std::vector<std::vector<double>> beliefs) {
  DialogBeliefs b;
  b.session_id = "d";
  b.num_turns = beliefs.size();
  b.slots = {{"food", {"thai", "None"}, std::move(beliefs), {}}};
  return b;
}

TEST(AverageBeliefsTest, Examples) {
  const std::vector<DialogBeliefs> one = {OneSlot({{0.3, 0.7}})};
  EXPECT_EQ(AverageBeliefs(one, std::vector<double>{1.0}).slots[0].beliefs, one[0].slots[0].beliefs);
  const std::vector<DialogBeliefs> two = {OneSlot({{1.0, 0.0}}), OneSlot({{0.0, 1.0}})};
  EXPECT_EQ(AverageBeliefs(two, std::vector<double>{0.5, 0.5}).slots[0].beliefs[0],
            (std::vector<double>{0.5, 0.5}));
}

TEST(AverageBeliefsTest, RandomMembersGiveDistributions) {
  Rng rng(30);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<DialogBeliefs> members;
    for (int m = 0; m < 4; ++m) members.push_back(OneSlot({testing::RandomDistribution(rng, 2)}));
    const auto w = testing::RandomDistribution(rng, 4);
    const auto avg = AverageBeliefs(members, w).slots[0].beliefs[0];
    EXPECT_NEAR(avg[0] + avg[1], 1.0, 1e-12);
    EXPECT_GE(avg[0], 0.0);
  }
}

TEST(AverageBeliefsTest, RejectsMismatchedMembers) {
  DialogBeliefs other = OneSlot({{0.5, 0.5}});
  other.slots[0].candidates = {"thai", "dontcare"};
  const std::vector<DialogBeliefs> members = {OneSlot({{0.5, 0.5}}), other};
  EXPECT_THROW(AverageBeliefs(members, std::vector<double>{0.5, 0.5}), ContractViolation);
  const std::vector<DialogBeliefs> same = {OneSlot({{0.5, 0.5}}), OneSlot({{0.5, 0.5}})};
  EXPECT_THROW(AverageBeliefs(same, std::vector<double>{0.7, 0.7}), ContractViolation);
  EXPECT_THROW(AverageBeliefs(same, std::vector<double>{1.5, -0.5}), ContractViolation);
}

TEST_F(TrainingTest, IdenticalMembersReproduceTheSingleModel) {
  SetUpCorpus(4, 31);
  TrackerModel model = CreateModel(*encoder_, config_);
  const std::vector<TrackerModel> copies(10, model);
  const std::vector<double> w(10, 0.1);
  const auto ensemble = EnsemblePredict(copies, w, encoded_);
  const auto single = PredictCorpus(model, encoded_);
  for (size_t d = 0; d < single.size(); ++d) {
    for (size_t s = 0; s < single[d].slots.size(); ++s) {
      for (size_t t = 0; t < single[d].num_turns; ++t) {
        for (size_t k = 0; k < single[d].slots[s].beliefs[t].size(); ++k) {
          EXPECT_NEAR(ensemble[d].slots[s].beliefs[t][k], single[d].slots[s].beliefs[t][k], 1e-12);
        }
      }
    }
  }
}

TEST(FitEnsembleWeightsTest, PrefersTheAccurateMember) {
  LabeledDialog l;
  l.dialog.session_id = "d";
  l.dialog.turns.resize(2);
  l.labels.turns.resize(2);
  l.labels.turns[0].goals["food"] = "thai";
  l.labels.turns[1].goals["food"] = "thai";
  const Corpus labels = {l};
  const DialogBeliefs good = OneSlot({{0.6, 0.4}, {0.6, 0.4}});
  const DialogBeliefs bad = OneSlot({{0.1, 0.9}, {0.1, 0.9}});
  for (size_t members : {2u, 3u, 5u}) {
    std::vector<std::vector<DialogBeliefs>> predictions(members, {bad});
    predictions[1] = {good};
    const auto w = FitEnsembleWeights(predictions, labels, Schedule::kAllTurns);
    double total = 0.0;
    for (double x : w) {
      EXPECT_GE(x, 0.0);
      total += x;
    }
    EXPECT_NEAR(total, 1.0, 1e-9);
    std::vector<DialogBeliefs> members_out;
    for (const auto& p : predictions) members_out.push_back(p[0]);
    const auto avg = AverageBeliefs(members_out, w);
    EXPECT_GT(avg.slots[0].beliefs[0][0], avg.slots[0].beliefs[0][1]) << members;
  }
}

TEST_F(TrainingTest, EnsembleKeepsEveryMemberWhenAsked) {
  SetUpCorpus(6, 32);
  config_.epochs = 1;
  const auto result = TrainEnsemble(*encoder_, encoded_, encoded_, synthetic_.dialogs, config_, 3,
                                    3, EnsembleWeighting::kUniform, 2);
  ASSERT_EQ(result.models.size(), 3u);
  ASSERT_EQ(result.all.size(), 3u);
  for (double w : result.weights) EXPECT_DOUBLE_EQ(w, 1.0 / 3.0);
  for (size_t r = 1; r < result.kept.size(); ++r) {
    EXPECT_GE(result.kept[r - 1].dev_accuracy, result.kept[r].dev_accuracy);
  }
  EXPECT_THROW(TrainEnsemble(*encoder_, encoded_, encoded_, synthetic_.dialogs, config_, 2, 3),
               ConfigError);
}

}  // namespace
}  // namespace hdst
