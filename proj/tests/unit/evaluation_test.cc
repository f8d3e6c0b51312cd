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
#include <functional>

#include "gtest/gtest.h"
#include "hdst/common/errors.h"
#include "hdst/common/random.h"
#include "hdst/evaluation/metrics.h"
#include "model_fixtures.h"

namespace hdst {
namespace {

using testing::RandomDistribution;

TurnPrediction Turn(std::vector<std::vector<double>> beliefs, std::vector<size_t> labels) {
  return {std::move(beliefs), std::move(labels)};
}

// Squared L2 against the one-hot joint label over the explicit product table.
double BruteForceL2(const TurnPrediction& turn) {
  double total = 0.0;
  std::vector<size_t> index(turn.beliefs.size(), 0);
  std::function<void(size_t, double, bool)> visit = [&](size_t s, double p, bool is_label) {
    if (s == turn.beliefs.size()) {
      const double target = is_label ? 1.0 : 0.0;
      total += (p - target) * (p - target);
      return;
    }
    for (size_t k = 0; k < turn.beliefs[s].size(); ++k) {
      visit(s + 1, p * turn.beliefs[s][k], is_label && k == turn.labels[s]);
    }
  };
  visit(0, 1.0, true);
  return total;
}

TEST(JointAccuracyTest, PerfectAndFullyWrong) {
  const std::vector<TurnPrediction> perfect = {Turn({{0.9, 0.1}, {0.2, 0.8}}, {0, 1}),
                                               Turn({{0.4, 0.6}, {0.7, 0.3}}, {1, 0})};
  EXPECT_EQ(JointAccuracy(perfect), 1.0);
  const std::vector<TurnPrediction> wrong = {Turn({{0.9, 0.1}, {0.2, 0.8}}, {0, 0}),
                                             Turn({{0.4, 0.6}, {0.7, 0.3}}, {1, 1})};
  EXPECT_EQ(JointAccuracy(wrong), 0.0);
}

TEST(JointAccuracyTest, HandBuiltFixtureOfFourTurns) {
  const std::vector<TurnPrediction> turns = {
      Turn({{0.6, 0.3, 0.1}, {0.5, 0.5}}, {0, 0}),  // correct, tie resolved to first
      Turn({{0.2, 0.7, 0.1}, {0.1, 0.9}}, {1, 1}),  // correct
      Turn({{0.2, 0.7, 0.1}, {0.1, 0.9}}, {1, 0}),  // second slot wrong
      Turn({{0.5, 0.2, 0.3}, {0.9, 0.1}}, {2, 0}),  // first slot wrong
  };
  EXPECT_DOUBLE_EQ(JointAccuracy(turns), 0.5);
}

TEST(JointAccuracyTest, InvariantUnderMonotoneRescaling) {
  Rng rng(1);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<TurnPrediction> turns;
    for (int t = 0; t < 5; ++t) {
      TurnPrediction p;
      for (int s = 0; s < 3; ++s) {
        const size_t k = 2 + rng.Index(4);
        p.beliefs.push_back(RandomDistribution(rng, k));
        p.labels.push_back(rng.Index(k));
      }
      turns.push_back(p);
    }
    auto rescaled = turns;
    for (auto& p : rescaled) {
      for (auto& b : p.beliefs) {
        for (double& x : b) x = std::exp(3.0 * x) + 2.0;
      }
    }
    EXPECT_EQ(JointAccuracy(turns), JointAccuracy(rescaled));
  }
}

TEST(JointAccuracyTest, RejectsMissingSlotsAndEmptyInput) {
  EXPECT_THROW(JointAccuracy(std::vector<TurnPrediction>{Turn({{1.0}}, {0, 0})}), ContractViolation);
  EXPECT_THROW(JointAccuracy(std::vector<TurnPrediction>{}), ContractViolation);
  EXPECT_THROW(JointAccuracy(std::vector<TurnPrediction>{Turn({{1.0}}, {3})}), ContractViolation);
}

TEST(ArgmaxTest, TiesGoToTheFirstCandidate) {
  EXPECT_EQ(Argmax(std::vector<double>{0.3, 0.3, 0.3}), 0u);
  EXPECT_EQ(Argmax(std::vector<double>{0.1, 0.45, 0.45}), 1u);
}

TEST(JointL2Test, KnownValues) {
  EXPECT_EQ(JointL2(Turn({{0.0, 1.0}, {1.0, 0.0, 0.0}}, {1, 0})), 0.0);
  for (size_t k : {2u, 3u, 5u, 9u}) {
    const double kd = static_cast<double>(k);
    const std::vector<double> uniform(k, 1.0 / kd);
    EXPECT_NEAR(JointL2(Turn({uniform}, {0})),
                (1.0 - 1.0 / kd) * (1.0 - 1.0 / kd) + (kd - 1.0) / (kd * kd), 1e-12);
  }
}

TEST(JointL2Test, ClosedFormMatchesProductTable) {
  Rng rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    TurnPrediction p;
    const size_t slots = 1 + rng.Index(3);
    for (size_t s = 0; s < slots; ++s) {
      const size_t k = 1 + rng.Index(5);
      p.beliefs.push_back(RandomDistribution(rng, k));
      p.labels.push_back(rng.Index(k));
    }
    EXPECT_NEAR(JointL2(p), BruteForceL2(p), 1e-12);
    EXPECT_GE(JointL2(p), -1e-12);
    EXPECT_LE(JointL2(p), 2.0 + 1e-12);
  }
}

class EvaluateTest : public ::testing::Test {
 protected:
  // Two-turn dialog with slots food (labelled in turn 1 only) and name.
  EvaluateTest() {
    DialogBeliefs b;
    b.session_id = "d1";
    b.num_turns = 2;
    b.slots = {{"food", {"thai", "dontcare", "None"}, {{0.1, 0.1, 0.8}, {0.7, 0.1, 0.2}}, {}},
               {"name", {"x", "dontcare", "None"}, {{0, 0, 1}, {0, 0, 1}}, {}}};
    beliefs_ = {b};
    LabeledDialog l;
    l.dialog.session_id = "d1";
    l.dialog.turns.resize(2);
    l.labels.turns.resize(2);
    l.labels.turns[1].goals["food"] = "thai";
    labels_ = {l};
  }
  std::vector<DialogBeliefs> beliefs_;
  Corpus labels_;
};

TEST_F(EvaluateTest, SchedulesAndCounts) {
  const auto all = Evaluate(beliefs_, labels_, Schedule::kAllTurns);
  EXPECT_EQ(all.evaluated_turns, 2u);
  EXPECT_EQ(all.skipped_turns, 0u);
  EXPECT_DOUBLE_EQ(all.joint_accuracy, 1.0);
  const auto labelled = Evaluate(beliefs_, labels_, Schedule::kLabelledTurns);
  EXPECT_EQ(labelled.evaluated_turns, 1u);
  EXPECT_EQ(labelled.skipped_turns, 1u);
  EXPECT_EQ(labelled.evaluated_turns + labelled.skipped_turns, labelled.total_turns);
  ASSERT_EQ(labelled.slots.size(), 2u);
  EXPECT_EQ(labelled.slots[0].slot, "food");
  EXPECT_NEAR(labelled.slots[0].l2, 0.3 * 0.3 + 0.1 * 0.1 + 0.2 * 0.2, 1e-12);
  EXPECT_NEAR(labelled.joint_l2, 0.3 * 0.3 + 0.1 * 0.1 + 0.2 * 0.2, 1e-12);
}

TEST_F(EvaluateTest, PerfectDialogAndDeterministicReports) {
  beliefs_[0].slots[0].beliefs = {{0, 0, 1}, {1, 0, 0}};
  const auto a = Evaluate(beliefs_, labels_, Schedule::kAllTurns);
  EXPECT_EQ(a.joint_accuracy, 1.0);
  EXPECT_EQ(a.joint_l2, 0.0);
  const auto b = Evaluate(beliefs_, labels_, Schedule::kAllTurns);
  EXPECT_EQ(a.ToJson().dump(), b.ToJson().dump());
  EXPECT_EQ(a.ToText(), b.ToText());
  EXPECT_NE(a.ToText().find("joint accuracy  1.0000"), std::string::npos);
}

TEST_F(EvaluateTest, EmptyScheduleIsAnError) {
  labels_[0].labels.turns[1].goals.clear();
  EXPECT_THROW(Evaluate(beliefs_, labels_, Schedule::kLabelledTurns), Error);
}

TEST_F(EvaluateTest, RejectsMisalignedInputs) {
  labels_[0].labels.turns[1].goals["food"] = "klingon";
  EXPECT_THROW(Evaluate(beliefs_, labels_, Schedule::kAllTurns), ContractViolation);
  labels_[0].labels.turns.pop_back();
  EXPECT_THROW(Evaluate(beliefs_, labels_, Schedule::kAllTurns), ContractViolation);
  EXPECT_THROW(Evaluate(beliefs_, Corpus{}, Schedule::kAllTurns), ContractViolation);
}

TEST(ScheduleTest, Names) {
  EXPECT_EQ(ParseSchedule("labelled_turns"), Schedule::kLabelledTurns);
  EXPECT_EQ(ScheduleName(ParseSchedule("all_turns")), "all_turns");
  EXPECT_THROW(ParseSchedule("official"), ConfigError);
}

}  // namespace
}  // namespace hdst
