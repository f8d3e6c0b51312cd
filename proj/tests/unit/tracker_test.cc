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

#include <chrono>
#include <cmath>

#include "gradient_check.h"
#include "gtest/gtest.h"
#include "hdst/common/errors.h"
#include "hdst/data/synthetic.h"
#include "hdst/tracker/tracker.h"
#include "hdst/training/trainer.h"
#include "model_fixtures.h"

namespace hdst {
namespace {

using testing::RandomDistribution;
using testing::RandomSparse;
using testing::RuleOracle;

std::vector<double> Values(const Tape& tape, Var v) {
  const auto s = tape.value(v);
  return {s.begin(), s.end()};
}

TEST(ValueIndependentFTest, LiteralCases) {
  // Candidates {italian, indian, None}; None at index 2.
  EXPECT_EQ(ValueIndependentF(2.0, -1.0, 2, 0, 2), 2.0);
  EXPECT_EQ(ValueIndependentF(2.0, -1.0, 0, 1, 2), -1.0);
  for (size_t j = 0; j < 2; ++j) EXPECT_EQ(ValueIndependentF(2.0, -1.0, 2, j, 2), 2.0);
  EXPECT_THROW(ValueIndependentF(2.0, -1.0, 1, 1, 2), ContractViolation);
}

TEST(ValueIndependentFTest, TargetNoneVariant) {
  EXPECT_EQ(ValueIndependentF(2.0, -1.0, 0, 2, 2, CNewCase::kVjNone), 2.0);
  EXPECT_EQ(ValueIndependentF(2.0, -1.0, 2, 0, 2, CNewCase::kVjNone), -1.0);
  EXPECT_EQ(ParseCNewCase("vj_none"), CNewCase::kVjNone);
  EXPECT_THROW(ParseCNewCase("both"), ConfigError);
}

class ComponentTest : public ::testing::Test {
 protected:
  static constexpr size_t kTurnDim = 7;
  static constexpr size_t kValueDim = 5;

  ComponentTest()
      : model_(TrackerConfig{}, {CandidateSet("food", {"italian", "indian", "thai"})},
               {CandidateSet("name", {"pizza hut"})}, kTurnDim, kValueDim) {}

  TrackerModel model_;
};

TEST_F(ComponentTest, RecurrentZeroParamsGiveBiasScalars) {
  auto bias = model_.params().GetMutable(model_.recurrent().scalars.bias).mutable_values();
  bias[0] = 0.7;
  bias[1] = -0.4;
  Rng rng(1);
  const SparseVector f = RandomSparse(rng, kTurnDim, 4);
  Tape tape(&model_.params());
  const auto out = RecurrentL(tape, model_.recurrent(), f, LstmZeroState(tape, 5));
  EXPECT_EQ(Values(tape, out.scalars), (std::vector<double>{0.7, -0.4}));
  for (double h : tape.value(out.state.hidden)) EXPECT_EQ(h, 0.0);
  EXPECT_EQ(tape.size(out.state.hidden), 5u);
}

TEST_F(ComponentTest, RecurrentIsDeterministic) {
  Rng rng(2);
  model_.params().InitializeUniform(0.5, rng);
  const SparseVector f = RandomSparse(rng, kTurnDim, 4);
  Tape a(&model_.params());
  Tape b(&model_.params());
  const auto ra = RecurrentL(a, model_.recurrent(), f, LstmZeroState(a, 5));
  const auto rb = RecurrentL(b, model_.recurrent(), f, LstmZeroState(b, 5));
  EXPECT_EQ(Values(a, ra.scalars), Values(b, rb.scalars));
  EXPECT_EQ(Values(a, ra.state.memory), Values(b, rb.state.memory));
}

TEST_F(ComponentTest, RecurrentGradientThroughThreeTurns) {
  Rng rng(3);
  model_.params().InitializeUniform(0.3, rng);
  std::vector<SparseVector> turns;
  for (int t = 0; t < 3; ++t) turns.push_back(RandomSparse(rng, kTurnDim, 4));
  const auto report = testing::CheckGradients(model_.params(), [&](Tape& tape) {
    LstmTapeState state = LstmZeroState(tape, 5);
    Var total = tape.Scalar(0.0);
    for (const auto& f : turns) {
      const auto out = RecurrentL(tape, model_.recurrent(), f, state);
      state = out.state;
      total = tape.Add(total, tape.Sum(tape.Mul(out.scalars, out.scalars)));
    }
    return total;
  });
  EXPECT_EQ(report.failures, 0u) << report.worst;
}

TEST_F(ComponentTest, CorrectionZeroWeightsGiveBias) {
  auto bias = model_.params().GetMutable(model_.correction().out[0].bias).mutable_values();
  for (size_t k = 0; k < bias.size(); ++k) bias[k] = 0.1 * static_cast<double>(k);
  Rng rng(4);
  Tape tape(&model_.params());
  const Var g = ValueDependentG(tape, model_.correction(), 0, RandomSparse(rng, kTurnDim, 3),
                                RandomSparse(rng, kValueDim, 3));
  ASSERT_EQ(tape.size(g), 5u);  // three values, dontcare, None
  for (size_t k = 0; k < 5; ++k) EXPECT_DOUBLE_EQ(tape.value(g)[k], 0.1 * static_cast<double>(k));
}

TEST_F(ComponentTest, CorrectionIsLinear) {
  Rng rng(5);
  model_.params().InitializeUniform(0.5, rng);
  const SparseVector ft = RandomSparse(rng, kTurnDim, 4);
  const SparseVector fv = RandomSparse(rng, kValueDim, 3);
  auto doubled = [](SparseVector v) {
    for (auto& e : v.entries) e.weight *= 2.0;
    return v;
  };
  Tape tape(&model_.params());
  const auto g0 = Values(tape, ValueDependentG(tape, model_.correction(), 0, {}, {}));
  const auto g1 = Values(tape, ValueDependentG(tape, model_.correction(), 0, ft, fv));
  const auto g2 = Values(tape, ValueDependentG(tape, model_.correction(), 0, doubled(ft), doubled(fv)));
  for (size_t k = 0; k < g0.size(); ++k) EXPECT_NEAR(g2[k] - g0[k], 2.0 * (g1[k] - g0[k]), 1e-12);
}

TEST_F(ComponentTest, SharedRowsMatchPerValueEvaluation) {
  Rng rng(6);
  model_.params().InitializeUniform(0.5, rng);
  const SparseVector ft = RandomSparse(rng, kTurnDim, 4);
  std::vector<SparseVector> fv;
  for (int k = 0; k < 4; ++k) fv.push_back(RandomSparse(rng, kValueDim, 3));
  fv.push_back({});
  Tape tape(&model_.params());
  const auto rows = ValueDependentGRows(tape, model_.correction(), 0, ft, fv);
  ASSERT_EQ(rows.size(), 5u);
  for (size_t i = 0; i < rows.size(); ++i) {
    const auto direct = Values(tape, ValueDependentG(tape, model_.correction(), 0, ft, fv[i]));
    const auto shared = Values(tape, rows[i]);
    for (size_t k = 0; k < direct.size(); ++k) EXPECT_NEAR(shared[k], direct[k], 1e-12);
  }
}

TEST(ComposeCoefficientsTest, SquashesScoresAndZeroesDiagonal) {
  ParameterStore none;
  Tape tape(&none);
  const size_t k = 3;
  std::vector<Var> zero_rows(k, tape.Constant(std::vector<double>(k, 0.0)));
  const Var a = ComposeCoefficients(tape, tape.Constant(std::vector<double>{0.0, 0.0}), zero_rows,
                                    2, CNewCase::kViNone);
  for (size_t i = 0; i < k; ++i) {
    for (size_t j = 0; j < k; ++j) EXPECT_EQ(tape.value(a)[i * k + j], i == j ? 0.0 : 0.5);
  }
  std::vector<Var> big(k, tape.Constant(std::vector<double>(k, 40.0)));
  const Var saturated = ComposeCoefficients(tape, tape.Constant(std::vector<double>{0.0, 0.0}),
                                            big, 2, CNewCase::kViNone);
  EXPECT_NEAR(tape.value(saturated)[1], 1.0, 1e-12);

  // F = c_override = 1 for source 0, G = -1 at target 1.
  std::vector<Var> rows(k, tape.Constant(std::vector<double>(k, 0.0)));
  rows[0] = tape.Constant(std::vector<double>{0.0, -1.0, 0.0});
  const Var mixed = ComposeCoefficients(tape, tape.Constant(std::vector<double>{3.0, 1.0}), rows, 2,
                                        CNewCase::kViNone);
  EXPECT_DOUBLE_EQ(tape.value(mixed)[0 * k + 1], 0.5);
  EXPECT_DOUBLE_EQ(tape.value(mixed)[2 * k + 0], 1.0 / (1.0 + std::exp(-3.0)));  // source None
  EXPECT_DOUBLE_EQ(tape.value(mixed)[1 * k + 2], 1.0 / (1.0 + std::exp(-1.0)));

  const Var target_none = ComposeCoefficients(tape, tape.Constant(std::vector<double>{3.0, 1.0}),
                                              zero_rows, 2, CNewCase::kVjNone);
  EXPECT_DOUBLE_EQ(tape.value(target_none)[0 * k + 2], 1.0 / (1.0 + std::exp(-3.0)));
  EXPECT_DOUBLE_EQ(tape.value(target_none)[2 * k + 0], 1.0 / (1.0 + std::exp(-1.0)));
}

TEST(RuleUpdateTest, WorkedExample) {
  const auto h = RuleUpdate(std::vector<double>{0.8, 0.2, 0.0}, std::vector<double>{0.1, 0.9, 0.0},
                            std::vector<double>(9, 0.5));
  EXPECT_NEAR(h[0], 0.45, 1e-12);
  EXPECT_NEAR(h[1], 0.55, 1e-12);
  EXPECT_NEAR(h[2], 0.0, 1e-12);
}

TEST(RuleUpdateTest, ZeroCoefficientsAreIdentity) {
  Rng rng(7);
  const auto h = RandomDistribution(rng, 6);
  const auto u = RandomDistribution(rng, 6);
  EXPECT_EQ(RuleUpdate(h, u, std::vector<double>(36, 0.0)), h);
}

TEST(RuleUpdateTest, FullOverrideMovesAllMass) {
  const auto h = RuleUpdate(std::vector<double>{1.0, 0.0, 0.0}, std::vector<double>{0.0, 1.0, 0.0},
                            std::vector<double>(9, 1.0));
  EXPECT_EQ(h, (std::vector<double>{0.0, 1.0, 0.0}));
}

TEST(RuleUpdateTest, MatchesLiteralOracle) {
  Rng rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const size_t k = 2 + rng.Index(10);
    const auto h = RandomDistribution(rng, k);
    const auto u = RandomDistribution(rng, k);
    std::vector<double> a(k * k);
    for (double& x : a) x = rng.Uniform();
    const auto expected = RuleOracle(h, u, a);
    const auto actual = RuleUpdate(h, u, a);
    for (size_t i = 0; i < k; ++i) EXPECT_NEAR(actual[i], expected[i], 1e-12);
  }
}

TEST(RuleUpdateTest, ConservesMassAndStaysNonNegative) {
  Rng rng(9);
  const auto start = std::chrono::steady_clock::now();
  for (int trial = 0; trial < 1000; ++trial) {
    const size_t k = 3 + rng.Index(18);
    const auto h = rng.Dirichlet(std::vector<double>(k, 0.3));
    const auto u = rng.Dirichlet(std::vector<double>(k, 0.3));
    std::vector<double> a(k * k);
    for (double& x : a) x = rng.Uniform();
    const auto out = RuleUpdate(h, u, a);
    double total = 0.0;
    for (size_t i = 0; i < k; ++i) {
      total += out[i];
      EXPECT_GE(out[i], -1e-12);
      // The outflow never exceeds the mass present.
      double outflow = 0.0;
      for (size_t j = 0; j < k; ++j) {
        if (j != i) outflow += u[j] * a[j * k + i];
      }
      EXPECT_LE(h[i] * outflow, h[i] + 1e-15);
    }
    EXPECT_NEAR(total, 1.0, 1e-9);
  }
  EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(), 1.0);
}

TEST(RuleUpdateTest, RejectsInvalidInputs) {
  const std::vector<double> a(4, 0.5);
  EXPECT_THROW(RuleUpdate(std::vector<double>{0.5, 0.6}, std::vector<double>{0.5, 0.5}, a),
               ContractViolation);
  EXPECT_THROW(RuleUpdate(std::vector<double>{0.5, 0.5}, std::vector<double>{-0.5, 1.5}, a),
               ContractViolation);
  EXPECT_THROW(RuleUpdate(std::vector<double>{0.5, 0.5}, std::vector<double>{0.5, 0.5},
                          std::vector<double>{0.0, 1.5, 0.2, 0.0}),
               ContractViolation);
  EXPECT_THROW(RuleUpdate(std::vector<double>{1.0}, std::vector<double>{1.0}, a), ShapeError);
}

TEST_F(ComponentTest, EmptyTurnOnZeroModelFollowsTheRule) {
  EncodedSlotTurn turn;
  turn.value_features.assign(5, SparseVector{});
  turn.informs.assign(5, 0.0);
  turn.informs[4] = 1.0;
  Tape tape(&model_.params());
  const TrackerState s0 = model_.InitialState(tape, 0);
  EXPECT_EQ(Values(tape, s0.belief), (std::vector<double>{0, 0, 0, 0, 1}));
  const TurnOutput out = model_.TrackTurn(tape, 0, turn, s0);
  // Zero parameters: a = 0.5 off the diagonal and a uniform SLU output.
  const std::vector<double> u(5, 0.2);
  std::vector<double> a(25, 0.5);
  const auto expected = RuleOracle(Values(tape, s0.belief), u, a);
  const auto h = Values(tape, out.state.belief);
  for (size_t k = 0; k < 5; ++k) {
    EXPECT_NEAR(Values(tape, out.slu)[k], 0.2, 1e-15);
    EXPECT_NEAR(h[k], expected[k], 1e-12);
  }
}

TEST_F(ComponentTest, TrackDialogFixesNameAndConserves) {
  Rng rng(10);
  model_.params().InitializeUniform(0.5, rng);
  const EncodedDialog d =
      testing::RandomEncodedDialog(rng, model_.tracked(), 6, kTurnDim, kValueDim);
  const DialogBeliefs beliefs = model_.Track(d);
  ASSERT_EQ(beliefs.slots.size(), 2u);
  const SlotBeliefs& name = beliefs.slot("name");
  ASSERT_EQ(name.beliefs.size(), 6u);
  for (const auto& b : name.beliefs) EXPECT_EQ(b, (std::vector<double>{0.0, 0.0, 1.0}));
  for (const auto& b : beliefs.slot("food").beliefs) {
    double total = 0.0;
    for (double p : b) total += p;
    EXPECT_NEAR(total, 1.0, 1e-9);
  }
  EXPECT_EQ(model_.Track(d).slot("food").beliefs, beliefs.slot("food").beliefs);

  EncodedDialog empty = d;
  empty.num_turns = 0;
  for (auto& s : empty.slots) s.turns.clear();
  const DialogBeliefs none = model_.Track(empty);
  EXPECT_TRUE(none.slot("food").beliefs.empty());
  EXPECT_TRUE(none.ToJsonLines().empty());
}

TEST_F(ComponentTest, IdenticalStatesGiveIdenticalTurns) {
  Rng rng(11);
  model_.params().InitializeUniform(0.5, rng);
  const EncodedDialog d = testing::RandomEncodedDialog(rng, model_.tracked(), 1, kTurnDim, kValueDim);
  Tape tape(&model_.params());
  const TrackerState s0 = model_.InitialState(tape, 0);
  const TurnOutput first = model_.TrackTurn(tape, 0, d.slots[0].turns[0], s0);
  const TurnOutput again = model_.TrackTurn(tape, 0, d.slots[0].turns[0], s0);
  EXPECT_EQ(Values(tape, first.state.belief), Values(tape, again.state.belief));
}

TEST_F(ComponentTest, BeliefJsonLinesHaveStableKeys) {
  Rng rng(12);
  const EncodedDialog d = testing::RandomEncodedDialog(rng, model_.tracked(), 2, kTurnDim, kValueDim);
  // Zero model: each value receives 0.2 * 0.5 of the None mass.
  const auto lines = model_.Track(d).ToJsonLines();
  ASSERT_EQ(lines.size(), 4u);
  EXPECT_EQ(lines[0].dump(),
            R"({"session_id":"random","turn":0,"slot":"food","distribution":{"italian":0.1,"indian":0.1,"thai":0.1,"dontcare":0.1,"None":0.6}})");
  EXPECT_EQ(lines[1]["slot"], "name");
}

TEST_F(ComponentTest, RejectsIncompatibleDialogs) {
  Rng rng(13);
  EncodedDialog d = testing::RandomEncodedDialog(rng, model_.tracked(), 2, kTurnDim, kValueDim);
  d.slots[0].slot = "area";
  EXPECT_THROW(model_.Track(d), ContractViolation);
  d = testing::RandomEncodedDialog(rng, {CandidateSet("food", {"italian"})}, 2, kTurnDim, kValueDim);
  EXPECT_THROW(model_.Track(d), ContractViolation);
}

// Every parameter of the recurrent unit, the corrections and both SLU units
// receives the exact gradient of the joint loss on a 3-turn dialog.
TEST(EndToEndGradientTest, JointLossOnThreeTurnDialog) {
  const std::vector<CandidateSet> slots = {CandidateSet("food", {"italian", "indian", "thai"})};
  TrackerModel model(TrackerConfig{}, slots, {}, 8, 6);
  Rng rng(14);
  model.params().InitializeUniform(0.3, rng);
  const EncodedDialog d = testing::RandomEncodedDialog(rng, slots, 3, 8, 6);
  const auto report = testing::CheckGradients(
      model.params(), [&](Tape& tape) { return BuildDialogLoss(tape, model, d).total; });
  EXPECT_EQ(report.checked, model.params().total_size());
  EXPECT_EQ(report.failures, 0u) << report.worst;
}

TEST(TrackerConfigTest, JsonRoundTripAndValidation) {
  TrackerConfig c;
  c.cnew_case = CNewCase::kVjNone;
  c.slu.activation = Activation::kSigmoid;
  EXPECT_EQ(TrackerConfig::FromJson(c.ToJson()).ToJson(), c.ToJson());
  EXPECT_THROW(TrackerConfig::FromJson({{"slu_activation", "tanh"}}), ConfigError);
  EXPECT_THROW(TrackerConfig::FromJson({{"recurrent_cells", 0}}), ConfigError);
}

}  // namespace
}  // namespace hdst
