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

#include <algorithm>
#include <cmath>

#include "gtest/gtest.h"
#include "hdst/common/errors.h"
#include "hdst/common/random.h"
#include "hdst/data/dstc_io.h"
#include "hdst/data/synthetic.h"
#include "hdst/features/encoder.h"
#include "hdst/features/features.h"
#include "hdst/features/vocabulary.h"
#include "test_util.h"

namespace hdst {
namespace {

using testing::FixturePath;
using testing::TempDir;

void ExpectBagNear(const FeatureBag& actual, const FeatureBag& expected) {
  ASSERT_EQ(actual.size(), expected.size());
  for (const auto& [feature, weight] : expected) {
    ASSERT_TRUE(actual.count(feature)) << feature;
    EXPECT_NEAR(actual.at(feature), weight, 1e-12) << feature;
  }
}

TEST(TokenizeTest, LowercasesAndStripsPunctuation) {
  EXPECT_EQ(Tokenize("  I'd like CHEAP food, please! "),
            (std::vector<std::string>{"id", "like", "cheap", "food", "please"}));
  EXPECT_TRUE(Tokenize("?! ").empty());
}

TEST(AsrNgramTest, WeightsAccumulateAcrossHypotheses) {
  ExpectBagNear(ExtractAsrNgrams({{"indian food", 0.7}, {"italian food", 0.3}}),
                {{"indian", 0.7},
                 {"italian", 0.3},
                 {"food", 1.0},
                 {"indian food", 0.7},
                 {"italian food", 0.3}});
}

TEST(AsrNgramTest, TrigramsOfSingleHypothesis) {
  ExpectBagNear(ExtractAsrNgrams({{"a b c", 1.0}}), {{"a", 1.0},
                                                     {"b", 1.0},
                                                     {"c", 1.0},
                                                     {"a b", 1.0},
                                                     {"b c", 1.0},
                                                     {"a b c", 1.0}});
  EXPECT_TRUE(ExtractAsrNgrams({}).empty());
}

TEST(AsrNgramTest, IsAdditiveOverNbestUnion) {
  Rng rng(3);
  const std::vector<std::string> words = {"cheap", "food", "in", "the", "north", "thai"};
  for (int trial = 0; trial < 100; ++trial) {
    auto make = [&] {
      std::vector<AsrHypothesis> nbest;
      for (size_t n = rng.Index(4); n > 0; --n) {
        std::string text;
        for (size_t w = 1 + rng.Index(5); w > 0; --w) text += words[rng.Index(words.size())] + " ";
        nbest.push_back({text, rng.Uniform()});
      }
      return nbest;
    };
    const auto a = make();
    const auto b = make();
    auto both = a;
    both.insert(both.end(), b.begin(), b.end());
    FeatureBag sum = ExtractAsrNgrams(a);
    MergeInto(sum, ExtractAsrNgrams(b));
    ExpectBagNear(ExtractAsrNgrams(both), sum);
  }
}

TEST(MachineActTest, EncodesActSlotValue) {
  ExpectBagNear(EncodeMachineActs({{"request", "food", ""}}), {{"request-food-", 1.0}});
  ExpectBagNear(EncodeMachineActs({{"confirm", "food", "italian"}}),
                {{"confirm-food-italian", 1.0}});
  EXPECT_TRUE(EncodeMachineActs({}).empty());
}

TEST(BatchAsrTest, NamespacesHypothesesAndConfusions) {
  BatchAsr batch;
  batch.nbest = {{"indian food", 0.6}};
  batch.confusions = {{"indian", 0.4}};
  const FeatureBag bag = EncodeBatchAsr(batch);
  EXPECT_DOUBLE_EQ(bag.at("batchcm:indian"), 0.4);
  EXPECT_DOUBLE_EQ(bag.at("batch:indian food"), 0.6);
  EXPECT_TRUE(EncodeBatchAsr(std::nullopt).empty());

  const std::vector<AsrHypothesis> nbest = {{"cheap thai", 0.8}, {"cheap tie", 0.2}};
  batch = {nbest, {}};
  const FeatureBag live = ExtractAsrNgrams(nbest);
  const FeatureBag batched = EncodeBatchAsr(batch);
  ASSERT_EQ(live.size(), batched.size());
  for (const auto& [feature, weight] : live) EXPECT_EQ(batched.at("batch:" + feature), weight);
}

TEST(TrackedSlotTest, IndicatorPerSlot) {
  const Ontology o({{"food", {"thai"}}, {"area", {"north"}}});
  EXPECT_EQ(EncodeTrackedSlot("food", o), (FeatureBag{{"slot:food", 1.0}}));
  EXPECT_EQ(EncodeTrackedSlot("area", o), (FeatureBag{{"slot:area", 1.0}}));
  EXPECT_EQ(EncodeTrackedSlot("food", o), EncodeTrackedSlot("food", o));
  EXPECT_THROW(EncodeTrackedSlot("phone", o), ConfigError);
}

TEST(DelexicalizeTest, Examples) {
  EXPECT_EQ(Delexicalize({{"inform-food-italian", 1.0}}, {"food"}, {"italian"}),
            (FeatureBag{{"inform-<slot>-<value>", 1.0}}));
  EXPECT_EQ(Delexicalize({{"want italian", 0.7}}, {"food"}, {"italian"}),
            (FeatureBag{{"want <value>", 0.7}}));
  EXPECT_TRUE(Delexicalize({{"want thai", 0.7}, {"slot:food", 1.0}}, {"food"}, {"italian"}).empty());
}

TEST(DelexicalizeTest, MultiTokenValuesAndSlotRenderings) {
  const FeatureBag bag = {{"asian oriental food", 0.5},
                          {"batch:an asian oriental", 0.2},
                          {"confirm-food-asian oriental", 1.0},
                          {"asian", 0.9}};
  ExpectBagNear(Delexicalize(bag, {"food"}, {"asian oriental"}),
                {{"<value> <slot>", 0.5}, {"batch:an <value>", 0.2}, {"confirm-<slot>-<value>", 1.0}});
  ExpectBagNear(Delexicalize({{"cheap price range", 0.4}, {"inform-pricerange-cheap", 1.0}},
                             {"pricerange", "price range"}, {"cheap"}),
                {{"<value> <slot>", 0.4}, {"inform-<slot>-<value>", 1.0}});
}

TEST(DelexicalizeTest, MatchesWholeTokensOnly) {
  EXPECT_TRUE(Delexicalize({{"northern", 1.0}, {"batchcm:northeast", 1.0}}, {"area"}, {"north"}).empty());
}

TEST(DelexicalizeTest, NeverInventsWeightAndRoundTrips) {
  Rng rng(11);
  const std::vector<std::string> words = {"italian", "food", "cheap", "the", "want", "any"};
  for (int trial = 0; trial < 200; ++trial) {
    FeatureBag bag;
    for (size_t n = rng.Index(8); n > 0; --n) {
      std::string feature;
      for (size_t w = 1 + rng.Index(3); w > 0; --w) {
        feature += (feature.empty() ? "" : " ") + words[rng.Index(words.size())];
      }
      AddFeature(bag, feature, rng.Uniform());
    }
    const FeatureBag delex = Delexicalize(bag, {"food"}, {"italian"});
    EXPECT_LE(TotalWeight(delex), TotalWeight(bag) + 1e-12);
    // Substituting the value and slot back recovers features of the input.
    for (const auto& [feature, weight] : delex) {
      std::string restored = feature;
      ReplaceTokens(restored, kValueTag, "italian");
      ReplaceTokens(restored, kSlotTag, "food");
      ASSERT_TRUE(bag.count(restored)) << restored;
      EXPECT_DOUBLE_EQ(bag.at(restored), weight);
    }
  }
}

TEST(VocabularyTest, KeepsHeaviestAndBreaksTiesLexicographically) {
  const std::vector<FeatureBag> bags = {{{"a", 1.0}, {"b", 3.0}}, {{"c", 2.0}, {"a", 0.5}}};
  EXPECT_EQ(BuildVocabulary(bags, VocabularyKind::kTurn, 2).features(),
            (std::vector<std::string>{"b", "c"}));
  const std::vector<FeatureBag> ties = {{{"zeta", 1.0}, {"alpha", 1.0}, {"mid", 1.0}}};
  EXPECT_EQ(BuildVocabulary(ties, VocabularyKind::kTurn, 2).features(),
            (std::vector<std::string>{"alpha", "mid"}));
  EXPECT_EQ(BuildVocabulary(bags, VocabularyKind::kTurn, 10),
            BuildVocabulary(bags, VocabularyKind::kTurn, 10));
  EXPECT_THROW(BuildVocabulary(bags, VocabularyKind::kTurn, 0), ConfigError);
}

TEST(VocabularyTest, VectorizeDropsOovAndKeepsWeights) {
  const FeatureVocabulary vocab(VocabularyKind::kTurn, {"food", "cheap", "north"});
  EXPECT_TRUE(vocab.Vectorize({}).empty());
  const SparseVector v = vocab.Vectorize({{"north", 0.25}, {"food", 1.5}});
  ASSERT_EQ(v.nnz(), 2u);
  EXPECT_EQ(v.entries[0].index, 0u);
  EXPECT_EQ(v.entries[0].weight, 1.5);
  EXPECT_EQ(v.entries[1].index, 2u);
  EXPECT_EQ(v.entries[1].weight, 0.25);
  EXPECT_EQ(vocab.Vectorize({{"oov", 1.0}, {"cheap", 0.5}}).nnz(), 1u);
}

TEST(VocabularyTest, FileRoundTripAndHash) {
  TempDir dir;
  const FeatureVocabulary vocab(VocabularyKind::kValue, {"want <value>", "inform-<slot>-<value>"});
  vocab.Save(dir.file("v.txt"));
  EXPECT_EQ(testing::ReadFile(dir.file("v.txt")), "want <value>\ninform-<slot>-<value>\n");
  const auto loaded = FeatureVocabulary::Load(dir.file("v.txt"), VocabularyKind::kValue);
  EXPECT_EQ(loaded, vocab);
  EXPECT_EQ(loaded.Hash(), vocab.Hash());
  EXPECT_NE(FeatureVocabulary(VocabularyKind::kValue, {"want <value>"}).Hash(), vocab.Hash());
  EXPECT_THROW(FeatureVocabulary::Load(dir.file("absent.txt"), VocabularyKind::kTurn), LoadError);
}

// Recount oracle: sum weights with a separate scan, sort with an explicit
// comparator and compare against the built vocabulary.
TEST(VocabularyTest, MatchesIndependentTopKOnSyntheticCorpus) {
  SyntheticConfig sc;
  sc.num_dialogs = 20;
  sc.seed = 5;
  const auto synthetic = GenerateSyntheticCorpus(sc);
  std::vector<FeatureBag> bags;
  for (const auto& d : synthetic.dialogs) {
    for (const auto& turn : d.dialog.turns) {
      FeatureBag bag = EncodeMachineActs(turn.machine_acts);
      MergeInto(bag, ExtractAsrNgrams(turn.live_asr));
      bags.push_back(bag);
    }
  }
  std::vector<std::pair<std::string, double>> totals;
  for (const auto& bag : bags) {
    for (const auto& [f, w] : bag) {
      auto it = std::find_if(totals.begin(), totals.end(), [&](const auto& p) { return p.first == f; });
      if (it == totals.end()) {
        totals.emplace_back(f, w);
      } else {
        it->second += w;
      }
    }
  }
  std::sort(totals.begin(), totals.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  std::vector<std::string> expected;
  for (size_t i = 0; i < std::min<size_t>(50, totals.size()); ++i) expected.push_back(totals[i].first);
  EXPECT_EQ(BuildVocabulary(bags, VocabularyKind::kTurn, 50).features(), expected);
}

class EncoderTest : public ::testing::Test {
 protected:
  EncoderTest()
      : corpus_(LoadCorpus(FixturePath("dstc/fixture.flist"), FixturePath("dstc"))),
        ontology_(Ontology::Load(FixturePath("dstc/ontology.json"))) {}
  Corpus corpus_;
  Ontology ontology_;
};

TEST_F(EncoderTest, EncodesFixtureDialog) {
  const auto encoder =
      FeatureEncoder::Build(corpus_, ontology_, {"food", "area"}, FeatureConfig{});
  const EncodedDialog enc = encoder.Encode(corpus_[0]);
  ASSERT_EQ(enc.num_turns, 2u);
  ASSERT_EQ(enc.slots.size(), 2u);
  const CandidateSet& food = encoder.candidates("food");
  EXPECT_EQ(food.values(), (std::vector<std::string>{"italian", "indian", "chinese",
                                                     "asian oriental", "dontcare", "None"}));
  const EncodedSlotTurn& t0 = enc.slots[0].turns[0];
  EXPECT_EQ(t0.value_features.size(), food.size());
  EXPECT_EQ(t0.goal, 0);
  EXPECT_EQ(t0.semantic, 0);  // inform(food=italian)
  EXPECT_DOUBLE_EQ(t0.informs[0], 0.7);
  EXPECT_DOUBLE_EQ(t0.informs[1], 0.3);
  EXPECT_NEAR(t0.informs[food.none_index()], 0.0, 1e-12);
  EXPECT_TRUE(t0.value_features[food.none_index()].empty());
  EXPECT_FALSE(t0.value_features[0].empty());
  EXPECT_TRUE(t0.value_features[2].empty());  // chinese never mentioned

  // Turn 1: affirm of the confirmed value is an inform of italian.
  const EncodedSlotTurn& t1 = enc.slots[0].turns[1];
  EXPECT_DOUBLE_EQ(t1.informs[0], 1.0);
  EXPECT_EQ(t1.semantic, 0);
  // Area has no informs: i is all on None and the target is None.
  const EncodedSlotTurn& a0 = enc.slots[1].turns[0];
  EXPECT_DOUBLE_EQ(a0.informs[encoder.candidates("area").none_index()], 1.0);
  EXPECT_EQ(a0.goal, static_cast<int>(encoder.candidates("area").none_index()));

  // The slot indicator separates the two slots' turn vectors.
  EXPECT_NE(enc.slots[0].turns[0].turn_features.entries.size(), 0u);
  const auto food_idx = encoder.turn_vocabulary().Find("slot:food");
  ASSERT_GE(food_idx, 0);
  bool found = false;
  for (const auto& e : t0.turn_features.entries) found |= e.index == static_cast<size_t>(food_idx);
  EXPECT_TRUE(found);
}

TEST_F(EncoderTest, ValueFeaturesAreDelexicalized) {
  const auto encoder = FeatureEncoder::Build(corpus_, ontology_, {"food"}, FeatureConfig{});
  const FeatureBag bag = encoder.ValueBag(encoder.TurnBag(corpus_[0].dialog.turns[1]), "food", "italian");
  EXPECT_TRUE(bag.count("confirm-<slot>-<value>"));
  EXPECT_TRUE(encoder.value_vocabulary().Find("<value> <slot>") >= 0);
}

TEST_F(EncoderTest, TogglesSelectInputSources) {
  FeatureConfig asr_only;
  asr_only.use_batch_asr = false;
  const auto encoder = FeatureEncoder::Build(corpus_, ontology_, {"food"}, asr_only);
  for (const auto& f : encoder.turn_vocabulary().features()) {
    EXPECT_EQ(f.rfind("batch", 0), std::string::npos) << f;
  }
  FeatureConfig slu_only;
  slu_only.use_live_slu_only = true;
  const FeatureBag bag = FeatureEncoder::Build(corpus_, ontology_, {"food"}, slu_only)
                             .TurnBag(corpus_[0].dialog.turns[0]);
  EXPECT_DOUBLE_EQ(bag.at("slu:inform-food-italian"), 0.7);
  EXPECT_FALSE(bag.count("italian food"));
}

TEST_F(EncoderTest, RejectsMisalignedLabelsAndUnknownSlots) {
  const auto encoder = FeatureEncoder::Build(corpus_, ontology_, {"food"}, FeatureConfig{});
  DialogLabels short_labels = corpus_[0].labels;
  short_labels.turns.pop_back();
  EXPECT_THROW(encoder.Encode(corpus_[0].dialog, &short_labels), ContractViolation);
  EXPECT_THROW(FeatureEncoder::Build(corpus_, ontology_, {"phone"}, FeatureConfig{}), ConfigError);
  const EncodedDialog unlabelled = encoder.Encode(corpus_[0].dialog, nullptr);
  EXPECT_EQ(unlabelled.slots[0].turns[0].goal, -1);
}

TEST(FeatureConfigTest, JsonRoundTrip) {
  FeatureConfig c;
  c.use_batch_asr = false;
  c.turn_capacity = 77;
  c.renderings.values["chinese"] = {"oriental"};
  const FeatureConfig back = FeatureConfig::FromJson(c.ToJson());
  EXPECT_EQ(back.ToJson(), c.ToJson());
  EXPECT_THROW(FeatureConfig::FromJson({{"value_capacity", 0}}), ConfigError);
}

}  // namespace
}  // namespace hdst
