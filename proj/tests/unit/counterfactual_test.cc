// Copyright 2026 The cfdistill Authors
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


#include <gtest/gtest.h>

#include <vector>

#include "cfdistill/metrics/counterfactual.h"
#include "support.h"

namespace cfdistill {
namespace {

using testing::Rng;
constexpr Label E = Label::kEntailment;
constexpr Label N = Label::kNeutral;
constexpr Label C = Label::kContradiction;

TEST(Sensitivity, UnchangedPredictionIsZero) {
  const LabelDistribution p(0.6, 0.3, 0.1);
  EXPECT_EQ(sensitivity(p, p), 0.0);
}

TEST(Sensitivity, BinaryExampleBothFormsAgree) {
  // Original predicts class 0 at 0.8, counterfactual predicts class 1 at 0.9.
  const std::vector<double> orig = {0.8, 0.2};
  const std::vector<double> cf = {0.1, 0.9};
  EXPECT_NEAR(sensitivity(orig, cf), 0.7, 1e-12);
  EXPECT_NEAR(binary_sensitivity(0.9, 0.8), 0.7, 1e-12);
}

TEST(Sensitivity, ExtremeConfidenceIsOne) {
  EXPECT_EQ(sensitivity(LabelDistribution(1, 0, 0), LabelDistribution(0, 0, 1)),
            1.0);
  EXPECT_EQ(sensitivity(std::vector<double>{1, 0}, std::vector<double>{0, 1}),
            1.0);
}

TEST(Sensitivity, BinaryIdentityOnRandomPairs) {
  Rng rng(31);
  int checked = 0;
  while (checked < 1000) {
    const double p = testing::uniform(rng);
    const double q = testing::uniform(rng);
    const std::vector<double> orig = {p, 1.0 - p};
    const std::vector<double> cf = {q, 1.0 - q};
    const size_t l = argmax_index(orig);
    const size_t lc = argmax_index(cf);
    if (l == lc) continue;
    EXPECT_NEAR(sensitivity(orig, cf), binary_sensitivity(cf[lc], orig[l]),
                1e-12);
    ++checked;
  }
}

TEST(Sensitivity, ZeroForEqualThreeClassDistributions) {
  Rng rng(32);
  for (int i = 0; i < 1000; ++i) {
    const auto p = testing::random_distribution(rng);
    EXPECT_EQ(sensitivity(p, p), 0.0);
  }
}

TEST(Sensitivity, BoundedInUnitInterval) {
  Rng rng(33);
  for (int i = 0; i < 2000; ++i) {
    const double s = sensitivity(testing::random_distribution(rng),
                                 testing::random_distribution(rng));
    EXPECT_GE(s, -1e-12);
    EXPECT_LE(s, 1.0 + 1e-12);
  }
}

TEST(Sensitivity, RejectsMismatchedSizes) {
  EXPECT_THROW(sensitivity(std::vector<double>{1.0},
                           std::vector<double>{0.5, 0.5}),
               InputError);
  EXPECT_THROW(sensitivity(std::vector<double>{}, std::vector<double>{}),
               InputError);
}

TEST(ArgmaxIndex, TiesGoToLowestIndex) {
  EXPECT_EQ(argmax_index(std::vector<double>{0.4, 0.4, 0.2}), 0u);
  EXPECT_EQ(argmax_index(std::vector<double>{0.2, 0.4, 0.4}), 1u);
}

CounterfactualPair pair(Label gold_orig, Label gold_cf, Label pred_orig,
                        Label pred_cf) {
  auto peaked = [](Label l) {
    std::array<double, 3> p = {0.1, 0.1, 0.1};
    p[label_index(l)] = 0.8;
    return LabelDistribution(p);
  };
  return {"p", gold_orig, gold_cf, peaked(pred_orig), peaked(pred_cf)};
}

TEST(CounterfactualAccuracy, HandCountedFixtures) {
  const std::vector<CounterfactualPair> all = {pair(E, C, E, C),
                                               pair(N, E, N, E)};
  EXPECT_EQ(counterfactual_accuracy(all), 1.0);
  const std::vector<CounterfactualPair> four = {
      pair(E, C, E, C),  // both correct
      pair(E, C, E, E),  // original only
      pair(N, C, E, C),  // counterfactual only
      pair(C, N, E, E),  // neither
  };
  EXPECT_EQ(counterfactual_accuracy(four), 0.25);
  EXPECT_EQ(original_accuracy(four), 0.5);
  EXPECT_THROW(counterfactual_accuracy({}), InputError);
  EXPECT_THROW(mean_sensitivity({}), InputError);
}

TEST(CounterfactualAccuracy, NeverExceedsOriginalAccuracy) {
  Rng rng(34);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<CounterfactualPair> pairs;
    const size_t k = 1 + testing::uniform_index(rng, 20);
    for (size_t i = 0; i < k; ++i) {
      const Direction d = Direction::all()[testing::uniform_index(rng, 6)];
      pairs.push_back({"p", d.source(), d.target(),
                       testing::random_distribution(rng),
                       testing::random_distribution(rng)});
    }
    EXPECT_LE(counterfactual_accuracy(pairs), original_accuracy(pairs));
  }
}

TEST(CounterfactualPair, DirectionFollowsGoldLabels) {
  EXPECT_EQ(pair(E, C, E, C).direction(), Direction::parse("E2C"));
  EXPECT_EQ(pair(N, N, E, C).direction(), std::nullopt);
}

TEST(PairRecords, ReadsOptionalPredictions) {
  const auto recs = read_pair_records(testing::data_path("pipeline/pairs.jsonl"));
  ASSERT_EQ(recs.size(), 5u);
  EXPECT_TRUE(recs[0].pred_orig && recs[0].pred_cf);
  EXPECT_FALSE(recs[3].pred_orig || recs[3].pred_cf);
  EXPECT_FALSE(recs[4].pred_orig || recs[4].pred_cf);
}

}  // namespace
}  // namespace cfdistill
