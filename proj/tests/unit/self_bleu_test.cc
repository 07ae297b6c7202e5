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

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "cfdistill/metrics/self_bleu.h"
#include "support.h"

namespace cfdistill {
namespace {

const std::vector<std::string> kFixture = {
    "a man in a red shirt is riding a bike down the street",
    "a man in a red shirt is walking a dog down the street",
    "a woman in a blue dress is riding a bike on the beach",
};

// Straightforward BLEU: count n-grams into maps, clip by the per-gram
// maximum over references, smooth zero matches with eps.
double reference_bleu(const std::vector<std::vector<std::string>> &refs,
                      const std::vector<std::string> &hyp, int max_n,
                      double eps) {
  using Gram = std::vector<std::string>;
  auto count = [](const std::vector<std::string> &t, int n) {
    std::map<Gram, int> m;
    for (size_t i = 0; i + n <= t.size(); ++i) {
      ++m[Gram(t.begin() + i, t.begin() + i + n)];
    }
    return m;
  };
  double log_sum = 0.0;
  int orders = 0;
  for (int n = 1; n <= max_n; ++n) {
    const auto h = count(hyp, n);
    int total = 0;
    int matched = 0;
    for (const auto &[g, c] : h) {
      int best = 0;
      for (const auto &r : refs) {
        const auto rc = count(r, n);
        auto it = rc.find(g);
        if (it != rc.end()) best = std::max(best, it->second);
      }
      total += c;
      matched += std::min(c, best);
    }
    if (total == 0) continue;
    log_sum += std::log((matched == 0 ? eps : matched) / double(total));
    ++orders;
  }
  if (orders == 0) return 0.0;
  const double c = hyp.size();
  double r = 0;
  double best_diff = 1e300;
  for (const auto &ref : refs) {
    const double diff = std::abs(double(ref.size()) - c);
    if (diff < best_diff || (diff == best_diff && ref.size() < r)) {
      best_diff = diff;
      r = ref.size();
    }
  }
  const double bp = c >= r ? 1.0 : std::exp(1.0 - r / c);
  return bp * std::exp(log_sum / orders);
}

double reference_self_bleu(const std::vector<std::string> &corpus, int max_n) {
  double total = 0.0;
  for (size_t i = 0; i < corpus.size(); ++i) {
    std::vector<std::vector<std::string>> refs;
    for (size_t j = 0; j < corpus.size(); ++j) {
      if (j != i) refs.push_back(bleu_tokens(corpus[j]));
    }
    total += reference_bleu(refs, bleu_tokens(corpus[i]), max_n, kBleuEpsilon);
  }
  return total / corpus.size();
}

TEST(BleuTokens, LowercasesAndSplitsPunctuation) {
  EXPECT_EQ(bleu_tokens("A dog, running!"),
            (std::vector<std::string>{"a", "dog", ",", "running", "!"}));
  EXPECT_TRUE(bleu_tokens("   ").empty());
}

// Values precomputed with NLTK sentence_bleu (SmoothingFunction().method1,
// epsilon 1e-9) before this library existed.
TEST(SelfBleu, FixtureMatchesPrecomputedValues) {
  EXPECT_NEAR(self_bleu(kFixture, 4), 0.533087806102151, 1e-9);
  EXPECT_NEAR(self_bleu(kFixture, 2), 0.7204685125376623, 1e-9);
  const std::vector<double> per_sentence = {
      0.7598356856515925, 0.5923033072023249, 0.24712442545253582};
  for (size_t i = 0; i < kFixture.size(); ++i) {
    std::vector<std::vector<std::string>> refs;
    for (size_t j = 0; j < kFixture.size(); ++j) {
      if (j != i) refs.push_back(bleu_tokens(kFixture[j]));
    }
    EXPECT_NEAR(sentence_bleu(refs, bleu_tokens(kFixture[i])),
                per_sentence[i], 1e-9);
  }
}

TEST(SelfBleu, FixtureMatchesReferenceImplementation) {
  for (int n = 1; n <= 4; ++n) {
    EXPECT_NEAR(self_bleu(kFixture, n), reference_self_bleu(kFixture, n),
                1e-12);
  }
}

TEST(SelfBleu, DuplicateCorpusScoresOne) {
  const std::vector<std::string> dup(5, "two dogs play in the snow");
  EXPECT_NEAR(self_bleu(dup), 1.0, 1e-9);
}

TEST(SelfBleu, DisjointVocabularyScoresNearZero) {
  const std::vector<std::string> corpus = {"alpha beta gamma delta",
                                           "one two three four",
                                           "red green blue yellow"};
  EXPECT_LE(self_bleu(corpus), 1e-6);
  EXPECT_GE(self_bleu(corpus), 0.0);
}

TEST(SelfBleu, RejectsBadArguments) {
  EXPECT_THROW(self_bleu(std::vector<std::string>{"only one"}), InputError);
  EXPECT_THROW(self_bleu(kFixture, 0), InputError);
  EXPECT_THROW(self_bleu(kFixture, 5), InputError);
}

TEST(SentenceBleu, EmptyHypothesisScoresZero) {
  EXPECT_EQ(sentence_bleu({{"a", "b"}}, {}), 0.0);
}

TEST(SentenceBleu, ShortHypothesisDropsMissingOrders) {
  // Two tokens: orders 3 and 4 have no n-grams and are left out.
  const std::vector<std::vector<std::string>> refs = {{"a", "dog"}};
  EXPECT_NEAR(sentence_bleu(refs, {"a", "dog"}), 1.0, 1e-12);
}

TEST(SelfBleu, PropertiesOnRandomCorpora) {
  testing::Rng rng(17);
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<std::string> corpus;
    const size_t n = 2 + testing::uniform_index(rng, 6);
    for (size_t i = 0; i < n; ++i) corpus.push_back(testing::random_sentence(rng));
    const int max_n = 1 + static_cast<int>(testing::uniform_index(rng, 4));
    const double v = self_bleu(corpus, max_n);
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0 + 1e-12);
    EXPECT_NEAR(v, reference_self_bleu(corpus, max_n), 1e-12);
    std::shuffle(corpus.begin(), corpus.end(), rng);
    EXPECT_NEAR(self_bleu(corpus, max_n), v, 1e-12);
  }
}

}  // namespace
}  // namespace cfdistill
