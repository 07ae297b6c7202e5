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

#include <atomic>
#include <map>
#include <mutex>

#include "cfdistill/dataset.h"
#include "cfdistill/filters.h"
#include "cfdistill/prompt.h"
#include "cfdistill/scorer.h"
#include "cfdistill/text.h"
#include "commands.h"
#include "support.h"

namespace cfdistill {
namespace {

using testing::Rng;

CandidatePerturbation candidate(std::string premise, std::string hypothesis,
                                size_t start, size_t end,
                                std::string replacement,
                                Direction direction = Direction::parse("E2C"),
                                PromptMode mode = PromptMode::kInsertion) {
  CandidatePerturbation c;
  c.id = "c";
  c.example_id = "e";
  c.span = make_span(premise, start, end);
  c.new_premise = splice_premise(premise, c.span, replacement);
  c.premise = std::move(premise);
  c.hypothesis = std::move(hypothesis);
  c.direction = direction;
  c.mode = mode;
  c.replacement = std::move(replacement);
  return c;
}

HeuristicContext default_context() {
  return HeuristicContext::from_prompts(
      kDefaultMaskedTemplate,
      parse_icl_examples(cli::bundled_icl_examples(), "bundled"));
}

TEST(OverlapRate, JaccardOverLowercasedTokens) {
  EXPECT_DOUBLE_EQ(overlap_rate("A cat sleeps.", "a CAT sleeps"), 1.0);
  EXPECT_DOUBLE_EQ(overlap_rate("a b c", "c d"), 0.25);
  EXPECT_DOUBLE_EQ(overlap_rate("", ""), 0.0);
  EXPECT_DOUBLE_EQ(overlap_rate("x", ""), 0.0);
  // Sets, not bags.
  EXPECT_DOUBLE_EQ(overlap_rate("a a a b", "a b b"), 1.0);
}

TEST(OverlapRate, SymmetricAndBounded) {
  Rng rng(11);
  for (int i = 0; i < 300; ++i) {
    const std::string a = testing::random_sentence(rng);
    const std::string b = testing::random_sentence(rng);
    const double ab = overlap_rate(a, b);
    EXPECT_DOUBLE_EQ(ab, overlap_rate(b, a));
    EXPECT_GE(ab, 0.0);
    EXPECT_LE(ab, 1.0);
    EXPECT_DOUBLE_EQ(overlap_rate(a, a), 1.0);
  }
}

TEST(HeuristicFilter, AcceptsAnOrdinaryEdit) {
  auto c = candidate("A man sleeps on a bench.", "A man is awake.", 6, 12,
                     "reads a newspaper");
  EXPECT_EQ(heuristic_filter(c, default_context()), std::nullopt);
}

TEST(HeuristicFilter, NegationAlreadyInPremiseIsAllowed) {
  auto c = candidate("The man is not at home.", "The man is out.", 0, 7,
                     "Nobody");
  EXPECT_EQ(heuristic_filter(c, default_context()),
            RejectReason::kNegationShortcut);
  auto d = candidate("The man is not at home.", "The man is out.", 8, 14,
                     "is not");
  EXPECT_NE(heuristic_filter(d, default_context()),
            RejectReason::kNegationShortcut);
}

TEST(HeuristicFilter, ContractionsCountAsNegation) {
  auto c = candidate("A car drives down the road.", "A car moves.", 6, 12,
                     "doesn't drive");
  EXPECT_EQ(heuristic_filter(c, default_context()),
            RejectReason::kNegationShortcut);
}

TEST(HeuristicFilter, IclCopyOnlyAppliesToMaskedPrompts) {
  const auto pool = parse_icl_examples(cli::bundled_icl_examples(), "bundled");
  ASSERT_FALSE(pool.empty());
  std::string copied;
  for (const auto &ex : pool) {
    if (alnum_tokens(ex.hypothesis).size() >= 4) copied = ex.hypothesis;
  }
  ASSERT_FALSE(copied.empty());
  auto masked = candidate("A boy kicks a ball.", "A boy plays.", 0, 5, copied,
                          Direction::parse("E2C"), PromptMode::kMasked);
  auto insertion = masked;
  insertion.mode = PromptMode::kInsertion;
  const HeuristicContext ctx = default_context();
  EXPECT_EQ(heuristic_filter(masked, ctx), RejectReason::kIclCopy);
  EXPECT_NE(heuristic_filter(insertion, ctx), RejectReason::kIclCopy);
}

TEST(HeuristicFilter, DisabledChecksAreSkipped) {
  auto c = candidate("A man sleeps on a bench.", "A man is awake.", 6, 12,
                     "never sleeps");
  HeuristicConfig config;
  EXPECT_EQ(heuristic_filter(c, default_context(), config),
            RejectReason::kNegationShortcut);
  config.check_negation_shortcut = false;
  EXPECT_EQ(heuristic_filter(c, default_context(), config), std::nullopt);
}

TEST(HeuristicFilter, RejectsBadConfig) {
  HeuristicConfig config;
  config.window = 0;
  EXPECT_THROW(HeuristicFilter(default_context(), config), InputError);
  config.window = 4;
  config.overlap_threshold = 1.5;
  EXPECT_THROW(HeuristicFilter(default_context(), config), InputError);
}

TEST(HeuristicFilter, LabelledCorpus) {
  const auto rows = testing::load_filter_corpus();
  ASSERT_EQ(rows.size(), 40u);
  const HeuristicFilter filter(default_context(), {});
  std::map<std::string, int> per_class;
  for (const auto &row : rows) {
    const auto got = filter.check(row.candidate);
    const std::string name =
        got ? std::string(reject_reason_name(*got)) : "accept";
    EXPECT_EQ(name, row.expected) << row.candidate.id << ": \""
                                  << row.candidate.replacement << "\"";
    ++per_class[row.expected];
  }
  EXPECT_EQ(per_class["accept"], 10);
  for (RejectReason r : kAllRejectReasons) {
    EXPECT_EQ(per_class[std::string(reject_reason_name(r))], 5);
  }
}

TEST(RejectReason, NamesRoundTrip) {
  for (RejectReason r : kAllRejectReasons) {
    EXPECT_EQ(reject_reason_from_name(reject_reason_name(r)), r);
  }
  EXPECT_EQ(reject_reason_from_name("below_threshold"), std::nullopt);
}

// ---- teacher ----

CandidatePerturbation teacher_candidate(Direction d) {
  return candidate("A man sleeps on a bench.", "A man is awake.", 6, 12,
                   "reads a newspaper", d);
}

TEST(Teacher, DeltaIsTargetProbabilityShift) {
  const LabelDistribution orig(0.8, 0.15, 0.05);
  const LabelDistribution now(0.1, 0.2, 0.7);
  EXPECT_NEAR(teacher_delta(orig, now, Label::kContradiction), 0.65, 1e-12);
  EXPECT_NEAR(teacher_delta(orig, now, Label::kEntailment), -0.7, 1e-12);
}

TEST(Teacher, AcceptsAboveThresholdWithArgmax) {
  MockScorer scorer;
  auto c = teacher_candidate(Direction::parse("E2C"));
  scorer.set({c.premise, c.hypothesis}, LabelDistribution(0.9, 0.05, 0.05));
  scorer.set({c.new_premise, c.hypothesis}, LabelDistribution(0.1, 0.1, 0.8));
  const TeacherVerdict v = teacher_filter(c, scorer);
  ASSERT_TRUE(v.accepted);
  EXPECT_NEAR(v.score.delta, 0.75, 1e-12);
  EXPECT_EQ(v.accepted->new_label, Label::kContradiction);
  EXPECT_EQ(v.accepted->new_premise, c.new_premise);
  EXPECT_EQ(v.accepted->provenance.source_id, "e");
  EXPECT_EQ(v.accepted->provenance.replacement, "reads a newspaper");
  EXPECT_NEAR(v.accepted->provenance.delta, 0.75, 1e-12);
}

TEST(Teacher, BelowThresholdIsRejected) {
  MockScorer scorer;
  auto c = teacher_candidate(Direction::parse("E2C"));
  scorer.set({c.premise, c.hypothesis}, LabelDistribution(0.6, 0.3, 0.1));
  scorer.set({c.new_premise, c.hypothesis}, LabelDistribution(0.2, 0.3, 0.5));
  const TeacherVerdict v = teacher_filter(c, scorer);
  EXPECT_FALSE(v.accepted);
  EXPECT_EQ(v.reason, TeacherRejectReason::kBelowThreshold);
  EXPECT_NEAR(v.score.delta, 0.4, 1e-12);
}

TEST(Teacher, ArgmaxConjunctIsConfigurable) {
  MockScorer scorer;
  auto c = teacher_candidate(Direction::parse("E2N"));
  // Delta on neutral is 0.4 but contradiction still wins the argmax.
  scorer.set({c.premise, c.hypothesis}, LabelDistribution(0.9, 0.0, 0.1));
  scorer.set({c.new_premise, c.hypothesis}, LabelDistribution(0.0, 0.4, 0.6));
  TeacherConfig config;
  config.threshold = 0.3;
  TeacherVerdict v = teacher_filter(c, scorer, config);
  EXPECT_EQ(v.reason, TeacherRejectReason::kArgmaxMismatch);
  config.require_argmax = false;
  v = teacher_filter(c, scorer, config);
  EXPECT_TRUE(v.accepted);
}

TEST(Teacher, ThresholdIsInclusive) {
  const auto c = teacher_candidate(Direction::parse("E2C"));
  const TeacherScore s{LabelDistribution(0.5, 0.25, 0.25),
                       LabelDistribution(0.0, 0.25, 0.75), 0.5};
  EXPECT_TRUE(judge(c, s, {}).accepted);
}

// Acceptance can only shrink as the threshold rises.
TEST(Teacher, AcceptanceMonotoneInThreshold) {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const Direction d = Direction::all()[testing::uniform_index(rng, 6)];
    const auto c = teacher_candidate(d);
    const auto p0 = testing::random_distribution(rng);
    const auto p1 = testing::random_distribution(rng);
    const TeacherScore s{p0, p1, teacher_delta(p0, p1, d.target())};
    bool previous = true;
    for (double t = 0.0; t <= 1.0; t += 0.05) {
      TeacherConfig config;
      config.threshold = t;
      config.require_argmax = trial % 2 == 0;
      const bool accepted = judge(c, s, config).accepted.has_value();
      EXPECT_TRUE(previous || !accepted) << "threshold " << t;
      previous = accepted;
    }
  }
}

// Swapping the two distributions negates delta.
TEST(Teacher, DeltaAntisymmetric) {
  Rng rng(9);
  for (int i = 0; i < 500; ++i) {
    const auto a = testing::random_distribution(rng);
    const auto b = testing::random_distribution(rng);
    const Label t = testing::random_label(rng);
    EXPECT_NEAR(teacher_delta(a, b, t), -teacher_delta(b, a, t), 1e-15);
    EXPECT_DOUBLE_EQ(teacher_delta(a, a, t), 0.0);
  }
}

class CountingScorer : public Scorer {
 public:
  std::vector<LabelDistribution> score(
      std::span<const TextPair> pairs) override {
    calls_.fetch_add(1);
    {
      std::lock_guard<std::mutex> lock(mu_);
      for (const auto &p : pairs) seen_.push_back(p.premise);
    }
    return inner_.score(pairs);
  }
  int calls() const { return calls_.load(); }
  std::vector<std::string> seen() const { return seen_; }

  MockScorer inner_;

 private:
  std::atomic<int> calls_{0};
  std::mutex mu_;
  std::vector<std::string> seen_;
};

TEST(TeacherBatch, MatchesOneAtATimeInInputOrder) {
  Rng rng(3);
  std::vector<CandidatePerturbation> cs;
  const std::vector<std::string> words = {"reads a book", "eats lunch",
                                          "is asleep", "jumps high",
                                          "plays chess"};
  for (int i = 0; i < 37; ++i) {
    auto c = candidate("A man sleeps on a bench.", "A man is awake.", 6, 12,
                       words[i % words.size()] + " " + std::to_string(i),
                       Direction::parse(i % 2 ? "E2C" : "E2N"));
    c.id = "c" + std::to_string(i);
    cs.push_back(c);
  }
  CountingScorer scorer;
  TeacherConfig config;
  config.batch_size = 5;
  config.max_in_flight = 3;
  config.threshold = 0.2;
  const auto batch = teacher_filter_batch(cs, scorer, config);
  ASSERT_EQ(batch.verdicts.size(), cs.size());
  EXPECT_EQ(batch.failed, 0u);
  // 1 deduplicated original + 37 counterfactuals in chunks of 5.
  EXPECT_EQ(scorer.calls(), 8);
  for (size_t i = 0; i < cs.size(); ++i) {
    const TeacherVerdict single = teacher_filter(cs[i], scorer.inner_, config);
    ASSERT_TRUE(batch.verdicts[i]);
    EXPECT_EQ(batch.verdicts[i]->score.delta, single.score.delta);
    EXPECT_EQ(batch.verdicts[i]->accepted, single.accepted);
    EXPECT_EQ(batch.verdicts[i]->reason, single.reason);
  }
}

class FailingScorer : public Scorer {
 public:
  std::vector<LabelDistribution> score(
      std::span<const TextPair> pairs) override {
    for (const auto &p : pairs) {
      if (p.premise.find("boom") != std::string::npos) {
        throw TransportError("stub failure", {});
      }
    }
    return MockScorer().score(pairs);
  }
};

TEST(TeacherBatch, TransportFailuresSkipOnlyTheirChunk) {
  std::vector<CandidatePerturbation> cs;
  for (int i = 0; i < 4; ++i) {
    cs.push_back(candidate("A man sleeps on a bench.", "A man is awake.", 6,
                           12, i == 2 ? "goes boom" : "reads " + std::to_string(i)));
  }
  FailingScorer scorer;
  TeacherConfig config;
  config.batch_size = 1;
  const auto batch = teacher_filter_batch(cs, scorer, config);
  EXPECT_EQ(batch.failed, 1u);
  EXPECT_TRUE(batch.verdicts[0]);
  EXPECT_TRUE(batch.verdicts[1]);
  EXPECT_FALSE(batch.verdicts[2]);
  EXPECT_TRUE(batch.verdicts[3]);
}

}  // namespace
}  // namespace cfdistill
