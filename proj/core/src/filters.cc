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


#include "cfdistill/filters.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_set>

#include <spdlog/spdlog.h>

#include "cfdistill/text.h"
#include "cfdistill/parallel.h"

namespace cfdistill {
namespace {

constexpr std::array<std::string_view, 6> kReasonNames = {
    "instruction_leak", "icl_copy",          "premise_hypothesis_repeat",
    "excessive_overlap", "negation_shortcut", "degenerate_text",
};

std::vector<std::string> lower_alnum_tokens(std::string_view text) {
  return alnum_tokens(to_lower_ascii(text));
}

// Lowercased words with contractions folded to "n't".
std::unordered_set<std::string> negation_view(std::string_view text) {
  std::unordered_set<std::string> out;
  for (std::string w : words(text)) {
    if (w.size() >= 3 && w.compare(w.size() - 3, 3, "n't") == 0) {
      out.insert("n't");
    }
    out.insert(std::move(w));
  }
  return out;
}

}  // namespace

std::string_view reject_reason_name(RejectReason reason) {
  return kReasonNames[static_cast<size_t>(reason)];
}

std::optional<RejectReason> reject_reason_from_name(std::string_view name) {
  for (RejectReason r : kAllRejectReasons) {
    if (reject_reason_name(r) == name) return r;
  }
  return std::nullopt;
}

double overlap_rate(std::string_view a, std::string_view b) {
  const auto ta = lower_alnum_tokens(a);
  const auto tb = lower_alnum_tokens(b);
  const std::set<std::string> sa(ta.begin(), ta.end());
  const std::set<std::string> sb(tb.begin(), tb.end());
  if (sa.empty() && sb.empty()) return 0.0;
  size_t common = 0;
  for (const auto &t : sa) common += sb.count(t);
  return static_cast<double>(common) /
         static_cast<double>(sa.size() + sb.size() - common);
}

const std::vector<std::string> &default_negation_words() {
  static const std::vector<std::string> kWords = {
      "not",  "no",      "never",   "n't",     "none", "nothing",
      "nobody", "nowhere", "neither", "nor", "cannot", "without",
  };
  return kWords;
}

void HeuristicConfig::validate() const {
  if (window == 0) throw InputError("heuristic window must be positive");
  if (!(overlap_threshold >= 0.0 && overlap_threshold <= 1.0)) {
    throw InputError("overlap threshold must be in [0, 1]");
  }
}

HeuristicContext HeuristicContext::from_prompts(
    std::string_view masked_template, std::span<const IclExample> icl_pool) {
  HeuristicContext ctx;
  ctx.instruction_texts = cfdistill::instruction_texts(masked_template);
  for (const IclExample &ex : icl_pool) {
    const size_t pos = ex.masked_premise.find(kMaskToken);
    if (pos == std::string::npos) {
      ctx.icl_texts.push_back(ex.masked_premise);
    } else {
      ctx.icl_texts.push_back(ex.masked_premise.substr(0, pos));
      ctx.icl_texts.push_back(
          ex.masked_premise.substr(pos + kMaskToken.size()));
    }
    ctx.icl_texts.push_back(ex.hypothesis);
    ctx.icl_texts.push_back(ex.replacement);
  }
  return ctx;
}

HeuristicFilter::HeuristicFilter(const HeuristicContext &context,
                                 HeuristicConfig config)
    : config_(std::move(config)) {
  config_.validate();
  instruction_grams_ = grams_of(context.instruction_texts);
  icl_grams_ = grams_of(context.icl_texts);
}

std::set<HeuristicFilter::Gram> HeuristicFilter::grams_of(
    const std::vector<std::string> &texts) const {
  std::set<Gram> out;
  const size_t n = config_.window;
  for (const std::string &text : texts) {
    const auto tokens = lower_alnum_tokens(text);
    for (size_t i = 0; i + n <= tokens.size(); ++i) {
      out.emplace(tokens.begin() + i, tokens.begin() + i + n);
    }
  }
  return out;
}

bool HeuristicFilter::shares_gram(const std::vector<std::string> &tokens,
                                  const std::set<Gram> &grams) const {
  const size_t n = config_.window;
  for (size_t i = 0; i + n <= tokens.size(); ++i) {
    if (grams.count(Gram(tokens.begin() + i, tokens.begin() + i + n))) {
      return true;
    }
  }
  return false;
}

std::optional<RejectReason> HeuristicFilter::check(
    const CandidatePerturbation &c) const {
  const auto tokens = lower_alnum_tokens(c.replacement);

  if (config_.check_instruction_leak &&
      shares_gram(tokens, instruction_grams_)) {
    return RejectReason::kInstructionLeak;
  }
  if (config_.check_icl_copy && c.mode == PromptMode::kMasked &&
      shares_gram(tokens, icl_grams_)) {
    return RejectReason::kIclCopy;
  }
  if (config_.check_premise_hypothesis_repeat &&
      shares_gram(tokens, grams_of({c.premise, c.hypothesis}))) {
    return RejectReason::kPremiseHypothesisRepeat;
  }
  if (config_.check_excessive_overlap &&
      overlap_rate(c.new_premise, c.hypothesis) >= config_.overlap_threshold) {
    return RejectReason::kExcessiveOverlap;
  }
  if (config_.check_negation_shortcut) {
    const auto added = negation_view(c.replacement);
    const auto present = negation_view(c.premise);
    for (const std::string &neg : config_.negation_words) {
      if (added.count(neg) && !present.count(neg)) {
        return RejectReason::kNegationShortcut;
      }
    }
  }
  if (config_.check_degenerate_text &&
      (is_blank_or_punct(c.replacement) ||
       normalize_whitespace(c.new_premise) == normalize_whitespace(c.premise))) {
    return RejectReason::kDegenerateText;
  }
  return std::nullopt;
}

std::optional<RejectReason> heuristic_filter(
    const CandidatePerturbation &candidate, const HeuristicContext &context,
    const HeuristicConfig &config) {
  return HeuristicFilter(context, config).check(candidate);
}

double teacher_delta(const LabelDistribution &p_orig,
                     const LabelDistribution &p_new, Label target) {
  return p_new[target] - p_orig[target];
}

void TeacherConfig::validate() const {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw InputError("teacher threshold must be in [0, 1]");
  }
  if (max_in_flight == 0) throw InputError("max_in_flight must be positive");
  if (batch_size == 0) throw InputError("batch_size must be positive");
}

std::string_view teacher_reject_reason_name(TeacherRejectReason reason) {
  return reason == TeacherRejectReason::kBelowThreshold ? "below_threshold"
                                                         : "argmax_mismatch";
}

TeacherVerdict judge(const CandidatePerturbation &c, const TeacherScore &score,
                     const TeacherConfig &config) {
  TeacherVerdict v{score, std::nullopt, std::nullopt};
  const Label target = c.direction.target();
  if (score.delta < config.threshold) {
    v.reason = TeacherRejectReason::kBelowThreshold;
  } else if (config.require_argmax && score.p_new.argmax() != target) {
    v.reason = TeacherRejectReason::kArgmaxMismatch;
  } else {
    DistilledExample d;
    d.id = c.id;
    d.new_premise = c.new_premise;
    d.hypothesis = c.hypothesis;
    d.new_label = target;
    d.provenance = {c.example_id, c.span.start, c.span.end, c.replacement,
                    c.direction,  c.mode,       score.delta};
    v.accepted = std::move(d);
  }
  return v;
}

TeacherVerdict teacher_filter(const CandidatePerturbation &candidate,
                              Scorer &scorer, const TeacherConfig &config) {
  config.validate();
  const std::vector<TextPair> pairs = {
      {candidate.premise, candidate.hypothesis},
      {candidate.new_premise, candidate.hypothesis},
  };
  const auto dists = scorer.score(pairs);
  if (dists.size() != 2) {
    throw TransportError("scorer returned the wrong number of distributions",
                         {});
  }
  const double delta =
      teacher_delta(dists[0], dists[1], candidate.direction.target());
  return judge(candidate, {dists[0], dists[1], delta}, config);
}

TeacherBatchResult teacher_filter_batch(
    std::span<const CandidatePerturbation> candidates, Scorer &scorer,
    const TeacherConfig &config) {
  config.validate();

  // Every distinct pair to score: originals first, deduplicated, then one
  // counterfactual pair per candidate.
  std::vector<TextPair> pairs;
  std::map<std::pair<std::string, std::string>, size_t> original_slot;
  std::vector<size_t> orig_index(candidates.size());
  for (size_t i = 0; i < candidates.size(); ++i) {
    const auto &c = candidates[i];
    auto key = std::make_pair(normalize_whitespace(c.premise),
                              normalize_whitespace(c.hypothesis));
    auto [it, inserted] = original_slot.emplace(std::move(key), pairs.size());
    if (inserted) pairs.push_back({c.premise, c.hypothesis});
    orig_index[i] = it->second;
  }
  const size_t first_new = pairs.size();
  for (const auto &c : candidates) pairs.push_back({c.new_premise, c.hypothesis});

  std::vector<std::optional<LabelDistribution>> dists(pairs.size());
  const size_t chunk = config.batch_size;
  const size_t chunks = (pairs.size() + chunk - 1) / chunk;
  parallel_for(chunks, config.max_in_flight, [&](size_t k) {
    const size_t begin = k * chunk;
    const size_t end = std::min(pairs.size(), begin + chunk);
    const std::span<const TextPair> slice(pairs.data() + begin, end - begin);
    try {
      auto got = scorer.score(slice);
      if (got.size() != slice.size()) {
        throw TransportError("scorer returned " + std::to_string(got.size()) +
                                 " distributions for " +
                                 std::to_string(slice.size()) + " pairs",
                             {});
      }
      for (size_t i = 0; i < got.size(); ++i) dists[begin + i] = got[i];
    } catch (const TransportError &e) {
      spdlog::warn("scoring pairs [{}, {}) failed: {}", begin, end, e.what());
    }
  });

  TeacherBatchResult out;
  out.verdicts.resize(candidates.size());
  for (size_t i = 0; i < candidates.size(); ++i) {
    const auto &p_orig = dists[orig_index[i]];
    const auto &p_new = dists[first_new + i];
    if (!p_orig || !p_new) {
      ++out.failed;
      continue;
    }
    const double delta =
        teacher_delta(*p_orig, *p_new, candidates[i].direction.target());
    out.verdicts[i] = judge(candidates[i], {*p_orig, *p_new, delta}, config);
  }
  return out;
}

}  // namespace cfdistill
