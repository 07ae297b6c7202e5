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


#ifndef CFDISTILL_FILTERS_H_
#define CFDISTILL_FILTERS_H_

#include <array>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cfdistill/prompt.h"
#include "cfdistill/scorer.h"
#include "cfdistill/types.h"

namespace cfdistill {

// Heuristic rejection reasons, in the order the checks run.
enum class RejectReason {
  kInstructionLeak,
  kIclCopy,
  kPremiseHypothesisRepeat,
  kExcessiveOverlap,
  kNegationShortcut,
  kDegenerateText,
};

inline constexpr std::array<RejectReason, 6> kAllRejectReasons = {
    RejectReason::kInstructionLeak,         RejectReason::kIclCopy,
    RejectReason::kPremiseHypothesisRepeat, RejectReason::kExcessiveOverlap,
    RejectReason::kNegationShortcut,        RejectReason::kDegenerateText,
};

// "instruction_leak", "icl_copy", ...
std::string_view reject_reason_name(RejectReason reason);
std::optional<RejectReason> reject_reason_from_name(std::string_view name);

// Jaccard similarity of the lowercased alphanumeric token sets of `a` and
// `b`. Two empty sets give 0.
double overlap_rate(std::string_view a, std::string_view b);

const std::vector<std::string> &default_negation_words();

struct HeuristicConfig {
  // Contiguous-token window for the leak, copy and repeat checks.
  size_t window = 4;
  double overlap_threshold = 0.8;
  std::vector<std::string> negation_words = default_negation_words();

  bool check_instruction_leak = true;
  bool check_icl_copy = true;
  bool check_premise_hypothesis_repeat = true;
  bool check_excessive_overlap = true;
  bool check_negation_shortcut = true;
  bool check_degenerate_text = true;

  void validate() const;
};

// Texts a replacement must not lift phrases from.
struct HeuristicContext {
  // Prompt boilerplate, see instruction_texts().
  std::vector<std::string> instruction_texts;
  // Demonstration premises (split at the blank), hypotheses and
  // replacements. Only consulted for masked-mode candidates.
  std::vector<std::string> icl_texts;

  static HeuristicContext from_prompts(std::string_view masked_template,
                                       std::span<const IclExample> icl_pool);
};

// Precomputes the n-gram tables of a context so many candidates can be
// checked cheaply. Immutable after construction; thread-safe.
class HeuristicFilter {
 public:
  HeuristicFilter(const HeuristicContext &context, HeuristicConfig config);

  // nullopt means accept; otherwise the first failing check.
  std::optional<RejectReason> check(
      const CandidatePerturbation &candidate) const;

  const HeuristicConfig &config() const { return config_; }

 private:
  using Gram = std::vector<std::string>;

  std::set<Gram> grams_of(const std::vector<std::string> &texts) const;
  bool shares_gram(const std::vector<std::string> &tokens,
                   const std::set<Gram> &grams) const;

  HeuristicConfig config_;
  std::set<Gram> instruction_grams_;
  std::set<Gram> icl_grams_;
};

std::optional<RejectReason> heuristic_filter(
    const CandidatePerturbation &candidate, const HeuristicContext &context,
    const HeuristicConfig &config = {});

// p_new[target] - p_orig[target].
double teacher_delta(const LabelDistribution &p_orig,
                     const LabelDistribution &p_new, Label target);

struct TeacherScore {
  LabelDistribution p_orig;
  LabelDistribution p_new;
  double delta = 0.0;
};

struct TeacherConfig {
  double threshold = 0.5;
  // Also require the teacher's top label on (P', H) to be the target.
  bool require_argmax = true;
  // Scorer requests in flight during batch filtering.
  size_t max_in_flight = 8;
  // Pairs per scorer call during batch filtering.
  size_t batch_size = 16;

  void validate() const;
};

enum class TeacherRejectReason { kBelowThreshold, kArgmaxMismatch };

// "below_threshold", "argmax_mismatch"
std::string_view teacher_reject_reason_name(TeacherRejectReason reason);

struct TeacherVerdict {
  TeacherScore score;
  std::optional<DistilledExample> accepted;
  std::optional<TeacherRejectReason> reason;
};

// Applies the acceptance rule to an already scored candidate.
TeacherVerdict judge(const CandidatePerturbation &candidate,
                     const TeacherScore &score, const TeacherConfig &config);

// Scores (P, H) and (P', H) and judges. Throws TransportError when the
// scorer fails.
TeacherVerdict teacher_filter(const CandidatePerturbation &candidate,
                              Scorer &scorer, const TeacherConfig &config = {});

struct TeacherBatchResult {
  // Parallel to the input; nullopt where scoring failed.
  std::vector<std::optional<TeacherVerdict>> verdicts;
  size_t failed = 0;
};

// Batch version of teacher_filter. Original pairs are scored once each.
// Transport failures are logged and mark the affected candidates as
// failed; FatalBackendError propagates. Output order equals input order.
TeacherBatchResult teacher_filter_batch(
    std::span<const CandidatePerturbation> candidates, Scorer &scorer,
    const TeacherConfig &config = {});

}  // namespace cfdistill

#endif  // CFDISTILL_FILTERS_H_
