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

// Domain model shared by every stage of the pipeline. All types here are
// immutable-by-convention value objects and safe to share across threads.

#ifndef CFDISTILL_TYPES_H_
#define CFDISTILL_TYPES_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cfdistill {

// NLI label. The enumerator order is the tie-breaking order used by every
// argmax in the library: Entailment < Neutral < Contradiction.
enum class Label : uint8_t {
  kEntailment = 0,
  kNeutral = 1,
  kContradiction = 2,
};

inline constexpr std::array<Label, 3> kAllLabels = {
    Label::kEntailment, Label::kNeutral, Label::kContradiction};

inline constexpr size_t label_index(Label label) {
  return static_cast<size_t>(label);
}

// Dataset spelling: "entailment", "neutral", "contradiction".
std::string_view label_name(Label label);
std::optional<Label> label_from_name(std::string_view name);

// Surface word used inside prompts: "true", "possible", "false".
std::string_view label_word(Label label);
std::optional<Label> label_from_word(std::string_view word);

// 'E', 'N' or 'C'.
char label_letter(Label label);

// A label transition source -> target with source != target.
class Direction {
 public:
  // Throws InputError when source == target.
  static Direction make(Label source, Label target);

  // Parses a short name such as "E2C". Throws InputError on bad input.
  static Direction parse(std::string_view short_name);

  // The six valid directions in table order: E2C E2N N2C N2E C2N C2E.
  static const std::vector<Direction> &all();

  // The two directions leaving `source`, in table order.
  static std::vector<Direction> from(Label source);

  Label source() const { return source_; }
  Label target() const { return target_; }
  std::string short_name() const;

  friend bool operator==(const Direction &, const Direction &) = default;

 private:
  Direction(Label source, Label target) : source_(source), target_(target) {}

  Label source_;
  Label target_;
};

// A probability distribution over the three labels.
class LabelDistribution {
 public:
  static constexpr double kSumTolerance = 1e-6;

  // Throws InputError if any probability is outside [0, 1] or non-finite,
  // or if the sum deviates from 1 by more than kSumTolerance.
  LabelDistribution(double entailment, double neutral, double contradiction);
  explicit LabelDistribution(const std::array<double, 3> &probs);

  double operator[](Label label) const { return probs_[label_index(label)]; }
  const std::array<double, 3> &probs() const { return probs_; }

  // Highest-probability label; ties go to the earlier label.
  Label argmax() const;

  friend bool operator==(const LabelDistribution &,
                         const LabelDistribution &) = default;

 private:
  std::array<double, 3> probs_;
};

enum class PromptMode : uint8_t { kMasked, kInsertion };

std::string_view prompt_mode_name(PromptMode mode);
std::optional<PromptMode> prompt_mode_from_name(std::string_view name);

// A byte range [start, end) of a premise together with its text.
struct Span {
  size_t start = 0;
  size_t end = 0;
  std::string text;

  size_t length() const { return end - start; }
  friend bool operator==(const Span &, const Span &) = default;
};

struct NliExample {
  std::string id;
  std::string premise;
  std::string hypothesis;
  Label label = Label::kEntailment;
  // Precomputed perturbation locations supplied by the input file, if any.
  std::vector<Span> spans;

  friend bool operator==(const NliExample &, const NliExample &) = default;
};

// Where a distilled counterfactual came from.
struct Provenance {
  std::string source_id;
  size_t span_start = 0;
  size_t span_end = 0;
  std::string replacement;
  Direction direction = Direction::make(Label::kEntailment,
                                        Label::kContradiction);
  PromptMode mode = PromptMode::kInsertion;
  double delta = 0.0;

  friend bool operator==(const Provenance &, const Provenance &) = default;
};

// A teacher-accepted counterfactual. new_label always equals
// provenance.direction.target().
struct DistilledExample {
  std::string id;
  std::string new_premise;
  std::string hypothesis;
  Label new_label = Label::kEntailment;
  Provenance provenance;

  // The counterfactual as a plain NLI record.
  NliExample as_example() const;

  friend bool operator==(const DistilledExample &,
                         const DistilledExample &) = default;
};

// One generated span replacement, before any filtering.
struct CandidatePerturbation {
  std::string id;
  std::string example_id;
  // Original premise and hypothesis; kept so the filter stage can run from
  // the candidates file alone.
  std::string premise;
  std::string hypothesis;
  Span span;
  Direction direction = Direction::make(Label::kEntailment,
                                        Label::kContradiction);
  PromptMode mode = PromptMode::kInsertion;
  int sample_index = 0;
  std::string replacement;
  std::string new_premise;
  std::string raw_completion;
  std::string params_fingerprint;

  friend bool operator==(const CandidatePerturbation &,
                         const CandidatePerturbation &) = default;
};

// Validated span constructor. Throws InputError unless
// start < end <= premise.size().
Span make_span(std::string_view premise, size_t start, size_t end);

// Checks that every span is in bounds, its text matches the premise, and
// the set is sorted by start and non-overlapping. Throws InputError.
void check_span_set(std::string_view premise, const std::vector<Span> &spans);

// Builds P' = premise with span replaced by `replacement`, whitespace
// normalized.
std::string splice_premise(std::string_view premise, const Span &span,
                           std::string_view replacement);

}  // namespace cfdistill

#endif  // CFDISTILL_TYPES_H_
