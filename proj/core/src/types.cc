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

#include "cfdistill/types.h"

#include <cmath>

#include "cfdistill/errors.h"
#include "cfdistill/text.h"

namespace cfdistill {

std::string_view label_name(Label label) {
  switch (label) {
    case Label::kEntailment:
      return "entailment";
    case Label::kNeutral:
      return "neutral";
    case Label::kContradiction:
      return "contradiction";
  }
  return "";
}

std::optional<Label> label_from_name(std::string_view name) {
  for (Label l : kAllLabels) {
    if (label_name(l) == name) return l;
  }
  return std::nullopt;
}

std::string_view label_word(Label label) {
  switch (label) {
    case Label::kEntailment:
      return "true";
    case Label::kNeutral:
      return "possible";
    case Label::kContradiction:
      return "false";
  }
  return "";
}

std::optional<Label> label_from_word(std::string_view word) {
  for (Label l : kAllLabels) {
    if (label_word(l) == word) return l;
  }
  return std::nullopt;
}

char label_letter(Label label) {
  switch (label) {
    case Label::kEntailment:
      return 'E';
    case Label::kNeutral:
      return 'N';
    case Label::kContradiction:
      return 'C';
  }
  return '?';
}

Direction Direction::make(Label source, Label target) {
  if (source == target) {
    throw InputError("direction source and target must differ (" +
                     std::string(label_name(source)) + ")");
  }
  return Direction(source, target);
}

Direction Direction::parse(std::string_view short_name) {
  auto from_letter = [](char c) -> std::optional<Label> {
    switch (c) {
      case 'E':
        return Label::kEntailment;
      case 'N':
        return Label::kNeutral;
      case 'C':
        return Label::kContradiction;
    }
    return std::nullopt;
  };
  if (short_name.size() == 3 && short_name[1] == '2') {
    auto s = from_letter(short_name[0]);
    auto t = from_letter(short_name[2]);
    if (s && t && *s != *t) return Direction(*s, *t);
  }
  throw InputError("invalid direction '" + std::string(short_name) +
                   "' (expected one of E2C E2N N2C N2E C2N C2E)");
}

const std::vector<Direction> &Direction::all() {
  static const std::vector<Direction> kAll = {
      Direction(Label::kEntailment, Label::kContradiction),
      Direction(Label::kEntailment, Label::kNeutral),
      Direction(Label::kNeutral, Label::kContradiction),
      Direction(Label::kNeutral, Label::kEntailment),
      Direction(Label::kContradiction, Label::kNeutral),
      Direction(Label::kContradiction, Label::kEntailment),
  };
  return kAll;
}

std::vector<Direction> Direction::from(Label source) {
  std::vector<Direction> out;
  for (const Direction &d : all()) {
    if (d.source() == source) out.push_back(d);
  }
  return out;
}

std::string Direction::short_name() const {
  return {label_letter(source_), '2', label_letter(target_)};
}

LabelDistribution::LabelDistribution(double entailment, double neutral,
                                     double contradiction)
    : LabelDistribution(std::array<double, 3>{entailment, neutral,
                                              contradiction}) {}

LabelDistribution::LabelDistribution(const std::array<double, 3> &probs)
    : probs_(probs) {
  double sum = 0.0;
  for (double p : probs_) {
    if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
      throw InputError("label probability out of [0, 1]: " +
                       std::to_string(p));
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kSumTolerance) {
    throw InputError("label probabilities sum to " + std::to_string(sum) +
                     ", expected 1");
  }
}

Label LabelDistribution::argmax() const {
  size_t best = 0;
  for (size_t i = 1; i < probs_.size(); ++i) {
    if (probs_[i] > probs_[best]) best = i;
  }
  return static_cast<Label>(best);
}

std::string_view prompt_mode_name(PromptMode mode) {
  return mode == PromptMode::kMasked ? "masked" : "insertion";
}

std::optional<PromptMode> prompt_mode_from_name(std::string_view name) {
  if (name == "masked") return PromptMode::kMasked;
  if (name == "insertion") return PromptMode::kInsertion;
  return std::nullopt;
}

NliExample DistilledExample::as_example() const {
  return NliExample{id, new_premise, hypothesis, new_label, {}};
}

Span make_span(std::string_view premise, size_t start, size_t end) {
  if (start >= end || end > premise.size()) {
    throw InputError("span [" + std::to_string(start) + ", " +
                     std::to_string(end) + ") invalid for premise of length " +
                     std::to_string(premise.size()));
  }
  return Span{start, end, std::string(premise.substr(start, end - start))};
}

void check_span_set(std::string_view premise, const std::vector<Span> &spans) {
  size_t previous_end = 0;
  for (size_t i = 0; i < spans.size(); ++i) {
    const Span &s = spans[i];
    Span expected = make_span(premise, s.start, s.end);
    if (expected.text != s.text) {
      throw InputError("span text \"" + s.text +
                       "\" does not match premise at [" +
                       std::to_string(s.start) + ", " + std::to_string(s.end) +
                       ")");
    }
    if (i > 0 && s.start < previous_end) {
      throw InputError("spans overlap or are not sorted at index " +
                       std::to_string(i));
    }
    previous_end = s.end;
  }
}

std::string splice_premise(std::string_view premise, const Span &span,
                           std::string_view replacement) {
  if (span.start > span.end || span.end > premise.size()) {
    throw InputError("span [" + std::to_string(span.start) + ", " +
                     std::to_string(span.end) + ") out of bounds");
  }
  std::string out;
  out.reserve(premise.size() + replacement.size());
  out.append(premise.substr(0, span.start));
  out.append(replacement);
  out.append(premise.substr(span.end));
  return normalize_whitespace(out);
}

}  // namespace cfdistill
