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

// Prompt construction for the two generation modes.
//
// Masked mode replaces the chosen span with "[blank]" and asks for a filler
// that makes the hypothesis hold with the target label. In-context
// demonstrations are rendered with the same template before the query; in
// a demonstration the gap is written as "___" followed by the gold filler,
// so the full prompt carries exactly one "[blank]".
//
// Insertion mode sends the text around the span as a prefix/suffix pair:
//
//   <prefix> [insert] <suffix>. It is <word(target)> that <hypothesis>
//
// and never carries demonstrations.

#ifndef CFDISTILL_PROMPT_H_
#define CFDISTILL_PROMPT_H_

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cfdistill/types.h"

namespace cfdistill {

inline constexpr std::string_view kMaskToken = "[blank]";
inline constexpr std::string_view kInsertToken = "[insert]";
inline constexpr std::string_view kDemoGap = "___";

inline constexpr std::string_view kDefaultMaskedTemplate =
    "Fill in the blank so that the conclusion is {label_word}.\n"
    "Premise: {masked_premise}\n"
    "Conclusion: {hypothesis}\n"
    "Answer:";

// One in-context demonstration for masked mode.
struct IclExample {
  // Premise with exactly one "[blank]".
  std::string masked_premise;
  std::string hypothesis;
  // The label the filled premise satisfies.
  Label label = Label::kEntailment;
  std::string replacement;
};

struct PromptRequest {
  PromptMode mode = PromptMode::kMasked;
  // Full text for masked mode (demonstrations + query); empty for insertion.
  std::string prompt;
  // Insertion mode only.
  std::string prefix;
  std::string suffix;
  // Offset in `suffix` where the ". It is <word> that <H>" tail starts.
  size_t suffix_marker = 0;

  std::string example_id;
  Span span;
  Direction direction = Direction::make(Label::kEntailment,
                                        Label::kContradiction);
  std::vector<IclExample> icl_examples;

  // The text a completion backend sees: `prompt` for masked mode,
  // "<prefix>[insert]<suffix>" for insertion mode.
  std::string text() const;
};

// Substitutes {masked_premise}, {hypothesis} and {label_word}.
std::string render_template(std::string_view tmpl,
                            std::string_view masked_premise,
                            std::string_view hypothesis,
                            std::string_view label_word);

// Throws InputError unless `tmpl` has exactly one {masked_premise} and no
// literal mask token.
void validate_template(std::string_view tmpl);

// Reads a template override file. The file content is used verbatim except
// for one trailing newline.
std::string load_template(const std::filesystem::path &path);

// Throws InputError when the span is out of bounds, the direction does not
// leave example.label, or the premise/hypothesis already contains the mask
// token.
PromptRequest build_masked_prompt(
    const NliExample &example, const Span &span, Direction direction,
    std::span<const IclExample> icl,
    std::string_view tmpl = kDefaultMaskedTemplate);

PromptRequest build_insertion_prompt(const NliExample &example,
                                     const Span &span, Direction direction);

// Reads demonstrations: dataset records whose premise holds one "[blank]"
// plus a "replacement" field.
std::vector<IclExample> read_icl_examples(const std::filesystem::path &path);

// Same format as read_icl_examples, from an in-memory string; `name`
// labels error messages.
std::vector<IclExample> parse_icl_examples(std::string_view text,
                                           const std::string &name);

// The first `count` demonstrations whose label equals `target`, falling back
// to any label when too few match. Order is file order.
std::vector<IclExample> pick_icl_examples(std::span<const IclExample> pool,
                                          Label target, size_t count);

// Instruction and boilerplate text of both modes, with placeholders removed.
// Used by the instruction-leak filter.
std::vector<std::string> instruction_texts(std::string_view tmpl);

}  // namespace cfdistill

#endif  // CFDISTILL_PROMPT_H_
