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

#include "cfdistill/prompt.h"

#include <array>
#include <fstream>
#include <sstream>

#include "cfdistill/errors.h"
#include "cfdistill/text.h"
#include "jsonl.h"

namespace cfdistill {
namespace {

constexpr std::string_view kMaskedPremiseKey = "{masked_premise}";
constexpr std::string_view kHypothesisKey = "{hypothesis}";
constexpr std::string_view kLabelWordKey = "{label_word}";

size_t count_occurrences(std::string_view text, std::string_view needle) {
  size_t count = 0;
  for (size_t pos = text.find(needle); pos != std::string_view::npos;
       pos = text.find(needle, pos + needle.size())) {
    ++count;
  }
  return count;
}

std::string replace_all(std::string_view text, std::string_view from,
                        std::string_view to) {
  std::string out;
  size_t pos = 0;
  for (size_t hit = text.find(from); hit != std::string_view::npos;
       hit = text.find(from, pos)) {
    out.append(text.substr(pos, hit - pos));
    out.append(to);
    pos = hit + from.size();
  }
  out.append(text.substr(pos));
  return out;
}

void check_common(const NliExample &example, const Span &span,
                  Direction direction) {
  if (direction.source() != example.label) {
    throw InputError("direction " + direction.short_name() +
                     " does not start at the label of example " + example.id);
  }
  Span expected = make_span(example.premise, span.start, span.end);
  if (expected.text != span.text) {
    throw InputError("span text does not match premise of example " +
                     example.id);
  }
}

std::string insertion_tail(Direction direction, std::string_view hypothesis) {
  std::string tail = ". It is ";
  tail += label_word(direction.target());
  tail += " that ";
  tail += hypothesis;
  return tail;
}

}  // namespace

std::string PromptRequest::text() const {
  if (mode == PromptMode::kMasked) return prompt;
  std::string out = prefix;
  out += kInsertToken;
  out += suffix;
  return out;
}

std::string render_template(std::string_view tmpl,
                            std::string_view masked_premise,
                            std::string_view hypothesis,
                            std::string_view label_word) {
  const std::array<std::pair<std::string_view, std::string_view>, 3> keys = {{
      {kMaskedPremiseKey, masked_premise},
      {kHypothesisKey, hypothesis},
      {kLabelWordKey, label_word},
  }};
  std::string out;
  size_t i = 0;
  while (i < tmpl.size()) {
    bool matched = false;
    if (tmpl[i] == '{') {
      for (const auto &[key, value] : keys) {
        if (tmpl.substr(i, key.size()) == key) {
          out.append(value);
          i += key.size();
          matched = true;
          break;
        }
      }
    }
    if (!matched) out.push_back(tmpl[i++]);
  }
  return out;
}

void validate_template(std::string_view tmpl) {
  if (count_occurrences(tmpl, kMaskedPremiseKey) != 1) {
    throw InputError("template must contain {masked_premise} exactly once");
  }
  if (tmpl.find(kMaskToken) != std::string_view::npos) {
    throw InputError("template must not contain the mask token itself");
  }
}

std::string load_template(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open template file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string tmpl = buf.str();
  if (!tmpl.empty() && tmpl.back() == '\n') tmpl.pop_back();
  validate_template(tmpl);
  return tmpl;
}

PromptRequest build_masked_prompt(const NliExample &example, const Span &span,
                                  Direction direction,
                                  std::span<const IclExample> icl,
                                  std::string_view tmpl) {
  check_common(example, span, direction);
  validate_template(tmpl);
  if (example.premise.find(kMaskToken) != std::string::npos ||
      example.hypothesis.find(kMaskToken) != std::string::npos) {
    throw InputError("example " + example.id + " already contains " +
                     std::string(kMaskToken));
  }

  std::string masked = example.premise.substr(0, span.start);
  masked += kMaskToken;
  masked += example.premise.substr(span.end);

  PromptRequest req;
  req.mode = PromptMode::kMasked;
  req.example_id = example.id;
  req.span = span;
  req.direction = direction;
  req.icl_examples.assign(icl.begin(), icl.end());

  for (const IclExample &demo : icl) {
    if (demo.hypothesis.find(kMaskToken) != std::string::npos ||
        demo.replacement.find(kMaskToken) != std::string::npos) {
      throw InputError("demonstration contains the mask token outside its "
                       "premise");
    }
    std::string demo_premise =
        replace_all(demo.masked_premise, kMaskToken, kDemoGap);
    req.prompt += render_template(tmpl, demo_premise, demo.hypothesis,
                                  label_word(demo.label));
    req.prompt += " ";
    req.prompt += demo.replacement;
    req.prompt += "\n\n";
  }
  req.prompt += render_template(tmpl, masked, example.hypothesis,
                                label_word(direction.target()));
  return req;
}

PromptRequest build_insertion_prompt(const NliExample &example,
                                     const Span &span, Direction direction) {
  check_common(example, span, direction);
  PromptRequest req;
  req.mode = PromptMode::kInsertion;
  req.example_id = example.id;
  req.span = span;
  req.direction = direction;
  req.prefix = example.premise.substr(0, span.start);
  req.suffix = example.premise.substr(span.end);
  req.suffix_marker = req.suffix.size();
  req.suffix += insertion_tail(direction, example.hypothesis);
  return req;
}

namespace {

std::vector<IclExample> parse_icl_stream(std::istream &in,
                                         const std::string &name) {
  std::vector<IclExample> out;
  internal::for_each_record(
      in, name, [&](const internal::Json &record, size_t line, size_t) {
        IclExample demo;
        demo.masked_premise =
            internal::require_string(record, "premise", name, line);
        demo.hypothesis =
            internal::require_string(record, "hypothesis", name, line);
        demo.label = internal::require_label(record, "label", name, line);
        demo.replacement =
            internal::require_string(record, "replacement", name, line);
        if (count_occurrences(demo.masked_premise, kMaskToken) != 1) {
          throw DatasetError(name, line,
                             "demonstration premise must contain exactly one " +
                                 std::string(kMaskToken));
        }
        out.push_back(std::move(demo));
      });
  return out;
}

}  // namespace

std::vector<IclExample> read_icl_examples(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open input file: " + path.string());
  return parse_icl_stream(in, path.string());
}

std::vector<IclExample> parse_icl_examples(std::string_view text,
                                           const std::string &name) {
  std::istringstream in{std::string(text)};
  return parse_icl_stream(in, name);
}

std::vector<IclExample> pick_icl_examples(std::span<const IclExample> pool,
                                          Label target, size_t count) {
  std::vector<IclExample> out;
  std::vector<bool> used(pool.size(), false);
  for (size_t i = 0; i < pool.size() && out.size() < count; ++i) {
    if (pool[i].label == target) {
      out.push_back(pool[i]);
      used[i] = true;
    }
  }
  for (size_t i = 0; i < pool.size() && out.size() < count; ++i) {
    if (!used[i]) out.push_back(pool[i]);
  }
  return out;
}

std::vector<std::string> instruction_texts(std::string_view tmpl) {
  std::vector<std::string> out;
  std::string piece;
  size_t i = 0;
  auto flush = [&] {
    std::string normalized = normalize_whitespace(piece);
    if (!normalized.empty()) out.push_back(std::move(normalized));
    piece.clear();
  };
  while (i < tmpl.size()) {
    bool at_key = false;
    for (std::string_view key : {kMaskedPremiseKey, kHypothesisKey}) {
      if (tmpl.substr(i, key.size()) == key) {
        flush();
        i += key.size();
        at_key = true;
        break;
      }
    }
    if (at_key) continue;
    piece.push_back(tmpl[i++]);
  }
  flush();

  // {label_word} is part of the instruction sentence; expand it per label.
  std::vector<std::string> expanded;
  for (const std::string &p : out) {
    if (p.find(kLabelWordKey) == std::string::npos) {
      expanded.push_back(p);
      continue;
    }
    for (Label l : kAllLabels) {
      expanded.push_back(replace_all(p, kLabelWordKey, label_word(l)));
    }
  }
  for (Label l : kAllLabels) {
    expanded.push_back("It is " + std::string(label_word(l)) + " that");
  }
  return expanded;
}

}  // namespace cfdistill
