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

#include "cfdistill/spanner.h"

#include <algorithm>
#include <unordered_set>

#include "cfdistill/errors.h"
#include "cfdistill/text.h"

namespace cfdistill {
namespace {

// Half-open range of word indices.
struct Chunk {
  size_t begin;
  size_t end;
  size_t size() const { return end - begin; }
};

void split_long(const Chunk &chunk, size_t max_tokens,
                std::vector<Chunk> *out) {
  if (chunk.size() <= max_tokens) {
    out->push_back(chunk);
    return;
  }
  const size_t mid = chunk.begin + chunk.size() / 2;
  split_long({chunk.begin, mid}, max_tokens, out);
  split_long({mid, chunk.end}, max_tokens, out);
}

}  // namespace

const std::vector<std::string> &default_function_words() {
  static const std::vector<std::string> kWords = {
      "a",  "an",   "the", "in",   "on",  "at", "is", "are",
      "was", "were", "with", "and", "or", "to", "of"};
  return kWords;
}

std::vector<Span> extract_spans(std::string_view premise,
                                const ChunkerConfig &config) {
  if (normalize_whitespace(premise).empty()) {
    throw InputError("cannot extract spans from an empty premise");
  }
  if (config.min_chunk_tokens == 0 || config.max_chunk_tokens == 0 ||
      config.min_chunk_tokens > config.max_chunk_tokens) {
    throw InputError("chunker needs 1 <= min_chunk_tokens <= max_chunk_tokens");
  }

  const std::vector<TokenOffset> tokens = word_offsets(premise);
  if (tokens.empty()) {
    // Punctuation-only premise: one span over the trimmed text.
    std::string_view trimmed = trim(premise);
    size_t start = static_cast<size_t>(trimmed.data() - premise.data());
    return {make_span(premise, start, start + trimmed.size())};
  }

  std::unordered_set<std::string> function_words;
  for (const std::string &w : config.function_words) {
    function_words.insert(to_lower_ascii(w));
  }

  std::vector<Chunk> chunks;
  for (size_t i = 0; i < tokens.size(); ++i) {
    std::string word = to_lower_ascii(
        premise.substr(tokens[i].start, tokens[i].end - tokens[i].start));
    if (chunks.empty() || function_words.count(word) > 0) {
      chunks.push_back({i, i + 1});
    } else {
      chunks.back().end = i + 1;
    }
  }

  std::vector<Chunk> merged;
  for (const Chunk &c : chunks) {
    if (!merged.empty() && c.size() < config.min_chunk_tokens) {
      merged.back().end = c.end;
    } else {
      merged.push_back(c);
    }
  }
  if (merged.size() >= 2 && merged.front().size() < config.min_chunk_tokens) {
    merged[1].begin = merged[0].begin;
    merged.erase(merged.begin());
  }

  std::vector<Chunk> bounded;
  for (const Chunk &c : merged) split_long(c, config.max_chunk_tokens, &bounded);

  std::vector<Span> spans;
  spans.reserve(bounded.size());
  for (const Chunk &c : bounded) {
    spans.push_back(
        make_span(premise, tokens[c.begin].start, tokens[c.end - 1].end));
  }
  return spans;
}

std::vector<Span> extract_spans(const NliExample &example,
                                const ChunkerConfig &config) {
  if (config.use_precomputed && !example.spans.empty()) {
    if (normalize_whitespace(example.premise).empty()) {
      throw InputError("cannot extract spans from an empty premise");
    }
    check_span_set(example.premise, example.spans);
    return example.spans;
  }
  return extract_spans(example.premise, config);
}

}  // namespace cfdistill
