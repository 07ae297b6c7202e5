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

// Decomposes a premise into candidate perturbation spans.
//
// The default chunker is rule based. Words are whitespace-delimited with
// edge punctuation trimmed ("Dogs." -> "Dogs"). Then:
//
//   1. a new chunk starts before every function word (case-insensitive);
//   2. chunks shorter than `min_chunk_tokens` are merged into the previous
//      chunk (a short leading chunk is merged into the next one);
//   3. chunks longer than `max_chunk_tokens` are split at the midpoint word
//      boundary, recursively.
//
// Each chunk becomes a span from its first word's start to its last word's
// end. Offsets are byte offsets into the premise.
//
// Records that carry precomputed spans bypass the rules; the spans are
// validated and returned as given.

#ifndef CFDISTILL_SPANNER_H_
#define CFDISTILL_SPANNER_H_

#include <string>
#include <string_view>
#include <vector>

#include "cfdistill/types.h"

namespace cfdistill {

const std::vector<std::string> &default_function_words();

struct ChunkerConfig {
  std::vector<std::string> function_words = default_function_words();
  size_t min_chunk_tokens = 2;
  size_t max_chunk_tokens = 8;
  // Use spans supplied with the input record when present.
  bool use_precomputed = true;
};

// Rule-based chunking. Throws InputError if the premise is empty after
// whitespace normalization or the config is inconsistent.
std::vector<Span> extract_spans(std::string_view premise,
                                const ChunkerConfig &config = {});

// Pass-through of example.spans when present and enabled, rules otherwise.
std::vector<Span> extract_spans(const NliExample &example,
                                const ChunkerConfig &config = {});

}  // namespace cfdistill

#endif  // CFDISTILL_SPANNER_H_
