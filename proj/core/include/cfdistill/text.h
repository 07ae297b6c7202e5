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

// Text helpers shared by the chunker, filters and metrics. All functions
// treat text as UTF-8 bytes and only interpret ASCII characters.

#ifndef CFDISTILL_TEXT_H_
#define CFDISTILL_TEXT_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace cfdistill {

// Collapses runs of ASCII whitespace to a single space and trims both ends.
std::string normalize_whitespace(std::string_view text);

std::string to_lower_ascii(std::string_view text);

// Trims leading and trailing ASCII whitespace.
std::string_view trim(std::string_view text);

// True if `text` has no alphanumeric character (empty, spaces, punctuation).
bool is_blank_or_punct(std::string_view text);

// Lowercased maximal runs of ASCII letters and digits.
std::vector<std::string> alnum_tokens(std::string_view text);

// Byte range [start, end) of a word inside some text.
struct TokenOffset {
  size_t start = 0;
  size_t end = 0;
};

// Whitespace-delimited words with leading/trailing ASCII punctuation trimmed
// off. Runs made only of punctuation are dropped. "Dogs." yields "Dogs".
std::vector<TokenOffset> word_offsets(std::string_view text);

// Lowercased words as produced by word_offsets().
std::vector<std::string> words(std::string_view text);

inline constexpr uint64_t kFnvOffsetBasis = 0xcbf29ce484222325ULL;

// 64-bit FNV-1a. Stable across platforms, used wherever a hash must be
// reproducible between runs and machines.
uint64_t fnv1a64(std::string_view data, uint64_t basis = kFnvOffsetBasis);

// Hashes a sequence of fields with an unambiguous separator.
uint64_t hash_fields(const std::vector<std::string_view> &fields);

std::string hex64(uint64_t value);

}  // namespace cfdistill

#endif  // CFDISTILL_TEXT_H_
