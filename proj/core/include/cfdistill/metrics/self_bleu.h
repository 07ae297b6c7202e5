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


#ifndef CFDISTILL_METRICS_SELF_BLEU_H_
#define CFDISTILL_METRICS_SELF_BLEU_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cfdistill {

inline constexpr double kBleuEpsilon = 1e-9;

// Lowercases, splits on whitespace and makes every ASCII punctuation
// character its own token.
std::vector<std::string> bleu_tokens(std::string_view text);

// Sentence BLEU with clipped n-gram counts, uniform weights over orders
// 1..max_n and the closest-reference-length brevity penalty. A zero match
// count at order n contributes (0 + epsilon) / total. Orders for which the
// hypothesis has no n-grams at all are left out and the weights
// renormalized; an empty hypothesis scores 0.
double sentence_bleu(const std::vector<std::vector<std::string>> &references,
                     const std::vector<std::string> &hypothesis, int max_n = 4,
                     double epsilon = kBleuEpsilon);

// Mean over sentences of the BLEU of each sentence against all the others.
// Throws InputError when the corpus has fewer than 2 sentences or max_n is
// outside [1, 4].
double self_bleu(std::span<const std::string> corpus, int max_n = 4,
                 double epsilon = kBleuEpsilon);

}  // namespace cfdistill

#endif  // CFDISTILL_METRICS_SELF_BLEU_H_
