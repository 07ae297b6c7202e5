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


#include "cfdistill/metrics/self_bleu.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <unordered_map>

#include "cfdistill/errors.h"

namespace cfdistill {
namespace {

using Counts = std::unordered_map<std::string, int>;

Counts ngram_counts(const std::vector<std::string> &tokens, int n) {
  Counts counts;
  const size_t k = static_cast<size_t>(n);
  for (size_t i = 0; i + k <= tokens.size(); ++i) {
    std::string key = tokens[i];
    for (size_t j = 1; j < k; ++j) {
      key += '\x1f';
      key += tokens[i + j];
    }
    ++counts[key];
  }
  return counts;
}

size_t closest_length(const std::vector<size_t> &ref_lengths, size_t hyp) {
  size_t best = ref_lengths.front();
  for (size_t r : ref_lengths) {
    const auto d = [&](size_t x) { return x > hyp ? x - hyp : hyp - x; };
    if (d(r) < d(best) || (d(r) == d(best) && r < best)) best = r;
  }
  return best;
}

// matches[n-1] / totals[n-1] per order; hyp_len and ref_len for the
// brevity penalty.
double combine(const std::vector<int64_t> &matches,
               const std::vector<int64_t> &totals, size_t hyp_len,
               size_t ref_len, double epsilon) {
  if (hyp_len == 0) return 0.0;
  double log_sum = 0.0;
  int orders = 0;
  for (size_t n = 0; n < matches.size(); ++n) {
    if (totals[n] == 0) continue;
    const double num =
        matches[n] == 0 ? epsilon : static_cast<double>(matches[n]);
    log_sum += std::log(num / static_cast<double>(totals[n]));
    ++orders;
  }
  const double bp =
      hyp_len > ref_len
          ? 1.0
          : std::exp(1.0 - static_cast<double>(ref_len) /
                               static_cast<double>(hyp_len));
  return bp * std::exp(log_sum / orders);
}

void check_max_n(int max_n) {
  if (max_n < 1 || max_n > 4) throw InputError("max_n must be in [1, 4]");
}

}  // namespace

std::vector<std::string> bleu_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) out.push_back(std::move(current));
    current.clear();
  };
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isspace(c)) {
      flush();
    } else if (c < 0x80 && std::ispunct(c)) {
      flush();
      out.emplace_back(1, ch);
    } else {
      current += static_cast<char>(std::tolower(c));
    }
  }
  flush();
  return out;
}

double sentence_bleu(const std::vector<std::vector<std::string>> &references,
                     const std::vector<std::string> &hypothesis, int max_n,
                     double epsilon) {
  check_max_n(max_n);
  if (references.empty()) throw InputError("sentence_bleu needs references");
  std::vector<int64_t> matches(max_n), totals(max_n);
  for (int n = 1; n <= max_n; ++n) {
    const Counts hyp = ngram_counts(hypothesis, n);
    std::vector<Counts> refs;
    for (const auto &r : references) refs.push_back(ngram_counts(r, n));
    for (const auto &[gram, count] : hyp) {
      int max_ref = 0;
      for (const Counts &r : refs) {
        if (auto it = r.find(gram); it != r.end()) {
          max_ref = std::max(max_ref, it->second);
        }
      }
      matches[n - 1] += std::min(count, max_ref);
      totals[n - 1] += count;
    }
  }
  std::vector<size_t> ref_lengths;
  for (const auto &r : references) ref_lengths.push_back(r.size());
  return combine(matches, totals, hypothesis.size(),
                 closest_length(ref_lengths, hypothesis.size()), epsilon);
}

double self_bleu(std::span<const std::string> corpus, int max_n,
                 double epsilon) {
  check_max_n(max_n);
  if (corpus.size() < 2) throw InputError("self_bleu needs >= 2 sentences");
  const size_t size = corpus.size();

  std::vector<std::vector<std::string>> tokens;
  tokens.reserve(size);
  for (const std::string &s : corpus) tokens.push_back(bleu_tokens(s));

  // For every n-gram the two largest per-sentence counts, so the clipping
  // maximum over "all other sentences" is O(1) per lookup.
  struct Top2 {
    int c1 = 0;
    size_t i1 = SIZE_MAX;
    int c2 = 0;
  };
  std::vector<std::vector<Counts>> counts(max_n, std::vector<Counts>(size));
  std::vector<std::unordered_map<std::string, Top2>> tops(max_n);
  for (int n = 1; n <= max_n; ++n) {
    for (size_t i = 0; i < size; ++i) {
      counts[n - 1][i] = ngram_counts(tokens[i], n);
      for (const auto &[gram, c] : counts[n - 1][i]) {
        Top2 &t = tops[n - 1][gram];
        if (c > t.c1) {
          t.c2 = t.c1;
          t.c1 = c;
          t.i1 = i;
        } else if (c > t.c2) {
          t.c2 = c;
        }
      }
    }
  }

  double sum = 0.0;
  std::vector<size_t> others;
  others.reserve(size - 1);
  for (size_t i = 0; i < size; ++i) {
    std::vector<int64_t> matches(max_n), totals(max_n);
    for (int n = 1; n <= max_n; ++n) {
      for (const auto &[gram, c] : counts[n - 1][i]) {
        const Top2 &t = tops[n - 1].at(gram);
        const int max_ref = t.i1 == i ? t.c2 : t.c1;
        matches[n - 1] += std::min(c, max_ref);
        totals[n - 1] += c;
      }
    }
    others.clear();
    for (size_t j = 0; j < size; ++j) {
      if (j != i) others.push_back(tokens[j].size());
    }
    sum += combine(matches, totals, tokens[i].size(),
                   closest_length(others, tokens[i].size()), epsilon);
  }
  return sum / static_cast<double>(size);
}

}  // namespace cfdistill
