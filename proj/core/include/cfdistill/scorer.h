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


#ifndef CFDISTILL_SCORER_H_
#define CFDISTILL_SCORER_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "cfdistill/http_client.h"
#include "cfdistill/types.h"

namespace cfdistill {

struct TextPair {
  std::string premise;
  std::string hypothesis;
};

// An NLI classifier returning p(label | premise, hypothesis). Implementations
// must be safe to call from several threads at once.
class Scorer {
 public:
  virtual ~Scorer() = default;

  // One distribution per pair, in request order. Throws TransportError when
  // the scorer cannot be reached after retries.
  virtual std::vector<LabelDistribution> score(
      std::span<const TextPair> pairs) = 0;

  // Liveness probe.
  virtual bool healthy() { return true; }
};

// Deterministic offline scorer. A pair's distribution is looked up in an
// override table first; otherwise FNV-1a of the whitespace-normalized pair
// selects one entry of a fixed table of peaked distributions.
class MockScorer : public Scorer {
 public:
  MockScorer() = default;

  // Override file: one record per line,
  // {"premise", "hypothesis", "distribution": {"entailment", ...}}.
  static MockScorer from_file(const std::filesystem::path &path);

  static const std::vector<LabelDistribution> &table();

  void set(const TextPair &pair, const LabelDistribution &dist);

  LabelDistribution score_one(const TextPair &pair) const;

  std::vector<LabelDistribution> score(
      std::span<const TextPair> pairs) override;

 private:
  static uint64_t key(const TextPair &pair);

  std::unordered_map<uint64_t, LabelDistribution> overrides_;
};

struct HttpScorerOptions {
  HttpClientOptions client;
  // Pairs per POST /score request.
  size_t max_batch = 32;
};

// Client for the scorer wire protocol:
//   POST /score {"pairs": [{"premise", "hypothesis"}, ...]}
//     -> {"distributions": [{"entailment", "neutral", "contradiction"}, ...]}
//   GET /health -> 200
class HttpScorer : public Scorer {
 public:
  explicit HttpScorer(HttpScorerOptions options);

  std::vector<LabelDistribution> score(
      std::span<const TextPair> pairs) override;

  bool healthy() override;

 private:
  HttpScorerOptions options_;
  HttpJsonClient client_;
};

}  // namespace cfdistill

#endif  // CFDISTILL_SCORER_H_
