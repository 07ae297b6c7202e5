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


#include "cfdistill/scorer.h"

#include "cfdistill/text.h"
#include "jsonl.h"

namespace cfdistill {

using internal::Json;

const std::vector<LabelDistribution> &MockScorer::table() {
  static const std::vector<LabelDistribution> kTable = {
      LabelDistribution(0.90, 0.06, 0.04), LabelDistribution(0.05, 0.91, 0.04),
      LabelDistribution(0.03, 0.07, 0.90), LabelDistribution(0.70, 0.20, 0.10),
      LabelDistribution(0.15, 0.70, 0.15), LabelDistribution(0.10, 0.20, 0.70),
      LabelDistribution(0.45, 0.40, 0.15), LabelDistribution(0.20, 0.45, 0.35),
  };
  return kTable;
}

uint64_t MockScorer::key(const TextPair &pair) {
  return hash_fields({normalize_whitespace(pair.premise),
                      normalize_whitespace(pair.hypothesis)});
}

MockScorer MockScorer::from_file(const std::filesystem::path &path) {
  MockScorer scorer;
  const std::string name = path.string();
  internal::for_each_record(path, [&](const Json &r, size_t line, size_t) {
    TextPair pair{internal::require_string(r, "premise", name, line),
                  internal::require_string(r, "hypothesis", name, line)};
    try {
      scorer.set(pair, internal::parse_distribution(
                           internal::require_field(r, "distribution", name,
                                                   line)));
    } catch (const DatasetError &) {
      throw;
    } catch (const InputError &e) {
      throw DatasetError(name, line, e.what());
    }
  });
  return scorer;
}

void MockScorer::set(const TextPair &pair, const LabelDistribution &dist) {
  overrides_.insert_or_assign(key(pair), dist);
}

LabelDistribution MockScorer::score_one(const TextPair &pair) const {
  const uint64_t k = key(pair);
  if (auto it = overrides_.find(k); it != overrides_.end()) return it->second;
  return table()[(k >> 17) % table().size()];
}

std::vector<LabelDistribution> MockScorer::score(
    std::span<const TextPair> pairs) {
  std::vector<LabelDistribution> out;
  out.reserve(pairs.size());
  for (const TextPair &p : pairs) out.push_back(score_one(p));
  return out;
}

HttpScorer::HttpScorer(HttpScorerOptions options)
    : options_(std::move(options)), client_(options_.client) {
  if (options_.max_batch == 0) throw InputError("scorer max_batch must be > 0");
}

std::vector<LabelDistribution> HttpScorer::score(
    std::span<const TextPair> pairs) {
  std::vector<LabelDistribution> out;
  out.reserve(pairs.size());
  for (size_t begin = 0; begin < pairs.size(); begin += options_.max_batch) {
    const size_t end = std::min(pairs.size(), begin + options_.max_batch);
    Json body;
    body["pairs"] = Json::array();
    for (size_t i = begin; i < end; ++i) {
      body["pairs"].push_back(
          {{"premise", pairs[i].premise}, {"hypothesis", pairs[i].hypothesis}});
    }
    HttpResponse response = client_.post_json("/score", body.dump());
    try {
      const Json j = Json::parse(response.body);
      const Json &dists = j.at("distributions");
      if (!dists.is_array() || dists.size() != end - begin) {
        throw InputError("expected " + std::to_string(end - begin) +
                         " distributions");
      }
      for (const Json &d : dists) out.push_back(internal::parse_distribution(d));
    } catch (const std::exception &e) {
      throw TransportError(std::string("malformed scorer response: ") +
                               e.what(),
                           std::move(response.attempts));
    }
  }
  return out;
}

bool HttpScorer::healthy() { return client_.get_ok("/health"); }

}  // namespace cfdistill
