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


#include "cfdistill/augment.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "cfdistill/text.h"
#include "jsonl.h"

namespace cfdistill {

std::vector<CartographyStats> read_cartography_stats(
    const std::filesystem::path &path) {
  std::vector<CartographyStats> out;
  std::unordered_set<std::string> seen;
  const std::string name = path.string();
  internal::for_each_record(
      path, [&](const internal::Json &r, size_t line, size_t) {
        CartographyStats s;
        s.example_id = internal::require_string(r, "id", name, line);
        s.confidence = internal::require_number(r, "confidence", name, line);
        s.variability = internal::require_number(r, "variability", name, line);
        if (!(s.confidence >= 0.0 && s.confidence <= 1.0)) {
          throw DatasetError(name, line, "confidence must be in [0, 1]");
        }
        if (!(s.variability >= 0.0) || !std::isfinite(s.variability)) {
          throw DatasetError(name, line, "variability must be >= 0");
        }
        if (!seen.insert(s.example_id).second) {
          throw DatasetError(name, line,
                             "duplicate stats id \"" + s.example_id + "\"");
        }
        out.push_back(std::move(s));
      });
  return out;
}

size_t ambiguous_count(size_t n, double q) {
  const double exact = q * static_cast<double>(n);
  return std::min(n, static_cast<size_t>(std::ceil(exact - 1e-9)));
}

std::vector<NliExample> select_ambiguous(
    std::span<const NliExample> dataset,
    std::span<const CartographyStats> stats, double q) {
  if (!(q > 0.0 && q <= 1.0)) throw InputError("fraction q must be in (0, 1]");
  std::unordered_map<std::string, double> variability;
  for (const CartographyStats &s : stats) {
    variability.emplace(s.example_id, s.variability);
  }
  std::vector<double> v(dataset.size());
  for (size_t i = 0; i < dataset.size(); ++i) {
    auto it = variability.find(dataset[i].id);
    if (it == variability.end()) {
      throw InputError("no cartography stats for example \"" + dataset[i].id +
                       "\"");
    }
    v[i] = it->second;
  }

  std::vector<size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (v[a] != v[b]) return v[a] > v[b];
    return dataset[a].id < dataset[b].id;
  });
  order.resize(ambiguous_count(dataset.size(), q));
  std::sort(order.begin(), order.end());

  std::vector<NliExample> out;
  out.reserve(order.size());
  for (size_t i : order) out.push_back(dataset[i]);
  return out;
}

std::string dedupe_key(const NliExample &example) {
  std::string key = normalize_whitespace(example.premise);
  key += '\x1f';
  key += normalize_whitespace(example.hypothesis);
  key += '\x1f';
  key += label_name(example.label);
  return key;
}

AugmentResult build_augmented(std::span<const NliExample> base,
                              std::span<const NliExample> source_subset,
                              std::span<const NliExample> counterfactuals) {
  AugmentResult result;
  std::unordered_set<std::string> keys;
  std::unordered_set<std::string> ids;
  auto add_all = [&](std::span<const NliExample> part) {
    for (const NliExample &ex : part) {
      ++result.inputs;
      if (!keys.insert(dedupe_key(ex)).second) continue;
      NliExample kept = ex;
      if (ids.count(kept.id)) {
        for (size_t n = 1;; ++n) {
          std::string candidate = ex.id + "~" + std::to_string(n);
          if (!ids.count(candidate)) {
            kept.id = std::move(candidate);
            break;
          }
        }
        ++result.ids_renamed;
      }
      ids.insert(kept.id);
      result.output.push_back(std::move(kept));
    }
  };
  add_all(base);
  add_all(source_subset);
  add_all(counterfactuals);
  result.duplicates_removed = result.inputs - result.output.size();
  return result;
}

}  // namespace cfdistill
