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


#include "cfdistill/metrics/counterfactual.h"

#include <unordered_set>

#include "jsonl.h"

namespace cfdistill {

std::optional<Direction> CounterfactualPair::direction() const {
  if (gold_orig == gold_cf) return std::nullopt;
  return Direction::make(gold_orig, gold_cf);
}

size_t argmax_index(std::span<const double> p) {
  size_t best = 0;
  for (size_t i = 1; i < p.size(); ++i) {
    if (p[i] > p[best]) best = i;
  }
  return best;
}

double sensitivity(std::span<const double> p_orig,
                   std::span<const double> p_cf) {
  if (p_orig.empty() || p_orig.size() != p_cf.size()) {
    throw InputError("sensitivity needs two distributions of equal size");
  }
  const size_t l = argmax_index(p_orig);
  const size_t l_cf = argmax_index(p_cf);
  return ((p_cf[l_cf] - p_orig[l_cf]) + (p_orig[l] - p_cf[l])) / 2.0;
}

double sensitivity(const LabelDistribution &p_orig,
                   const LabelDistribution &p_cf) {
  return sensitivity(std::span<const double>(p_orig.probs()),
                     std::span<const double>(p_cf.probs()));
}

double sensitivity(const CounterfactualPair &pair) {
  return sensitivity(pair.pred_orig, pair.pred_cf);
}

double binary_sensitivity(double p_cf_at_cf_pred, double p_orig_at_orig_pred) {
  return p_cf_at_cf_pred + p_orig_at_orig_pred - 1.0;
}

double counterfactual_accuracy(std::span<const CounterfactualPair> pairs) {
  if (pairs.empty()) throw InputError("counterfactual_accuracy needs pairs");
  size_t hits = 0;
  for (const auto &p : pairs) {
    hits += p.pred_orig.argmax() == p.gold_orig &&
            p.pred_cf.argmax() == p.gold_cf;
  }
  return static_cast<double>(hits) / static_cast<double>(pairs.size());
}

double original_accuracy(std::span<const CounterfactualPair> pairs) {
  if (pairs.empty()) throw InputError("original_accuracy needs pairs");
  size_t hits = 0;
  for (const auto &p : pairs) hits += p.pred_orig.argmax() == p.gold_orig;
  return static_cast<double>(hits) / static_cast<double>(pairs.size());
}

double mean_sensitivity(std::span<const CounterfactualPair> pairs) {
  if (pairs.empty()) throw InputError("mean_sensitivity needs pairs");
  double sum = 0.0;
  for (const auto &p : pairs) sum += sensitivity(p);
  return sum / static_cast<double>(pairs.size());
}

std::vector<PairRecord> read_pair_records(const std::filesystem::path &path) {
  std::vector<PairRecord> out;
  std::unordered_set<std::string> ids;
  const std::string name = path.string();
  internal::for_each_record(
      path, [&](const internal::Json &r, size_t line, size_t index) {
        PairRecord p;
        if (r.contains("id")) {
          p.id = internal::require_string(r, "id", name, line);
        } else {
          p.id = path.stem().string() + "#" + std::to_string(index);
        }
        if (!ids.insert(p.id).second) {
          throw DatasetError(name, line, "duplicate id \"" + p.id + "\"");
        }
        p.premise = internal::require_string(r, "premise", name, line);
        p.cf_premise = internal::require_string(r, "cf_premise", name, line);
        p.hypothesis = internal::require_string(r, "hypothesis", name, line);
        p.gold_orig = internal::require_label(r, "label", name, line);
        p.gold_cf = internal::require_label(r, "cf_label", name, line);
        try {
          if (r.contains("pred_orig") && !r["pred_orig"].is_null()) {
            p.pred_orig = internal::parse_distribution(r["pred_orig"]);
          }
          if (r.contains("pred_cf") && !r["pred_cf"].is_null()) {
            p.pred_cf = internal::parse_distribution(r["pred_cf"]);
          }
        } catch (const InputError &e) {
          throw DatasetError(name, line, e.what());
        }
        if (p.pred_orig.has_value() != p.pred_cf.has_value()) {
          throw DatasetError(name, line,
                             "pred_orig and pred_cf must appear together");
        }
        out.push_back(std::move(p));
      });
  return out;
}

}  // namespace cfdistill
