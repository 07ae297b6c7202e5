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


#ifndef CFDISTILL_METRICS_COUNTERFACTUAL_H_
#define CFDISTILL_METRICS_COUNTERFACTUAL_H_

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cfdistill/types.h"

namespace cfdistill {

// An original example and its counterfactual, with gold labels and model
// predictions on both.
struct CounterfactualPair {
  std::string id;
  Label gold_orig = Label::kEntailment;
  Label gold_cf = Label::kContradiction;
  LabelDistribution pred_orig;
  LabelDistribution pred_cf;

  // Direction gold_orig -> gold_cf, or nullopt when the golds agree.
  std::optional<Direction> direction() const;
};

// Index of the largest entry; ties go to the lowest index.
size_t argmax_index(std::span<const double> p);

// Counterfactual sensitivity over k-class distributions:
//   ((p_cf[l'] - p_orig[l']) + (p_orig[l] - p_cf[l])) / 2
// with l = argmax(p_orig) and l' = argmax(p_cf). Throws InputError when the
// sizes differ or are zero.
double sensitivity(std::span<const double> p_orig, std::span<const double> p_cf);
double sensitivity(const LabelDistribution &p_orig,
                   const LabelDistribution &p_cf);
double sensitivity(const CounterfactualPair &pair);

// Two-class closed form: p_cf[l'] + p_orig[l] - 1.
double binary_sensitivity(double p_cf_at_cf_pred, double p_orig_at_orig_pred);

// Fraction of pairs with argmax(pred_orig) == gold_orig and
// argmax(pred_cf) == gold_cf. Throws InputError on empty input.
double counterfactual_accuracy(std::span<const CounterfactualPair> pairs);

// Fraction of pairs with argmax(pred_orig) == gold_orig.
double original_accuracy(std::span<const CounterfactualPair> pairs);

// Mean sensitivity. Throws InputError on empty input.
double mean_sensitivity(std::span<const CounterfactualPair> pairs);

// A pairs-file record. Predictions are optional in the file and can be
// filled in by a scorer.
struct PairRecord {
  std::string id;
  std::string premise;
  std::string cf_premise;
  std::string hypothesis;
  Label gold_orig = Label::kEntailment;
  Label gold_cf = Label::kContradiction;
  std::optional<LabelDistribution> pred_orig;
  std::optional<LabelDistribution> pred_cf;
};

// Line records {"id", "premise", "cf_premise", "hypothesis", "label",
// "cf_label", ["pred_orig", "pred_cf"]}; predictions are distribution
// objects.
std::vector<PairRecord> read_pair_records(const std::filesystem::path &path);

}  // namespace cfdistill

#endif  // CFDISTILL_METRICS_COUNTERFACTUAL_H_
