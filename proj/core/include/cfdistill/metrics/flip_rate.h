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


#ifndef CFDISTILL_METRICS_FLIP_RATE_H_
#define CFDISTILL_METRICS_FLIP_RATE_H_

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "cfdistill/types.h"

namespace cfdistill {

// A human judgement of one counterfactual.
struct FlipAnnotation {
  Label original = Label::kEntailment;
  Label target = Label::kContradiction;
  Label annotated = Label::kEntailment;

  // Throws InputError when original == target.
  static FlipAnnotation make(Label original, Label target, Label annotated);

  Direction direction() const { return Direction::make(original, target); }
};

// Fraction of annotations whose annotated label is the target.
// Throws InputError on empty input.
double flip_rate(std::span<const FlipAnnotation> annotations);

// Fraction of annotations whose annotated label differs from the original.
// Throws InputError on empty input.
double soft_flip_rate(std::span<const FlipAnnotation> annotations);

// Line records {"original_label", "target_label", "annotated_label"}; an
// optional "id" is ignored.
std::vector<FlipAnnotation> read_annotations(
    const std::filesystem::path &path);

}  // namespace cfdistill

#endif  // CFDISTILL_METRICS_FLIP_RATE_H_
