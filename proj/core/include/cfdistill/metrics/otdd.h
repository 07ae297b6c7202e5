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


#ifndef CFDISTILL_METRICS_OTDD_H_
#define CFDISTILL_METRICS_OTDD_H_

#include <filesystem>
#include <span>
#include <vector>

#include "cfdistill/metrics/embedding.h"
#include "cfdistill/metrics/ot.h"
#include "cfdistill/types.h"

namespace cfdistill {

struct LabeledPoint {
  std::vector<double> x;
  Label y = Label::kEntailment;
};

struct EmbeddedDataset {
  size_t dimension = 0;
  std::vector<LabeledPoint> points;

  // Throws InputError unless every point has `dimension` coordinates.
  void validate() const;

  // Each example becomes embed(premise) + embed(hypothesis), L2-normalized.
  static EmbeddedDataset from_examples(std::span<const NliExample> examples,
                                       const Embedder &embedder);
};

// Line records {"vector": [...], "label": "entailment"}.
EmbeddedDataset read_embedded_dataset(const std::filesystem::path &path);

struct OtddConfig {
  // Problems with at most this many cells are solved exactly.
  size_t exact_max_cells = kExactOtMaxCells;
  // Larger problems use Sinkhorn with eps = eps_scale * max(cost).
  double eps_scale = 1e-3;
  int max_iters = 100000;
  double tol = 1e-6;
};

// Squared Euclidean distance.
double squared_distance(std::span<const double> x, std::span<const double> y);

// Optimal transport dataset distance: the square root of the OT value
// between A and B (uniform weights) under the cost
//   ||x - x'||^2 + W(y, y'),
// where W(y, y') is the OT value between the class-conditional point clouds
// of label y in A and y' in B under squared Euclidean cost. Throws
// InputError on a dimension mismatch or an empty dataset.
double otdd(const EmbeddedDataset &a, const EmbeddedDataset &b,
            const OtddConfig &config = {});

}  // namespace cfdistill

#endif  // CFDISTILL_METRICS_OTDD_H_
