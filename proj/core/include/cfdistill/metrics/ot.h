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


#ifndef CFDISTILL_METRICS_OT_H_
#define CFDISTILL_METRICS_OT_H_

#include <cstddef>
#include <span>
#include <vector>

namespace cfdistill {

// Dense row-major matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(size_t rows, size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }

  double &operator()(size_t i, size_t j) { return data_[i * cols_ + j]; }
  double operator()(size_t i, size_t j) const { return data_[i * cols_ + j]; }

  double max() const;

 private:
  size_t rows_ = 0;
  size_t cols_ = 0;
  std::vector<double> data_;
};

inline constexpr size_t kExactOtMaxCells = 64;
inline constexpr double kMarginalTolerance = 1e-9;

struct OtPlan {
  double cost = 0.0;
  Matrix plan;
};

// Minimal transport cost sum_ij P_ij C_ij over plans with row sums a and
// column sums b, solved exactly as a min-cost flow (successive shortest
// paths). Throws InputError when n*m > kExactOtMaxCells, when shapes
// disagree, when weights are negative or do not sum to 1 within
// kMarginalTolerance, or when a cost entry is negative or not finite.
double exact_ot(const Matrix &cost, std::span<const double> a,
                std::span<const double> b);
OtPlan exact_ot_plan(const Matrix &cost, std::span<const double> a,
                     std::span<const double> b);

struct SinkhornOptions {
  // Regularization strength, absolute units of the cost.
  double eps = 1e-2;
  int max_iters = 100000;
  // Stop when the L1 row-marginal violation drops below this.
  double tol = 1e-6;
  // Anneal eps down from max(cost) by halving, warm starting each stage.
  bool eps_scaling = true;
};

struct SinkhornResult {
  // <P, C> for the entropic plan P.
  double cost = 0.0;
  bool converged = false;
  int iterations = 0;
  double marginal_error = 0.0;
};

// Entropic OT by log-domain Sinkhorn iterations. Same preconditions as
// exact_ot without the size bound; throws InputError on non-finite costs
// or eps <= 0.
SinkhornResult sinkhorn_ot(const Matrix &cost, std::span<const double> a,
                           std::span<const double> b,
                           const SinkhornOptions &options = {});

}  // namespace cfdistill

#endif  // CFDISTILL_METRICS_OT_H_
