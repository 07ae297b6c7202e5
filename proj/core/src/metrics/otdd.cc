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


#include "cfdistill/metrics/otdd.h"

#include <cmath>
#include <map>
#include <string>

#include "cfdistill/errors.h"
#include "jsonl.h"

namespace cfdistill {
namespace {

std::vector<double> uniform(size_t n) {
  return std::vector<double>(n, 1.0 / static_cast<double>(n));
}

double solve(const Matrix &cost, const OtddConfig &config) {
  const auto a = uniform(cost.rows());
  const auto b = uniform(cost.cols());
  if (cost.rows() * cost.cols() <= config.exact_max_cells) {
    return exact_ot(cost, a, b);
  }
  const double max_cost = cost.max();
  if (max_cost == 0.0) return 0.0;
  SinkhornOptions opts;
  opts.eps = config.eps_scale * max_cost;
  opts.max_iters = config.max_iters;
  opts.tol = config.tol;
  return sinkhorn_ot(cost, a, b, opts).cost;
}

std::map<Label, std::vector<size_t>> by_label(const EmbeddedDataset &d) {
  std::map<Label, std::vector<size_t>> out;
  for (size_t i = 0; i < d.points.size(); ++i) {
    out[d.points[i].y].push_back(i);
  }
  return out;
}

}  // namespace

void EmbeddedDataset::validate() const {
  if (dimension == 0) throw InputError("embedding dimension must be positive");
  for (const LabeledPoint &p : points) {
    if (p.x.size() != dimension) {
      throw InputError("point has dimension " + std::to_string(p.x.size()) +
                       ", expected " + std::to_string(dimension));
    }
    for (double v : p.x) {
      if (!std::isfinite(v)) throw InputError("non-finite coordinate");
    }
  }
}

EmbeddedDataset EmbeddedDataset::from_examples(
    std::span<const NliExample> examples, const Embedder &embedder) {
  EmbeddedDataset out;
  out.dimension = embedder.dimension();
  out.points.reserve(examples.size());
  for (const NliExample &ex : examples) {
    std::vector<double> x = embedder.embed(ex.premise);
    const std::vector<double> h = embedder.embed(ex.hypothesis);
    for (size_t k = 0; k < x.size(); ++k) x[k] += h[k];
    l2_normalize(x);
    out.points.push_back({std::move(x), ex.label});
  }
  return out;
}

EmbeddedDataset read_embedded_dataset(const std::filesystem::path &path) {
  EmbeddedDataset out;
  const std::string name = path.string();
  internal::for_each_record(
      path, [&](const internal::Json &r, size_t line, size_t) {
        const internal::Json &v =
            internal::require_field(r, "vector", name, line);
        if (!v.is_array() || v.empty()) {
          throw DatasetError(name, line, "\"vector\" must be a non-empty array");
        }
        LabeledPoint p;
        for (const auto &x : v) {
          if (!x.is_number()) {
            throw DatasetError(name, line, "\"vector\" must hold numbers");
          }
          p.x.push_back(x.get<double>());
        }
        p.y = internal::require_label(r, "label", name, line);
        if (out.points.empty()) out.dimension = p.x.size();
        if (p.x.size() != out.dimension) {
          throw DatasetError(name, line, "vector dimension differs from line 1");
        }
        out.points.push_back(std::move(p));
      });
  return out;
}

double squared_distance(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (size_t k = 0; k < x.size(); ++k) {
    const double d = x[k] - y[k];
    s += d * d;
  }
  return s;
}

double otdd(const EmbeddedDataset &a, const EmbeddedDataset &b,
            const OtddConfig &config) {
  if (a.points.empty() || b.points.empty()) {
    throw InputError("otdd needs non-empty datasets");
  }
  a.validate();
  b.validate();
  if (a.dimension != b.dimension) {
    throw InputError("otdd dimension mismatch: " + std::to_string(a.dimension) +
                     " vs " + std::to_string(b.dimension));
  }

  const auto groups_a = by_label(a);
  const auto groups_b = by_label(b);
  std::map<std::pair<Label, Label>, double> label_distance;
  for (const auto &[ya, ia] : groups_a) {
    for (const auto &[yb, ib] : groups_b) {
      Matrix c(ia.size(), ib.size());
      for (size_t i = 0; i < ia.size(); ++i) {
        for (size_t j = 0; j < ib.size(); ++j) {
          c(i, j) = squared_distance(a.points[ia[i]].x, b.points[ib[j]].x);
        }
      }
      label_distance[{ya, yb}] = solve(c, config);
    }
  }

  Matrix c(a.points.size(), b.points.size());
  for (size_t i = 0; i < a.points.size(); ++i) {
    for (size_t j = 0; j < b.points.size(); ++j) {
      const auto &p = a.points[i];
      const auto &q = b.points[j];
      c(i, j) = squared_distance(p.x, q.x) + label_distance.at({p.y, q.y});
    }
  }
  return std::sqrt(std::max(0.0, solve(c, config)));
}

}  // namespace cfdistill
