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


#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "cfdistill/metrics/ot.h"
#include "cfdistill/metrics/otdd.h"
#include "cfdistill/metrics/self_bleu.h"

namespace cfdistill {
namespace {

// Run with: ./build/benchmarks/metrics_benchmark

std::vector<double> simplex(std::mt19937_64 &rng, size_t n) {
  std::exponential_distribution<double> exp(1.0);
  std::vector<double> w(n);
  double total = 0.0;
  for (double &x : w) total += (x = exp(rng));
  for (double &x : w) x /= total;
  return w;
}

Matrix cost_matrix(std::mt19937_64 &rng, size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix c(n, n);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) c(i, j) = u(rng);
  }
  return c;
}

void BM_ExactOt(benchmark::State &state) {
  const size_t n = state.range(0);
  std::mt19937_64 rng(1);
  const Matrix c = cost_matrix(rng, n);
  const auto a = simplex(rng, n);
  const auto b = simplex(rng, n);
  for (auto _ : state) benchmark::DoNotOptimize(exact_ot(c, a, b));
}
BENCHMARK(BM_ExactOt)->Arg(2)->Arg(4)->Arg(8);

void BM_Sinkhorn(benchmark::State &state) {
  const size_t n = state.range(0);
  std::mt19937_64 rng(2);
  const Matrix c = cost_matrix(rng, n);
  const auto a = simplex(rng, n);
  const auto b = simplex(rng, n);
  SinkhornOptions opt;
  opt.eps = 1e-3 * c.max();
  for (auto _ : state) benchmark::DoNotOptimize(sinkhorn_ot(c, a, b, opt));
}
BENCHMARK(BM_Sinkhorn)->Arg(4)->Arg(16)->Arg(64);

EmbeddedDataset dataset(std::mt19937_64 &rng, size_t points, size_t dim) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  EmbeddedDataset d;
  d.dimension = dim;
  for (size_t i = 0; i < points; ++i) {
    LabeledPoint p;
    for (size_t k = 0; k < dim; ++k) p.x.push_back(u(rng));
    p.y = static_cast<Label>(i % 3);
    d.points.push_back(std::move(p));
  }
  return d;
}

void BM_Otdd(benchmark::State &state) {
  std::mt19937_64 rng(3);
  const auto a = dataset(rng, state.range(0), 32);
  const auto b = dataset(rng, state.range(0), 32);
  for (auto _ : state) benchmark::DoNotOptimize(otdd(a, b));
}
BENCHMARK(BM_Otdd)->Arg(12)->Arg(48)->Unit(benchmark::kMillisecond);

void BM_SelfBleu(benchmark::State &state) {
  static const std::vector<std::string> kWords = {
      "a", "man", "woman", "dog", "is", "riding", "red", "bike", "on",
      "the", "beach", "street", "in", "blue", "shirt", "walking"};
  std::mt19937_64 rng(4);
  std::vector<std::string> corpus;
  for (int64_t i = 0; i < state.range(0); ++i) {
    std::string s;
    for (int w = 0; w < 12; ++w) {
      if (w) s += ' ';
      s += kWords[rng() % kWords.size()];
    }
    corpus.push_back(std::move(s));
  }
  for (auto _ : state) benchmark::DoNotOptimize(self_bleu(corpus));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SelfBleu)->Arg(10)->Arg(100);

}  // namespace
}  // namespace cfdistill

BENCHMARK_MAIN();
