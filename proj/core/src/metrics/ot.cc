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


#include "cfdistill/metrics/ot.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "cfdistill/errors.h"

namespace cfdistill {

double Matrix::max() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, v);
  return m;
}

namespace {

void check_weights(std::span<const double> w, const char *name) {
  double sum = 0.0;
  for (double x : w) {
    if (!std::isfinite(x) || x < 0.0) {
      throw InputError(std::string("weights ") + name +
                       " must be finite and nonnegative");
    }
    sum += x;
  }
  if (std::abs(sum - 1.0) > kMarginalTolerance) {
    throw InputError(std::string("weights ") + name + " must sum to 1");
  }
}

void check_problem(const Matrix &cost, std::span<const double> a,
                   std::span<const double> b) {
  if (cost.rows() != a.size() || cost.cols() != b.size()) {
    throw InputError("cost matrix shape does not match the weight vectors");
  }
  if (a.empty() || b.empty()) throw InputError("empty transport problem");
  check_weights(a, "a");
  check_weights(b, "b");
  for (size_t i = 0; i < cost.rows(); ++i) {
    for (size_t j = 0; j < cost.cols(); ++j) {
      const double c = cost(i, j);
      if (!std::isfinite(c)) throw InputError("cost entries must be finite");
      if (c < 0.0) throw InputError("cost entries must be nonnegative");
    }
  }
}

// Residual network for successive-shortest-path min-cost flow.
class FlowNetwork {
 public:
  explicit FlowNetwork(size_t nodes) : adj_(nodes) {}

  static constexpr double kImprovement = 1e-13;

  size_t add_edge(size_t from, size_t to, double cap, double cost) {
    adj_[from].push_back({to, cap, cost, adj_[to].size()});
    adj_[to].push_back({from, 0.0, -cost, adj_[from].size() - 1});
    return adj_[from].size() - 1;
  }

  // Pushes flow from s to t along cheapest residual paths until no path
  // with capacity above `min_cap` remains.
  void run(size_t s, size_t t, double min_cap) {
    const size_t v = adj_.size();
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(v);
    std::vector<std::pair<size_t, size_t>> parent(v);
    // Each augmentation saturates at least one edge; the bound only guards
    // against floating-point livelock.
    const size_t max_rounds = 64 * (v * v + 16);
    for (size_t round = 0; round < max_rounds; ++round) {
      std::fill(dist.begin(), dist.end(), inf);
      dist[s] = 0.0;
      for (size_t pass = 0; pass + 1 < v; ++pass) {
        bool changed = false;
        for (size_t u = 0; u < v; ++u) {
          if (dist[u] == inf) continue;
          for (size_t k = 0; k < adj_[u].size(); ++k) {
            const Edge &e = adj_[u][k];
            if (e.cap <= min_cap) continue;
            const double nd = dist[u] + e.cost;
            // Rounding can leave cycles of cost ~ -1e-16 in the residual
            // graph; demanding a real improvement keeps the parent tree
            // acyclic.
            if (nd < dist[e.to] - kImprovement) {
              dist[e.to] = nd;
              parent[e.to] = {u, k};
              changed = true;
            }
          }
        }
        if (!changed) break;
      }
      if (dist[t] == inf) return;
      double push = inf;
      size_t steps = 0;
      for (size_t x = t; x != s; x = parent[x].first) {
        if (++steps > v) throw Error("min-cost flow parent cycle");
        push = std::min(push, adj_[parent[x].first][parent[x].second].cap);
      }
      for (size_t x = t; x != s; x = parent[x].first) {
        Edge &e = adj_[parent[x].first][parent[x].second];
        e.cap -= push;
        adj_[x][e.rev].cap += push;
      }
    }
    throw Error("min-cost flow did not terminate");
  }

  // Flow on the forward edge `index` out of `from`.
  double flow(size_t from, size_t index) const {
    const Edge &e = adj_[from][index];
    return adj_[e.to][e.rev].cap;
  }

 private:
  struct Edge {
    size_t to;
    double cap;
    double cost;
    size_t rev;
  };

  std::vector<std::vector<Edge>> adj_;
};

double log_sum_exp(const std::vector<double> &x) {
  double m = -std::numeric_limits<double>::infinity();
  for (double v : x) m = std::max(m, v);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double v : x) s += std::exp(v - m);
  return m + std::log(s);
}

}  // namespace

OtPlan exact_ot_plan(const Matrix &cost, std::span<const double> a,
                     std::span<const double> b) {
  check_problem(cost, a, b);
  const size_t n = a.size();
  const size_t m = b.size();
  if (n * m > kExactOtMaxCells) {
    throw InputError("exact_ot supports at most " +
                     std::to_string(kExactOtMaxCells) + " cells, got " +
                     std::to_string(n * m));
  }
  const size_t source = 0;
  const size_t sink = n + m + 1;
  FlowNetwork net(n + m + 2);
  // Unbounded transport edges; any capacity >= 1 is equivalent.
  std::vector<size_t> edge(n * m);
  for (size_t i = 0; i < n; ++i) net.add_edge(source, 1 + i, a[i], 0.0);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < m; ++j) {
      edge[i * m + j] = net.add_edge(1 + i, 1 + n + j, 2.0, cost(i, j));
    }
  }
  for (size_t j = 0; j < m; ++j) net.add_edge(1 + n + j, sink, b[j], 0.0);
  net.run(source, sink, 1e-14);

  OtPlan out{0.0, Matrix(n, m)};
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < m; ++j) {
      const double f = net.flow(1 + i, edge[i * m + j]);
      out.plan(i, j) = f;
      out.cost += f * cost(i, j);
    }
  }
  return out;
}

double exact_ot(const Matrix &cost, std::span<const double> a,
                std::span<const double> b) {
  return exact_ot_plan(cost, a, b).cost;
}

SinkhornResult sinkhorn_ot(const Matrix &cost, std::span<const double> a,
                           std::span<const double> b,
                           const SinkhornOptions &options) {
  check_problem(cost, a, b);
  if (!(options.eps > 0.0) || !std::isfinite(options.eps)) {
    throw InputError("sinkhorn eps must be positive");
  }
  if (options.max_iters < 1) throw InputError("max_iters must be positive");

  // Zero-weight rows and columns carry no mass.
  std::vector<size_t> rows, cols;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] > 0.0) rows.push_back(i);
  }
  for (size_t j = 0; j < b.size(); ++j) {
    if (b[j] > 0.0) cols.push_back(j);
  }
  const size_t n = rows.size();
  const size_t m = cols.size();
  Matrix c(n, m);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < m; ++j) c(i, j) = cost(rows[i], cols[j]);
  }
  std::vector<double> log_a(n), log_b(m), f(n, 0.0), g(m, 0.0);
  for (size_t i = 0; i < n; ++i) log_a[i] = std::log(a[rows[i]]);
  for (size_t j = 0; j < m; ++j) log_b[j] = std::log(b[cols[j]]);

  SinkhornResult result;
  std::vector<double> buf_n(n), buf_m(m);

  auto row_error = [&](double eps) {
    double err = 0.0;
    for (size_t i = 0; i < n; ++i) {
      double r = 0.0;
      for (size_t j = 0; j < m; ++j) {
        r += std::exp((f[i] + g[j] - c(i, j)) / eps);
      }
      err += std::abs(r - a[rows[i]]);
    }
    return err;
  };
  // Runs at most `budget` iterations at `eps`; returns the final error.
  auto stage = [&](double eps, int budget, double tol) {
    double err = std::numeric_limits<double>::infinity();
    for (int it = 0; it < budget; ++it) {
      for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < m; ++j) buf_m[j] = (g[j] - c(i, j)) / eps;
        f[i] = eps * (log_a[i] - log_sum_exp(buf_m));
      }
      for (size_t j = 0; j < m; ++j) {
        for (size_t i = 0; i < n; ++i) buf_n[i] = (f[i] - c(i, j)) / eps;
        g[j] = eps * (log_b[j] - log_sum_exp(buf_n));
      }
      ++result.iterations;
      // The error costs as much as an iteration; sample it.
      if ((it + 1) % 10 != 0 && it + 1 != budget) continue;
      err = row_error(eps);
      if (err < tol) break;
    }
    return err;
  };

  const double target = options.eps;
  if (options.eps_scaling) {
    double eps = std::max(target, c.max());
    while (eps > target && result.iterations < options.max_iters) {
      const int budget = std::min(100, options.max_iters - result.iterations);
      stage(eps, budget, 1e-4);
      eps = std::max(target, eps / 2.0);
    }
  }
  const int remaining = std::max(1, options.max_iters - result.iterations);
  result.marginal_error = stage(target, remaining, options.tol);
  result.converged = result.marginal_error < options.tol;

  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < m; ++j) {
      result.cost += std::exp((f[i] + g[j] - c(i, j)) / target) * c(i, j);
    }
  }
  return result;
}

}  // namespace cfdistill
