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


#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <unordered_set>

#include <spdlog/spdlog.h>

#include "cfdistill/dataset.h"
#include "cfdistill/metrics/counterfactual.h"
#include "cfdistill/metrics/flip_rate.h"
#include "cfdistill/metrics/otdd.h"
#include "cfdistill/metrics/self_bleu.h"
#include "commands.h"
#include "stage.h"

namespace cfdistill::cli {
namespace {

using nlohmann::ordered_json;

struct Cell {
  std::optional<double> value;
  size_t n = 0;
};

// One report row: a value per direction plus "avg" (mean of the direction
// values present) and "all" (pooled).
struct Row {
  std::string metric;
  std::map<std::string, Cell> cells;
};

std::vector<std::string> group_names() {
  std::vector<std::string> names;
  for (Direction d : Direction::all()) names.push_back(d.short_name());
  names.push_back("avg");
  names.push_back("all");
  return names;
}

// Fills direction cells with fn(items of that direction) and "all" with
// fn(everything); "avg" is derived from the direction cells.
template <typename T, typename Fn, typename Key>
Row make_row(const std::string &metric, const std::vector<T> &items, Key key,
             Fn fn, size_t min_items = 1) {
  Row row{metric, {}};
  std::map<std::string, std::vector<T>> groups;
  for (const T &item : items) {
    if (auto d = key(item)) groups[d->short_name()].push_back(item);
  }
  double sum = 0.0;
  size_t present = 0;
  for (Direction d : Direction::all()) {
    const auto &g = groups[d.short_name()];
    Cell cell{std::nullopt, g.size()};
    if (g.size() >= min_items) {
      cell.value = fn(g);
      sum += *cell.value;
      ++present;
    }
    row.cells[d.short_name()] = cell;
  }
  row.cells["avg"] = {present ? std::optional<double>(sum / present)
                              : std::nullopt,
                      present};
  Cell all{std::nullopt, items.size()};
  if (items.size() >= min_items) all.value = fn(items);
  row.cells["all"] = all;
  return row;
}

void print_table(const std::vector<Row> &rows, std::ostream &out) {
  const auto names = group_names();
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%-14s", "metric");
  out << buf;
  for (const auto &n : names) {
    std::snprintf(buf, sizeof(buf), "%10s", n.c_str());
    out << buf;
  }
  out << "\n";
  for (const Row &row : rows) {
    std::snprintf(buf, sizeof(buf), "%-14s", row.metric.c_str());
    out << buf;
    for (const auto &n : names) {
      const Cell &c = row.cells.at(n);
      if (c.value) {
        std::snprintf(buf, sizeof(buf), "%10.4f", *c.value);
      } else {
        std::snprintf(buf, sizeof(buf), "%10s", "-");
      }
      out << buf;
    }
    out << "\n";
  }
}

std::vector<std::string> report_lines(const std::vector<Row> &rows) {
  std::vector<std::string> lines;
  for (const Row &row : rows) {
    for (const auto &name : group_names()) {
      const Cell &c = row.cells.at(name);
      ordered_json j;
      j["metric"] = row.metric;
      j["group"] = name;
      j["n"] = c.n;
      j["value"] = c.value ? ordered_json(quantize6(*c.value)) : ordered_json();
      lines.push_back(j.dump());
    }
  }
  return lines;
}

// Predictions for every pair; pairs lacking them are scored.
std::vector<CounterfactualPair> complete_pairs(
    const std::vector<PairRecord> &records, const RunConfig &config) {
  std::vector<TextPair> to_score;
  for (const auto &r : records) {
    if (!r.pred_orig) {
      to_score.push_back({r.premise, r.hypothesis});
      to_score.push_back({r.cf_premise, r.hypothesis});
    }
  }
  std::vector<LabelDistribution> scored;
  if (!to_score.empty()) {
    auto scorer = make_scorer(config.scorer);
    scored = scorer->score(to_score);
  }
  std::vector<CounterfactualPair> pairs;
  size_t k = 0;
  for (const auto &r : records) {
    if (r.pred_orig) {
      pairs.push_back({r.id, r.gold_orig, r.gold_cf, *r.pred_orig, *r.pred_cf});
    } else {
      pairs.push_back(
          {r.id, r.gold_orig, r.gold_cf, scored[k], scored[k + 1]});
      k += 2;
    }
  }
  return pairs;
}

}  // namespace

void cmd_eval(const RunConfig &config, std::ostream &out) {
  const PathsConfig &paths = config.paths;
  std::set<std::string> metrics(config.eval.metrics.begin(),
                                config.eval.metrics.end());
  if (metrics.empty()) {
    if (!paths.annotations.empty()) metrics.insert("flip-rate");
    if (!paths.counterfactuals.empty()) metrics.insert("self-bleu");
    if (!paths.counterfactuals.empty() && !paths.original.empty()) {
      metrics.insert("otdd");
    }
    if (!paths.pairs.empty()) {
      metrics.insert("sensitivity");
      metrics.insert("cf-accuracy");
    }
    if (metrics.empty()) throw InputError("eval has no inputs to evaluate");
  }

  // Read everything up front so input errors surface before any output.
  std::vector<FlipAnnotation> annotations;
  std::vector<DistilledExample> counterfactuals;
  std::vector<NliExample> original;
  std::vector<PairRecord> pair_records;
  if (metrics.count("flip-rate")) {
    annotations =
        read_annotations(require_input(paths.annotations, "--annotations"));
  }
  if (metrics.count("self-bleu") || metrics.count("otdd")) {
    counterfactuals = read_distilled(
        require_input(paths.counterfactuals, "--counterfactuals"));
  }
  if (metrics.count("otdd")) {
    original = read_dataset(require_input(paths.original, "--original"));
  }
  if (metrics.count("sensitivity") || metrics.count("cf-accuracy")) {
    pair_records = read_pair_records(require_input(paths.pairs, "--pairs"));
  }
  Stage stage(config);
  std::vector<Row> rows;

  try {
    if (metrics.count("flip-rate")) {
      auto key = [](const FlipAnnotation &a) {
        return std::optional<Direction>(a.direction());
      };
      rows.push_back(make_row("lfr", annotations, key, [](const auto &g) {
        return flip_rate(g);
      }));
      rows.push_back(make_row("slfr", annotations, key, [](const auto &g) {
        return soft_flip_rate(g);
      }));
    }
    if (metrics.count("self-bleu")) {
      const int max_n = config.eval.max_n;
      rows.push_back(make_row(
          "self_bleu", counterfactuals,
          [](const DistilledExample &d) {
            return std::optional<Direction>(d.provenance.direction);
          },
          [max_n](const std::vector<DistilledExample> &g) {
            std::vector<std::string> corpus;
            for (const auto &d : g) corpus.push_back(d.new_premise);
            return self_bleu(corpus, max_n);
          },
          2));
    }
    if (metrics.count("otdd")) {
      const HashingEmbedder embedder(config.eval.embedding_dim);
      std::map<std::string, const NliExample *> by_id;
      for (const auto &ex : original) by_id[ex.id] = &ex;
      const OtddConfig otdd_config = config.eval.otdd;
      rows.push_back(make_row(
          "otdd", counterfactuals,
          [](const DistilledExample &d) {
            return std::optional<Direction>(d.provenance.direction);
          },
          [&](const std::vector<DistilledExample> &g) {
            // Against the originals the group was derived from; the pooled
            // row uses the whole original dataset.
            std::vector<NliExample> sources, cfs;
            std::unordered_set<std::string> seen;
            const bool pooled = g.size() == counterfactuals.size();
            for (const auto &d : g) {
              cfs.push_back(d.as_example());
              auto it = by_id.find(d.provenance.source_id);
              if (!pooled && it != by_id.end() &&
                  seen.insert(d.provenance.source_id).second) {
                sources.push_back(*it->second);
              }
            }
            if (pooled) sources = original;
            if (sources.empty()) {
              throw InputError("no original examples match the "
                               "counterfactuals' source ids");
            }
            return otdd(EmbeddedDataset::from_examples(sources, embedder),
                        EmbeddedDataset::from_examples(cfs, embedder),
                        otdd_config);
          }));
    }
    if (metrics.count("sensitivity") || metrics.count("cf-accuracy")) {
      const auto pairs = complete_pairs(pair_records, config);
      auto key = [](const CounterfactualPair &p) { return p.direction(); };
      if (metrics.count("sensitivity")) {
        rows.push_back(make_row("sensitivity", pairs, key, [](const auto &g) {
          return mean_sensitivity(g);
        }));
      }
      if (metrics.count("cf-accuracy")) {
        rows.push_back(make_row("cf_accuracy", pairs, key, [](const auto &g) {
          return counterfactual_accuracy(g);
        }));
        rows.push_back(make_row("orig_accuracy", pairs, key, [](const auto &g) {
          return original_accuracy(g);
        }));
      }
    }
  } catch (const FatalBackendError &) {
    stage.write_partial("report.jsonl", report_lines(rows));
    throw;
  }

  write_lines(report_lines(rows), stage.path("report.jsonl"));
  print_table(rows, out);
}

}  // namespace cfdistill::cli
