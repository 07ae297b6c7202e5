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

#include "cfdistill/dataset.h"

#include <cmath>
#include <fstream>
#include <unordered_set>

#include <spdlog/spdlog.h>

#include "cfdistill/errors.h"
#include "cfdistill/text.h"
#include "jsonl.h"

namespace cfdistill {

using internal::Json;
using internal::OrderedJson;

namespace internal {

OrderedJson distribution_json(const LabelDistribution &dist) {
  OrderedJson out = OrderedJson::object();
  for (Label l : kAllLabels) {
    out[std::string(label_name(l))] = quantize6(dist[l]);
  }
  return out;
}

}  // namespace internal

namespace {

// Sentinel returned by parse_nli when a record has no gold label.
constexpr const char *kNoGoldLabel = "-";

void check_text(const std::string &text, const char *field,
                const std::string &path, size_t line) {
  if (normalize_whitespace(text).empty()) {
    throw DatasetError(path, line,
                       std::string("field \"") + field + "\" is empty");
  }
}

std::vector<Span> parse_spans(const Json &value, const std::string &premise,
                              const std::string &path, size_t line) {
  if (!value.is_array()) {
    throw DatasetError(path, line, "\"spans\" must be a list of [start, end]");
  }
  std::vector<Span> spans;
  try {
    for (const Json &pair : value) {
      if (!pair.is_array() || pair.size() != 2 ||
          !pair[0].is_number_unsigned() || !pair[1].is_number_unsigned()) {
        throw InputError("\"spans\" entries must be [start, end] pairs");
      }
      spans.push_back(
          make_span(premise, pair[0].get<size_t>(), pair[1].get<size_t>()));
    }
    check_span_set(premise, spans);
  } catch (const DatasetError &) {
    throw;
  } catch (const InputError &e) {
    throw DatasetError(path, line, e.what());
  }
  return spans;
}

Provenance parse_provenance(const Json &record, const std::string &path,
                            size_t line) {
  const Json &p = internal::require_field(record, "provenance", path, line);
  if (!p.is_object()) {
    throw DatasetError(path, line, "\"provenance\" must be an object");
  }
  Provenance out;
  out.source_id = internal::require_string(p, "source_id", path, line);
  out.span_start = internal::require_offset(p, "span_start", path, line);
  out.span_end = internal::require_offset(p, "span_end", path, line);
  out.replacement = internal::require_string(p, "replacement", path, line);
  try {
    out.direction =
        Direction::parse(internal::require_string(p, "direction", path, line));
  } catch (const DatasetError &) {
    throw;
  } catch (const InputError &e) {
    throw DatasetError(path, line, e.what());
  }
  std::string mode = internal::require_string(p, "mode", path, line);
  auto parsed_mode = prompt_mode_from_name(mode);
  if (!parsed_mode) {
    throw DatasetError(path, line, "unknown mode \"" + mode + "\"");
  }
  out.mode = *parsed_mode;
  out.delta = internal::require_number(p, "delta", path, line);
  if (out.span_start >= out.span_end) {
    throw DatasetError(path, line, "provenance span is empty");
  }
  return out;
}

OrderedJson provenance_json(const Provenance &p) {
  OrderedJson out = OrderedJson::object();
  out["source_id"] = p.source_id;
  out["span_start"] = p.span_start;
  out["span_end"] = p.span_end;
  out["replacement"] = p.replacement;
  out["direction"] = p.direction.short_name();
  out["mode"] = std::string(prompt_mode_name(p.mode));
  out["delta"] = quantize6(p.delta);
  return out;
}

OrderedJson example_json(const NliExample &e) {
  OrderedJson out = OrderedJson::object();
  out["id"] = e.id;
  out["premise"] = e.premise;
  out["hypothesis"] = e.hypothesis;
  out["label"] = std::string(label_name(e.label));
  if (!e.spans.empty()) {
    OrderedJson spans = OrderedJson::array();
    for (const Span &s : e.spans) spans.push_back({s.start, s.end});
    out["spans"] = std::move(spans);
  }
  return out;
}

class LineFile {
 public:
  explicit LineFile(const std::filesystem::path &path)
      : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw Error("cannot open output file: " + path.string());
  }

  void write(const std::string &line) {
    out_ << line << '\n';
    if (!out_) throw Error("write failed: " + path_.string());
  }

  void close() {
    out_.close();
    if (!out_) throw Error("close failed: " + path_.string());
  }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

template <typename T>
void write_all(std::span<const T> items, const std::filesystem::path &path) {
  LineFile file(path);
  for (const T &item : items) file.write(serialize_record(item));
  file.close();
}

}  // namespace

double quantize6(double value) {
  return std::round(value * 1e6) / 1e6 + 0.0;
}

std::vector<NliExample> read_dataset(const std::filesystem::path &path,
                                     DatasetKind kind) {
  const std::string path_str = path.string();
  const std::string stem = path.stem().string();
  std::vector<NliExample> out;
  std::unordered_set<std::string> seen;
  size_t no_gold = 0;

  internal::for_each_record(
      path, [&](const Json &record, size_t line, size_t index) {
        NliExample e;
        auto id_it = record.find("id");
        if (id_it == record.end() || id_it->is_null()) {
          e.id = stem + "#" + std::to_string(index);
        } else {
          if (!id_it->is_string() || id_it->get<std::string>().empty()) {
            throw DatasetError(path_str, line,
                               "field \"id\" must be a non-empty string");
          }
          e.id = id_it->get<std::string>();
        }
        e.premise = internal::require_string(record, "premise", path_str, line);
        e.hypothesis =
            internal::require_string(record, "hypothesis", path_str, line);
        std::string label =
            internal::require_string(record, "label", path_str, line);
        if (label == kNoGoldLabel) {
          ++no_gold;
          return;
        }
        auto parsed = label_from_name(label);
        if (!parsed) {
          throw DatasetError(path_str, line, "unknown label \"" + label + "\"");
        }
        e.label = *parsed;
        check_text(e.premise, "premise", path_str, line);
        check_text(e.hypothesis, "hypothesis", path_str, line);
        if (auto it = record.find("spans"); it != record.end()) {
          e.spans = parse_spans(*it, e.premise, path_str, line);
        }
        if (kind == DatasetKind::kDistilled) {
          Provenance p = parse_provenance(record, path_str, line);
          if (p.direction.target() != e.label) {
            throw DatasetError(path_str, line,
                               "label does not match provenance direction");
          }
        }
        if (!seen.insert(e.id).second) {
          throw DatasetError(path_str, line, "duplicate id \"" + e.id + "\"");
        }
        out.push_back(std::move(e));
      });

  if (no_gold > 0) {
    spdlog::info("{}: skipped {} record(s) without a gold label", path_str,
                 no_gold);
  }
  return out;
}

void write_dataset(std::span<const NliExample> examples,
                   const std::filesystem::path &path) {
  write_all(examples, path);
}

std::vector<DistilledExample> read_distilled(
    const std::filesystem::path &path) {
  const std::string path_str = path.string();
  std::vector<DistilledExample> out;
  std::unordered_set<std::string> seen;
  internal::for_each_record(path, [&](const Json &record, size_t line,
                                      size_t) {
    DistilledExample d;
    d.id = internal::require_string(record, "id", path_str, line);
    d.new_premise = internal::require_string(record, "premise", path_str, line);
    d.hypothesis =
        internal::require_string(record, "hypothesis", path_str, line);
    d.new_label = internal::require_label(record, "label", path_str, line);
    d.provenance = parse_provenance(record, path_str, line);
    if (d.provenance.direction.target() != d.new_label) {
      throw DatasetError(path_str, line,
                         "label does not match provenance direction");
    }
    check_text(d.new_premise, "premise", path_str, line);
    if (!seen.insert(d.id).second) {
      throw DatasetError(path_str, line, "duplicate id \"" + d.id + "\"");
    }
    out.push_back(std::move(d));
  });
  return out;
}

void write_distilled(std::span<const DistilledExample> examples,
                     const std::filesystem::path &path) {
  write_all(examples, path);
}

std::vector<CandidatePerturbation> read_candidates(
    const std::filesystem::path &path) {
  const std::string path_str = path.string();
  std::vector<CandidatePerturbation> out;
  internal::for_each_record(path, [&](const Json &record, size_t line,
                                      size_t) {
    CandidatePerturbation c;
    c.id = internal::require_string(record, "id", path_str, line);
    c.example_id = internal::require_string(record, "example_id", path_str,
                                            line);
    c.premise = internal::require_string(record, "premise", path_str, line);
    c.hypothesis =
        internal::require_string(record, "hypothesis", path_str, line);
    size_t start = internal::require_offset(record, "span_start", path_str,
                                            line);
    size_t end = internal::require_offset(record, "span_end", path_str, line);
    try {
      c.span = make_span(c.premise, start, end);
      c.direction = Direction::parse(
          internal::require_string(record, "direction", path_str, line));
    } catch (const DatasetError &) {
      throw;
    } catch (const InputError &e) {
      throw DatasetError(path_str, line, e.what());
    }
    std::string mode = internal::require_string(record, "mode", path_str, line);
    auto parsed_mode = prompt_mode_from_name(mode);
    if (!parsed_mode) {
      throw DatasetError(path_str, line, "unknown mode \"" + mode + "\"");
    }
    c.mode = *parsed_mode;
    c.sample_index = static_cast<int>(
        internal::require_offset(record, "sample_index", path_str, line));
    c.replacement =
        internal::require_string(record, "replacement", path_str, line);
    c.new_premise =
        internal::require_string(record, "new_premise", path_str, line);
    c.raw_completion =
        internal::require_string(record, "raw_completion", path_str, line);
    c.params_fingerprint =
        internal::require_string(record, "params_fingerprint", path_str, line);
    out.push_back(std::move(c));
  });
  return out;
}

void write_candidates(std::span<const CandidatePerturbation> candidates,
                      const std::filesystem::path &path) {
  write_all(candidates, path);
}

std::string serialize_record(const NliExample &example) {
  return example_json(example).dump();
}

std::string serialize_record(const DistilledExample &example) {
  OrderedJson out = example_json(example.as_example());
  out["provenance"] = provenance_json(example.provenance);
  return out.dump();
}

std::string serialize_record(const CandidatePerturbation &c) {
  OrderedJson out = OrderedJson::object();
  out["id"] = c.id;
  out["example_id"] = c.example_id;
  out["premise"] = c.premise;
  out["hypothesis"] = c.hypothesis;
  out["span_start"] = c.span.start;
  out["span_end"] = c.span.end;
  out["span_text"] = c.span.text;
  out["direction"] = c.direction.short_name();
  out["mode"] = std::string(prompt_mode_name(c.mode));
  out["sample_index"] = c.sample_index;
  out["replacement"] = c.replacement;
  out["new_premise"] = c.new_premise;
  out["raw_completion"] = c.raw_completion;
  out["params_fingerprint"] = c.params_fingerprint;
  return out.dump();
}

void write_lines(const std::vector<std::string> &lines,
                 const std::filesystem::path &path) {
  LineFile file(path);
  for (const std::string &line : lines) file.write(line);
  file.close();
}

}  // namespace cfdistill
