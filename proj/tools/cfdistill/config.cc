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


#include "config.h"

#include <fstream>
#include <set>
#include <type_traits>

#include "cfdistill/errors.h"

namespace cfdistill::cli {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

// Typed access to one JSON object; remembers which keys were read so
// leftovers can be reported as unknown.
class Section {
 public:
  Section(const json &j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_.empty() ? "config" : path_, "an object");
  }

  template <typename T>
  void read(const char *key, T &out) {
    auto it = j_.find(key);
    seen_.insert(key);
    if (it == j_.end()) return;
    const std::string name = qualified(key);
    if constexpr (std::is_same_v<T, bool>) {
      if (!it->is_boolean()) fail(name, "a boolean");
      out = it->get<bool>();
    } else if constexpr (std::is_integral_v<T> && std::is_unsigned_v<T>) {
      if (!it->is_number_unsigned()) fail(name, "a non-negative integer");
      out = it->get<T>();
    } else if constexpr (std::is_integral_v<T>) {
      if (!it->is_number_integer()) fail(name, "an integer");
      out = it->get<T>();
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!it->is_number()) fail(name, "a number");
      out = it->get<T>();
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!it->is_string()) fail(name, "a string");
      out = it->get<std::string>();
    } else if constexpr (std::is_same_v<T, std::vector<std::string>>) {
      if (!it->is_array()) fail(name, "a list of strings");
      std::vector<std::string> v;
      for (const auto &e : *it) {
        if (!e.is_string()) fail(name, "a list of strings");
        v.push_back(e.get<std::string>());
      }
      out = std::move(v);
    } else if constexpr (std::is_same_v<T,
                                        std::map<std::string, std::string>>) {
      if (!it->is_object()) fail(name, "an object of strings");
      std::map<std::string, std::string> m;
      for (const auto &[k, v] : it->items()) {
        if (!v.is_string()) fail(name, "an object of strings");
        m[k] = v.template get<std::string>();
      }
      out = std::move(m);
    } else {
      static_assert(sizeof(T) == 0, "unsupported config field type");
    }
  }

  // Nested section, or nullptr when absent.
  std::unique_ptr<Section> child(const char *key) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end()) return nullptr;
    return std::make_unique<Section>(*it, qualified(key));
  }

  void finish() const {
    for (const auto &[k, v] : j_.items()) {
      if (!seen_.count(k)) throw InputError("unknown config key: " + qualified(k));
    }
  }

 private:
  std::string qualified(const std::string &key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  [[noreturn]] static void fail(const std::string &name, const char *what) {
    throw InputError("config key " + name + " must be " + what);
  }

  const json &j_;
  std::string path_;
  std::set<std::string> seen_;
};

void read_retry(Section &s, RetryPolicy &retry) {
  s.read("max_attempts", retry.max_attempts);
  s.read("base_delay_s", retry.base_delay_s);
  s.read("backoff_factor", retry.factor);
}

void read_endpoint(Section &s, EndpointConfig &e) {
  s.read("kind", e.kind);
  s.read("base_url", e.base_url);
  s.read("token_env", e.token_env);
  s.read("headers", e.headers);
  s.read("timeout_s", e.timeout_s);
  s.read("rate_limit_rps", e.rate_limit_rps);
  s.read("max_in_flight", e.max_in_flight);
  read_retry(s, e.retry);
}

ordered_json endpoint_json(const EndpointConfig &e) {
  ordered_json j;
  j["kind"] = e.kind;
  j["base_url"] = e.base_url;
  j["token_env"] = e.token_env;
  j["headers"] = e.headers;
  j["timeout_s"] = e.timeout_s;
  j["rate_limit_rps"] = e.rate_limit_rps;
  j["max_in_flight"] = e.max_in_flight;
  j["max_attempts"] = e.retry.max_attempts;
  j["base_delay_s"] = e.retry.base_delay_s;
  j["backoff_factor"] = e.retry.factor;
  return j;
}

void validate_endpoint(const EndpointConfig &e, const std::string &name) {
  if (e.kind != "mock" && e.kind != "http") {
    throw InputError(name + ".kind must be \"mock\" or \"http\"");
  }
  if (e.kind == "http" && e.base_url.empty()) {
    throw InputError(name + ".base_url is required for kind \"http\"");
  }
  if (!(e.timeout_s > 0.0)) throw InputError(name + ".timeout_s must be > 0");
  if (e.max_in_flight == 0) {
    throw InputError(name + ".max_in_flight must be positive");
  }
  e.retry.validate();
}

}  // namespace

HttpClientOptions EndpointConfig::client_options() const {
  HttpClientOptions o;
  o.endpoint.base_url = base_url;
  o.endpoint.token_env = token_env;
  o.endpoint.headers = headers;
  o.endpoint.timeout_s = timeout_s;
  o.retry = retry;
  o.rate_limit_rps = rate_limit_rps;
  o.max_in_flight = max_in_flight;
  return o;
}

RunConfig::RunConfig() {
  backend.endpoint.token_env = "CFDISTILL_API_KEY";
  scorer.endpoint.max_in_flight = 8;
  scorer.endpoint.rate_limit_rps = 0.0;
}

void RunConfig::validate() const {
  if (out_dir.empty()) throw InputError("out_dir must not be empty");
  validate_endpoint(backend.endpoint, "backend");
  validate_endpoint(scorer.endpoint, "scorer");
  if (scorer.max_batch == 0) throw InputError("scorer.max_batch must be > 0");
  generate.params.validate();
  for (const std::string &d : generate.directions) Direction::parse(d);
  if (generate.workers == 0) throw InputError("generate.workers must be > 0");
  if (chunker.min_chunk_tokens == 0 ||
      chunker.max_chunk_tokens < chunker.min_chunk_tokens) {
    throw InputError("chunker token bounds are inconsistent");
  }
  filter.heuristic_config.validate();
  filter.teacher_config.validate();
  if (!(select_fraction > 0.0 && select_fraction <= 1.0)) {
    throw InputError("select.fraction must be in (0, 1]");
  }
  static const std::set<std::string> kMetrics = {
      "flip-rate", "self-bleu", "otdd", "sensitivity", "cf-accuracy"};
  for (const std::string &m : eval.metrics) {
    if (!kMetrics.count(m)) throw InputError("unknown metric: " + m);
  }
  if (eval.max_n < 1 || eval.max_n > 4) {
    throw InputError("eval.max_n must be in [1, 4]");
  }
  if (eval.embedding_dim == 0) {
    throw InputError("eval.embedding_dim must be positive");
  }
}

void apply_json(const json &j, RunConfig &c) {
  Section root(j, "");
  root.read("seed", c.seed);
  root.read("out_dir", c.out_dir);
  if (auto s = root.child("backend")) {
    read_endpoint(*s, c.backend.endpoint);
    s->read("model", c.backend.model);
    s->read("lexicon", c.backend.lexicon);
    s->finish();
  }
  if (auto s = root.child("scorer")) {
    read_endpoint(*s, c.scorer.endpoint);
    s->read("max_batch", c.scorer.max_batch);
    s->read("overrides", c.scorer.overrides);
    s->finish();
  }
  if (auto s = root.child("generate")) {
    GenerationParams &p = c.generate.params;
    s->read("temperature", p.temperature);
    s->read("frequency_penalty", p.frequency_penalty);
    s->read("presence_penalty", p.presence_penalty);
    s->read("n_samples", p.n_samples);
    s->read("max_tokens", p.max_tokens);
    s->read("stop", p.stop);
    std::string mode = std::string(prompt_mode_name(c.generate.mode));
    s->read("mode", mode);
    auto parsed = prompt_mode_from_name(mode);
    if (!parsed) throw InputError("generate.mode must be masked or insertion");
    c.generate.mode = *parsed;
    s->read("directions", c.generate.directions);
    s->read("workers", c.generate.workers);
    s->read("template", c.generate.template_path);
    s->read("icl_examples", c.generate.icl_path);
    s->read("icl_count", c.generate.icl_count);
    s->finish();
  }
  if (auto s = root.child("chunker")) {
    s->read("function_words", c.chunker.function_words);
    s->read("min_chunk_tokens", c.chunker.min_chunk_tokens);
    s->read("max_chunk_tokens", c.chunker.max_chunk_tokens);
    s->read("use_precomputed", c.chunker.use_precomputed);
    s->finish();
  }
  if (auto s = root.child("filter")) {
    HeuristicConfig &h = c.filter.heuristic_config;
    TeacherConfig &t = c.filter.teacher_config;
    s->read("heuristic", c.filter.heuristic);
    s->read("teacher", c.filter.teacher);
    s->read("window", h.window);
    s->read("overlap_threshold", h.overlap_threshold);
    s->read("negation_words", h.negation_words);
    s->read("threshold", t.threshold);
    s->read("require_argmax", t.require_argmax);
    s->read("max_in_flight", t.max_in_flight);
    s->read("batch_size", t.batch_size);
    s->finish();
  }
  if (auto s = root.child("select")) {
    s->read("fraction", c.select_fraction);
    s->finish();
  }
  if (auto s = root.child("eval")) {
    s->read("metrics", c.eval.metrics);
    s->read("max_n", c.eval.max_n);
    s->read("embedding_dim", c.eval.embedding_dim);
    s->read("otdd_exact_max_cells", c.eval.otdd.exact_max_cells);
    s->read("otdd_eps_scale", c.eval.otdd.eps_scale);
    s->read("otdd_max_iters", c.eval.otdd.max_iters);
    s->read("otdd_tol", c.eval.otdd.tol);
    s->finish();
  }
  if (auto s = root.child("paths")) {
    PathsConfig &p = c.paths;
    s->read("input", p.input);
    s->read("stats", p.stats);
    s->read("candidates", p.candidates);
    s->read("base", p.base);
    s->read("subset", p.subset);
    s->read("counterfactuals", p.counterfactuals);
    s->read("original", p.original);
    s->read("annotations", p.annotations);
    s->read("pairs", p.pairs);
    s->finish();
  }
  root.finish();
}

RunConfig load_config(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file: " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error &e) {
    throw InputError("invalid config file " + path.string() + ": " + e.what());
  }
  RunConfig config;
  apply_json(j, config);
  return config;
}

ordered_json to_json(const RunConfig &c) {
  ordered_json j;
  j["seed"] = c.seed;
  j["out_dir"] = c.out_dir;

  ordered_json backend = endpoint_json(c.backend.endpoint);
  backend["model"] = c.backend.model;
  backend["lexicon"] = c.backend.lexicon;
  j["backend"] = backend;

  ordered_json scorer = endpoint_json(c.scorer.endpoint);
  scorer["max_batch"] = c.scorer.max_batch;
  scorer["overrides"] = c.scorer.overrides;
  j["scorer"] = scorer;

  const GenerationParams &p = c.generate.params;
  ordered_json gen;
  gen["temperature"] = p.temperature;
  gen["frequency_penalty"] = p.frequency_penalty;
  gen["presence_penalty"] = p.presence_penalty;
  gen["n_samples"] = p.n_samples;
  gen["max_tokens"] = p.max_tokens;
  gen["stop"] = p.stop;
  gen["mode"] = prompt_mode_name(c.generate.mode);
  gen["directions"] = c.generate.directions;
  gen["workers"] = c.generate.workers;
  gen["template"] = c.generate.template_path;
  gen["icl_examples"] = c.generate.icl_path;
  gen["icl_count"] = c.generate.icl_count;
  j["generate"] = gen;

  ordered_json chunker;
  chunker["function_words"] = c.chunker.function_words;
  chunker["min_chunk_tokens"] = c.chunker.min_chunk_tokens;
  chunker["max_chunk_tokens"] = c.chunker.max_chunk_tokens;
  chunker["use_precomputed"] = c.chunker.use_precomputed;
  j["chunker"] = chunker;

  const HeuristicConfig &h = c.filter.heuristic_config;
  const TeacherConfig &t = c.filter.teacher_config;
  ordered_json filter;
  filter["heuristic"] = c.filter.heuristic;
  filter["teacher"] = c.filter.teacher;
  filter["window"] = h.window;
  filter["overlap_threshold"] = h.overlap_threshold;
  filter["negation_words"] = h.negation_words;
  filter["threshold"] = t.threshold;
  filter["require_argmax"] = t.require_argmax;
  filter["max_in_flight"] = t.max_in_flight;
  filter["batch_size"] = t.batch_size;
  j["filter"] = filter;

  j["select"] = {{"fraction", c.select_fraction}};

  ordered_json eval;
  eval["metrics"] = c.eval.metrics;
  eval["max_n"] = c.eval.max_n;
  eval["embedding_dim"] = c.eval.embedding_dim;
  eval["otdd_exact_max_cells"] = c.eval.otdd.exact_max_cells;
  eval["otdd_eps_scale"] = c.eval.otdd.eps_scale;
  eval["otdd_max_iters"] = c.eval.otdd.max_iters;
  eval["otdd_tol"] = c.eval.otdd.tol;
  j["eval"] = eval;

  ordered_json paths;
  paths["input"] = c.paths.input;
  paths["stats"] = c.paths.stats;
  paths["candidates"] = c.paths.candidates;
  paths["base"] = c.paths.base;
  paths["subset"] = c.paths.subset;
  paths["counterfactuals"] = c.paths.counterfactuals;
  paths["original"] = c.paths.original;
  paths["annotations"] = c.paths.annotations;
  paths["pairs"] = c.paths.pairs;
  j["paths"] = paths;
  return j;
}

}  // namespace cfdistill::cli
