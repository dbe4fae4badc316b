// Copyright 2026 The QFE Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QFE_CONFIG_HPP
#define QFE_CONFIG_HPP

#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qfe/core.hpp"
#include "qfe/protocol.hpp"
#include "qfe/synthetic.hpp"

// Declarative run configuration: one `key = value` per line, `#` starts a
// comment. Lists are comma-separated. See docs/qfe.md for the key reference.
namespace qfe {

struct CorpusPaths {
  std::string labeled;
  std::string test;
  std::string queries;
};

struct RunConfig {
  ProtocolConfig protocol;
  std::optional<CorpusPaths> corpus;  // nullopt: synthetic benchmark
  SyntheticSpec synthetic;
  std::size_t validation_docs_per_pool = 10000;
};

using KeyValues = std::map<std::string, std::string>;

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

inline double parse_double(const std::string& key, const std::string& value) {
  double out = 0.0;
  const char* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end || !std::isfinite(out)) {
    throw Error("config key '" + key + "': expected a number, got '" + value + "'");
  }
  return out;
}

inline std::uint64_t parse_unsigned(const std::string& key, const std::string& value) {
  std::uint64_t out = 0;
  const char* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw Error("config key '" + key + "': expected a non-negative integer, got '" + value + "'");
  }
  return out;
}

inline bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw Error("config key '" + key + "': expected true or false, got '" + value + "'");
}

inline std::vector<double> parse_double_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  for (const auto& item : split_list(value)) out.push_back(parse_double(key, item));
  if (out.empty()) throw Error("config key '" + key + "': empty list");
  return out;
}

}  // namespace detail

inline KeyValues parse_key_values(std::istream& in) {
  KeyValues kv;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const auto key = detail::trim(line.substr(0, eq));
    const auto value = detail::trim(line.substr(eq + 1));
    if (key.empty()) throw Error("config line " + std::to_string(line_no) + ": empty key");
    if (!kv.emplace(key, value).second) {
      throw Error("config line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
  }
  return kv;
}

inline std::vector<Method> parse_method_list(const std::string& value) {
  std::vector<Method> out;
  for (const auto& name : detail::split_list(value)) out.push_back(parse_method(name));
  if (out.empty()) throw Error("no methods selected");
  return out;
}

inline std::vector<std::size_t> parse_size_list(const std::string& key, const std::string& value) {
  std::vector<std::size_t> out;
  for (const auto& item : detail::split_list(value)) {
    if (item == "full") {
      out.push_back(kFullPool);
      continue;
    }
    std::string digits = item;
    std::uint64_t scale = 1;
    if (!digits.empty() && (digits.back() == 'K' || digits.back() == 'k')) {
      scale = 1000;
      digits.pop_back();
    } else if (!digits.empty() && (digits.back() == 'M' || digits.back() == 'm')) {
      scale = 1000000;
      digits.pop_back();
    }
    out.push_back(static_cast<std::size_t>(detail::parse_unsigned(key, digits) * scale));
  }
  if (out.empty()) throw Error("config key '" + key + "': empty list");
  return out;
}

/// Applies every key to `config`; unknown keys are rejected so typos surface.
inline void apply_key_values(const KeyValues& kv, RunConfig& config) {
  auto& p = config.protocol;
  auto& s = config.synthetic;
  CorpusPaths paths;
  bool any_path = false;
  for (const auto& [key, value] : kv) {
    auto u = [&] { return static_cast<std::size_t>(detail::parse_unsigned(key, value)); };
    auto d = [&] { return detail::parse_double(key, value); };
    if (key == "seed") p.seed = detail::parse_unsigned(key, value);
    else if (key == "methods") p.methods = parse_method_list(value);
    else if (key == "cutoffs") p.cutoffs = CutoffSchedule(parse_size_list(key, value));
    else if (key == "pool_sizes") p.pool_sizes = parse_size_list(key, value);
    else if (key == "classifier_docs_per_group") p.classifier_docs_per_group = u();
    else if (key == "lq_cap_per_group") p.lq_cap_per_group = u();
    else if (key == "min_class_support") p.min_class_support = u();
    else if (key == "retrieval_depth") p.retrieval_depth = u();
    else if (key == "bm25.k1") p.bm25.k1 = d();
    else if (key == "bm25.b") p.bm25.b = d();
    else if (key == "model_selection") p.model_selection = detail::parse_bool(key, value);
    else if (key == "classifier.C") p.fixed_hyperparams.C = d();
    else if (key == "classifier.class_weighting") p.fixed_hyperparams.class_weighting = parse_class_weighting(value);
    else if (key == "cv_folds") p.cv_folds = u();
    else if (key == "kdey.bandwidth") {
      if (value == "auto") p.kdey_bandwidth.reset();
      else p.kdey_bandwidth = d();
    }
    else if (key == "kdey.bandwidth_grid") p.bandwidth_grid = detail::parse_double_list(key, value);
    else if (key == "corpus.labeled") { paths.labeled = value; any_path = true; }
    else if (key == "corpus.test") { paths.test = value; any_path = true; }
    else if (key == "corpus.queries") { paths.queries = value; any_path = true; }
    else if (key == "synthetic.group_priors") s.group_priors = detail::parse_double_list(key, value);
    else if (key == "synthetic.topic_count") s.topic_count = u();
    else if (key == "synthetic.affinity_strength") s.affinity_strength = d();
    else if (key == "synthetic.relevance_rate") s.relevance_rate = d();
    else if (key == "synthetic.relevance_group_coupling") s.relevance_group_coupling = d();
    else if (key == "synthetic.relevance_boost") s.relevance_boost = d();
    else if (key == "synthetic.background_vocab") s.background_vocab = u();
    else if (key == "synthetic.group_vocab") s.group_vocab = u();
    else if (key == "synthetic.topic_vocab") s.topic_vocab = u();
    else if (key == "synthetic.query_terms") s.query_terms = u();
    else if (key == "synthetic.background_weight") s.background_weight = d();
    else if (key == "synthetic.group_weight") s.group_weight = d();
    else if (key == "synthetic.topic_weight") s.topic_weight = d();
    else if (key == "synthetic.noise_weight") s.noise_weight = d();
    else if (key == "synthetic.group_confusion") s.group_confusion = d();
    else if (key == "synthetic.doc_length_min") s.doc_length_min = u();
    else if (key == "synthetic.doc_length_max") s.doc_length_max = u();
    else if (key == "synthetic.docs_per_pool") s.docs_per_pool = u();
    else if (key == "synthetic.labeled_reserve") s.labeled_reserve = u();
    else if (key == "synthetic.validation_docs_per_pool") config.validation_docs_per_pool = u();
    else throw Error("unknown config key '" + key + "'");
  }
  if (any_path) {
    if (paths.labeled.empty() || paths.test.empty() || paths.queries.empty()) {
      throw Error("corpus.labeled, corpus.test and corpus.queries must be given together");
    }
    config.corpus = paths;
  }
}

inline RunConfig read_run_config(std::istream& in) {
  RunConfig config;
  apply_key_values(parse_key_values(in), config);
  return config;
}

inline RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file " + path);
  try {
    return read_run_config(in);
  } catch (const Error& e) {
    throw Error(path + ": " + e.what());
  }
}

}  // namespace qfe

#endif  // QFE_CONFIG_HPP
