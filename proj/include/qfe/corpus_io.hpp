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

#ifndef QFE_CORPUS_IO_HPP
#define QFE_CORPUS_IO_HPP

#include <algorithm>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qfe/core.hpp"
#include "qfe/text.hpp"

namespace qfe {

struct Query {
  std::string id;
  std::string text;
  std::vector<std::string> terms;
};

/// Reads one document per line: {"id", "text", "group": string|null,
/// "relevant": bool (optional)}. Group indices follow the sorted order of the
/// distinct group strings unless a name table is supplied, in which case
/// unknown names are rejected.
inline Corpus read_corpus_jsonl(std::istream& in,
                                const std::optional<std::vector<std::string>>& group_names = {},
                                std::string attribute_name = "group") {
  struct Raw {
    std::string id;
    std::string text;
    std::optional<std::string> group;
    std::optional<bool> relevant;
  };
  std::vector<Raw> raws;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception&) {
      throw Error(where + "malformed JSON");
    }
    if (!j.is_object()) throw Error(where + "expected a JSON object");
    Raw r;
    if (!j.contains("id") || !j["id"].is_string()) throw Error(where + "missing string field 'id'");
    if (!j.contains("text") || !j["text"].is_string()) throw Error(where + "missing string field 'text'");
    r.id = j["id"].get<std::string>();
    r.text = j["text"].get<std::string>();
    if (j.contains("group") && !j["group"].is_null()) {
      if (!j["group"].is_string()) throw Error(where + "field 'group' must be a string or null");
      r.group = j["group"].get<std::string>();
    }
    if (j.contains("relevant") && !j["relevant"].is_null()) {
      if (!j["relevant"].is_boolean()) throw Error(where + "field 'relevant' must be a boolean");
      r.relevant = j["relevant"].get<bool>();
    }
    raws.push_back(std::move(r));
  }

  Corpus corpus;
  corpus.attribute_name = std::move(attribute_name);
  if (group_names) {
    corpus.group_names = *group_names;
  } else {
    std::set<std::string> names;
    for (const auto& r : raws) {
      if (r.group) names.insert(*r.group);
    }
    corpus.group_names.assign(names.begin(), names.end());
  }
  corpus.class_count = corpus.group_names.size();
  corpus.documents.reserve(raws.size());
  for (auto& r : raws) {
    Document d;
    d.id = std::move(r.id);
    d.tokens = tokenize(r.text);
    d.relevant = r.relevant;
    if (r.group) {
      auto it = std::find(corpus.group_names.begin(), corpus.group_names.end(), *r.group);
      if (it == corpus.group_names.end()) throw Error("unknown group '" + *r.group + "' in document " + d.id);
      d.group = static_cast<std::size_t>(it - corpus.group_names.begin());
    }
    corpus.documents.push_back(std::move(d));
  }
  validate_corpus(corpus);
  return corpus;
}

inline Corpus load_corpus_jsonl(const std::string& path,
                                const std::optional<std::vector<std::string>>& group_names = {}) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open corpus file " + path);
  try {
    return read_corpus_jsonl(in, group_names);
  } catch (const Error& e) {
    throw Error(path + ": " + e.what());
  }
}

inline std::string join_tokens(const std::vector<std::string>& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

/// Writes documents back as JSON Lines; the text field is the space-joined
/// token sequence.
inline void write_corpus_jsonl(std::ostream& out, const Corpus& corpus) {
  for (const auto& d : corpus.documents) {
    nlohmann::ordered_json j;
    j["id"] = d.id;
    j["text"] = join_tokens(d.tokens);
    if (d.group) {
      j["group"] = corpus.group_names.at(*d.group);
    } else {
      j["group"] = nullptr;
    }
    if (d.relevant) j["relevant"] = *d.relevant;
    out << j.dump() << '\n';
  }
}

inline std::vector<Query> read_queries_tsv(std::istream& in) {
  std::vector<Query> queries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) {
      throw Error("queries line " + std::to_string(line_no) + ": expected query_id<TAB>text");
    }
    Query q;
    q.id = line.substr(0, tab);
    q.text = line.substr(tab + 1);
    q.terms = tokenize(q.text);
    queries.push_back(std::move(q));
  }
  return queries;
}

inline std::vector<Query> load_queries_tsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open queries file " + path);
  return read_queries_tsv(in);
}

inline void write_queries_tsv(std::ostream& out, const std::vector<Query>& queries) {
  for (const auto& q : queries) out << q.id << '\t' << q.text << '\n';
}

}  // namespace qfe

#endif  // QFE_CORPUS_IO_HPP
