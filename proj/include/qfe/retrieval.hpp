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

#ifndef QFE_RETRIEVAL_HPP
#define QFE_RETRIEVAL_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "qfe/core.hpp"

namespace qfe {

struct Posting {
  std::uint32_t doc = 0;
  std::uint32_t term_frequency = 0;
};

struct Bm25Params {
  double k1 = 1.2;
  double b = 0.75;
};

/// Term-at-a-time inverted index over one corpus. Immutable once built.
struct InvertedIndex {
  std::unordered_map<std::string, std::vector<Posting>> postings;
  std::vector<std::uint32_t> doc_lengths;
  std::vector<std::string> doc_ids;
  double avg_doc_length = 0.0;

  std::size_t doc_count() const { return doc_lengths.size(); }
};

inline InvertedIndex build_index(const Corpus& corpus) {
  if (corpus.empty()) throw Error("cannot index an empty corpus");
  InvertedIndex index;
  const std::size_t n = corpus.size();
  index.doc_lengths.reserve(n);
  index.doc_ids.reserve(n);
  std::unordered_map<std::string, std::uint32_t> counts;
  double total_length = 0.0;
  for (std::size_t d = 0; d < n; ++d) {
    const auto& doc = corpus.documents[d];
    counts.clear();
    for (const auto& term : doc.tokens) ++counts[term];
    // Sorted so posting order does not depend on hash iteration order.
    std::vector<std::pair<const std::string*, std::uint32_t>> terms;
    terms.reserve(counts.size());
    for (const auto& [term, tf] : counts) terms.emplace_back(&term, tf);
    std::sort(terms.begin(), terms.end(),
              [](const auto& a, const auto& b) { return *a.first < *b.first; });
    for (const auto& [term, tf] : terms) {
      index.postings[*term].push_back({static_cast<std::uint32_t>(d), tf});
    }
    index.doc_lengths.push_back(static_cast<std::uint32_t>(doc.tokens.size()));
    index.doc_ids.push_back(doc.id);
    total_length += static_cast<double>(doc.tokens.size());
  }
  index.avg_doc_length = total_length / static_cast<double>(n);
  return index;
}

/// Lucene-style IDF; never negative.
inline double bm25_idf(std::size_t doc_count, std::size_t document_frequency) {
  const double N = static_cast<double>(doc_count);
  const double df = static_cast<double>(document_frequency);
  return std::log((N - df + 0.5) / (df + 0.5) + 1.0);
}

inline double bm25_term_weight(double idf, double tf, double doc_length,
                               double avg_doc_length, const Bm25Params& params) {
  const double norm =
      avg_doc_length > 0.0 ? doc_length / avg_doc_length : 0.0;
  return idf * (tf * (params.k1 + 1.0)) /
         (tf + params.k1 * (1.0 - params.b + params.b * norm));
}

/// Top-k BM25 retrieval. Repeated query terms count once; documents matching
/// no query term are never returned; ties go to the smaller doc id.
inline RankedList retrieve(const InvertedIndex& index, std::vector<std::string> query,
                           std::size_t top_k, const Bm25Params& params = {},
                           std::string query_id = {}) {
  if (top_k == 0) throw Error("top_k must be at least 1");
  RankedList out;
  out.query_id = std::move(query_id);

  std::sort(query.begin(), query.end());
  query.erase(std::unique(query.begin(), query.end()), query.end());

  std::vector<double> scores(index.doc_count(), 0.0);
  std::vector<std::uint32_t> touched;
  for (const auto& term : query) {
    auto it = index.postings.find(term);
    if (it == index.postings.end()) continue;
    const double idf = bm25_idf(index.doc_count(), it->second.size());
    for (const auto& p : it->second) {
      if (scores[p.doc] == 0.0) touched.push_back(p.doc);
      scores[p.doc] += bm25_term_weight(idf, p.term_frequency, index.doc_lengths[p.doc],
                                        index.avg_doc_length, params);
    }
  }

  std::vector<RankedEntry> candidates;
  candidates.reserve(touched.size());
  for (auto d : touched) {
    if (scores[d] > 0.0) candidates.push_back({d, index.doc_ids[d], scores[d]});
  }
  auto before = [](const RankedEntry& a, const RankedEntry& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.doc_id < b.doc_id;
  };
  const std::size_t keep = std::min(top_k, candidates.size());
  std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(keep),
                    candidates.end(), before);
  candidates.resize(keep);
  out.entries = std::move(candidates);
  return out;
}

}  // namespace qfe

#endif  // QFE_RETRIEVAL_HPP
