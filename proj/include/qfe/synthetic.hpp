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

#ifndef QFE_SYNTHETIC_HPP
#define QFE_SYNTHETIC_HPP

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "qfe/core.hpp"
#include "qfe/corpus_io.hpp"
#include "qfe/random.hpp"

namespace qfe {

/// Generative model for a labelled pool and a test pool.
///
/// Each document draws a group from `group_priors`, then a topic with
/// probability proportional to `affinity[topic][group]`, then a relevance flag.
/// Tokens mix a background vocabulary, the group's vocabulary (with
/// `group_confusion` of those draws taken from another group), the topic's
/// vocabulary and sporadic words from random topics. Relevant documents
/// up-weight their topic's words by `relevance_boost`.
///
/// Relevance is coupled to the group through the affinity: with coupling c,
/// P(relevant | t, g) = rate * (1 + c * (n * affinity[t][g] - 1)), so the
/// top of a ranking over-represents the topic's favoured group. This is the
/// selection effect the correction pool has to mimic.
struct SyntheticSpec {
  std::vector<double> group_priors{0.55, 0.25, 0.15, 0.05};
  std::size_t topic_count = 50;
  std::vector<std::vector<double>> affinity;  // empty: built from affinity_strength
  double affinity_strength = 0.7;
  double relevance_rate = 0.3;
  double relevance_group_coupling = 1.0;
  double relevance_boost = 4.0;

  std::size_t background_vocab = 3000;
  std::size_t group_vocab = 150;
  std::size_t topic_vocab = 40;
  std::size_t query_terms = 3;

  double background_weight = 0.49;
  double group_weight = 0.25;
  double topic_weight = 0.25;
  double noise_weight = 0.01;
  double group_confusion = 0.1;

  std::size_t doc_length_min = 40;
  std::size_t doc_length_max = 80;

  std::size_t docs_per_pool = 40000;
  std::size_t labeled_reserve = 2000;  // extra labelled documents for the classifier draw

  std::size_t class_count() const { return group_priors.size(); }

  /// Row t puts `affinity_strength` of extra mass on group t mod n.
  std::vector<std::vector<double>> resolved_affinity() const {
    if (!affinity.empty()) return affinity;
    const std::size_t n = class_count();
    std::vector<std::vector<double>> rows(topic_count, std::vector<double>(n));
    for (std::size_t t = 0; t < topic_count; ++t) {
      for (std::size_t g = 0; g < n; ++g) {
        rows[t][g] = (1.0 - affinity_strength) / static_cast<double>(n) +
                     (g == t % n ? affinity_strength : 0.0);
      }
    }
    return rows;
  }
};

inline void validate_synthetic_spec(const SyntheticSpec& spec) {
  const std::size_t n = spec.class_count();
  if (n < 2) throw Error("synthetic spec needs at least two groups");
  if (!is_on_simplex(spec.group_priors)) throw Error("group priors must lie on the simplex");
  if (spec.topic_count == 0) throw Error("synthetic spec needs at least one topic");
  const auto affinity = spec.resolved_affinity();
  if (affinity.size() != spec.topic_count) throw Error("affinity needs one row per topic");
  for (const auto& row : affinity) {
    if (row.size() != n || !is_on_simplex(row, 1e-6)) throw Error("affinity rows must lie on the simplex");
  }
  if (spec.affinity_strength < 0.0 || spec.affinity_strength > 1.0) {
    throw Error("affinity_strength must be in [0,1]");
  }
  if (spec.relevance_rate < 0.0 || spec.relevance_rate > 1.0) throw Error("relevance_rate must be in [0,1]");
  if (spec.relevance_group_coupling < 0.0) throw Error("relevance_group_coupling must be non-negative");
  if (spec.relevance_boost <= 0.0) throw Error("relevance_boost must be positive");
  if (spec.background_vocab == 0 || spec.group_vocab == 0) throw Error("vocabulary sizes must be positive");
  if (spec.query_terms == 0 || spec.topic_vocab < spec.query_terms) {
    throw Error("topic vocabulary must hold at least query_terms words");
  }
  for (double w : {spec.background_weight, spec.group_weight, spec.topic_weight, spec.noise_weight}) {
    if (w < 0.0) throw Error("mixture weights must be non-negative");
  }
  if (spec.background_weight + spec.group_weight + spec.topic_weight + spec.noise_weight <= 0.0) {
    throw Error("mixture weights must not all be zero");
  }
  if (spec.group_confusion < 0.0 || spec.group_confusion > 1.0) throw Error("group_confusion must be in [0,1]");
  if (spec.doc_length_min == 0 || spec.doc_length_min > spec.doc_length_max) {
    throw Error("document length range is invalid");
  }
  if (spec.docs_per_pool < 10 * n * spec.topic_count) {
    throw Error("docs_per_pool must be at least 10 * groups * topics");
  }
}

struct SyntheticBenchmark {
  Corpus labeled;
  Corpus test;
  std::vector<Query> queries;
};

namespace detail {

inline std::vector<std::string> make_words(const char* prefix, std::size_t count) {
  std::vector<std::string> words;
  words.reserve(count);
  for (std::size_t i = 0; i < count; ++i) words.push_back(prefix + std::to_string(i));
  return words;
}

inline std::vector<double> zipf_weights(std::size_t count) {
  std::vector<double> w(count);
  for (std::size_t r = 0; r < count; ++r) w[r] = 1.0 / static_cast<double>(r + 1);
  return w;
}

inline std::string group_name(std::size_t g) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "g%02zu", g);
  return buf;
}

class DocumentSampler {
 public:
  explicit DocumentSampler(const SyntheticSpec& spec)
      : spec_(spec),
        affinity_(spec.resolved_affinity()),
        background_(make_words("b", spec.background_vocab)),
        background_sampler_(zipf_weights(spec.background_vocab)),
        group_sampler_(zipf_weights(spec.group_vocab)),
        topic_sampler_(zipf_weights(spec.topic_vocab)) {
    const std::size_t n = spec.class_count();
    for (std::size_t g = 0; g < n; ++g) {
      group_words_.push_back(make_words(("g" + std::to_string(g) + "w").c_str(), spec.group_vocab));
    }
    for (std::size_t t = 0; t < spec.topic_count; ++t) {
      topic_words_.push_back(make_words(("t" + std::to_string(t) + "w").c_str(), spec.topic_vocab));
    }
    for (std::size_t g = 0; g < n; ++g) {
      std::vector<double> column(spec.topic_count);
      for (std::size_t t = 0; t < spec.topic_count; ++t) column[t] = affinity_[t][g];
      topic_given_group_.emplace_back(column);
    }
    prior_sampler_ = CumulativeSampler(spec.group_priors);
  }

  Document sample(Rng& rng, std::string id) const {
    const std::size_t n = spec_.class_count();
    Document doc;
    doc.id = std::move(id);
    const std::size_t g = prior_sampler_(rng);
    const std::size_t t = topic_given_group_[g](rng);
    const double rel_p = std::clamp(
        spec_.relevance_rate *
            (1.0 + spec_.relevance_group_coupling * (static_cast<double>(n) * affinity_[t][g] - 1.0)),
        0.0, 1.0);
    const bool relevant = rng.bernoulli(rel_p);
    doc.group = g;
    doc.relevant = relevant;

    const double topic_w = spec_.topic_weight * (relevant ? spec_.relevance_boost : 1.0);
    const double mix[4] = {spec_.background_weight, spec_.group_weight, topic_w, spec_.noise_weight};
    const std::size_t length =
        spec_.doc_length_min + rng.below(spec_.doc_length_max - spec_.doc_length_min + 1);
    doc.tokens.reserve(length);
    for (std::size_t i = 0; i < length; ++i) {
      switch (rng.categorical(mix)) {
        case 0:
          doc.tokens.push_back(background_[background_sampler_(rng)]);
          break;
        case 1: {
          std::size_t source = g;
          if (rng.bernoulli(spec_.group_confusion)) {
            source = (g + 1 + rng.below(n - 1)) % n;
          }
          doc.tokens.push_back(group_words_[source][group_sampler_(rng)]);
          break;
        }
        case 2:
          doc.tokens.push_back(topic_words_[t][topic_sampler_(rng)]);
          break;
        default:
          doc.tokens.push_back(topic_words_[rng.below(spec_.topic_count)][topic_sampler_(rng)]);
          break;
      }
    }
    return doc;
  }

  std::vector<Query> queries() const {
    std::vector<Query> out;
    for (std::size_t t = 0; t < spec_.topic_count; ++t) {
      Query q;
      char buf[16];
      std::snprintf(buf, sizeof buf, "q%03zu", t);
      q.id = buf;
      for (std::size_t k = 0; k < spec_.query_terms; ++k) {
        if (k) q.text.push_back(' ');
        q.text += topic_words_[t][k];
      }
      q.terms = tokenize(q.text);
      out.push_back(std::move(q));
    }
    return out;
  }

 private:
  const SyntheticSpec& spec_;
  std::vector<std::vector<double>> affinity_;
  std::vector<std::string> background_;
  std::vector<std::vector<std::string>> group_words_;
  std::vector<std::vector<std::string>> topic_words_;
  CumulativeSampler background_sampler_;
  CumulativeSampler group_sampler_;
  CumulativeSampler topic_sampler_;
  CumulativeSampler prior_sampler_;
  std::vector<CumulativeSampler> topic_given_group_;
};

inline Corpus sample_pool(const DocumentSampler& sampler, const SyntheticSpec& spec, Rng& rng,
                          const std::string& prefix, std::size_t count) {
  Corpus c;
  c.class_count = spec.class_count();
  c.attribute_name = "synthetic_group";
  for (std::size_t g = 0; g < c.class_count; ++g) c.group_names.push_back(group_name(g));
  c.documents.reserve(count);
  char buf[32];
  for (std::size_t i = 0; i < count; ++i) {
    std::snprintf(buf, sizeof buf, "%s%07zu", prefix.c_str(), i);
    c.documents.push_back(sampler.sample(rng, buf));
  }
  return c;
}

}  // namespace detail

/// Labelled pool (docs_per_pool + labeled_reserve documents), test pool
/// (docs_per_pool documents) and one query per topic, all from the same
/// generative process. `id_prefix` distinguishes independent generations.
inline SyntheticBenchmark generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed,
                                             const std::string& id_prefix = "") {
  validate_synthetic_spec(spec);
  detail::DocumentSampler sampler(spec);
  Rng labeled_rng(derive_seed(seed, 101));
  Rng test_rng(derive_seed(seed, 202));
  SyntheticBenchmark out;
  out.labeled = detail::sample_pool(sampler, spec, labeled_rng, id_prefix + "L",
                                    spec.docs_per_pool + spec.labeled_reserve);
  out.test = detail::sample_pool(sampler, spec, test_rng, id_prefix + "U", spec.docs_per_pool);
  out.queries = sampler.queries();
  return out;
}

}  // namespace qfe

#endif  // QFE_SYNTHETIC_HPP
