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

#ifndef QFE_PROTOCOL_HPP
#define QFE_PROTOCOL_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qfe/classifier.hpp"
#include "qfe/core.hpp"
#include "qfe/corpus_io.hpp"
#include "qfe/fairness.hpp"
#include "qfe/pmc.hpp"
#include "qfe/quantifiers.hpp"
#include "qfe/random.hpp"
#include "qfe/retrieval.hpp"

namespace qfe {

enum class Method { naive, cc, acc, pacc, kdey, pmc_b, pmc_b_plus, pmc_d, pmc_d_plus };

inline constexpr Method kAllMethods[] = {Method::naive, Method::cc,        Method::acc,
                                         Method::pacc,  Method::kdey,      Method::pmc_b,
                                         Method::pmc_b_plus, Method::pmc_d, Method::pmc_d_plus};

inline const char* to_string(Method m) {
  switch (m) {
    case Method::naive: return "naive";
    case Method::cc: return "cc";
    case Method::acc: return "acc";
    case Method::pacc: return "pacc";
    case Method::kdey: return "kdey";
    case Method::pmc_b: return "pmc_b";
    case Method::pmc_b_plus: return "pmc_b_plus";
    case Method::pmc_d: return "pmc_d";
    case Method::pmc_d_plus: return "pmc_d_plus";
  }
  return "?";
}

inline std::string valid_method_names() {
  std::string out;
  for (auto m : kAllMethods) {
    if (!out.empty()) out += ", ";
    out += to_string(m);
  }
  return out;
}

inline Method parse_method(const std::string& name) {
  for (auto m : kAllMethods) {
    if (name == to_string(m)) return m;
  }
  throw Error("unknown method '" + name + "'; valid methods: " + valid_method_names());
}

inline bool is_pmc(Method m) {
  return m == Method::pmc_b || m == Method::pmc_b_plus || m == Method::pmc_d ||
         m == Method::pmc_d_plus;
}

inline std::optional<QuantifierVariant> quantifier_for(Method m) {
  switch (m) {
    case Method::naive: return QuantifierVariant::naive;
    case Method::cc: return QuantifierVariant::cc;
    case Method::acc: return QuantifierVariant::acc;
    case Method::pacc: return QuantifierVariant::pacc;
    case Method::kdey: return QuantifierVariant::kdey;
    default: return std::nullopt;
  }
}

inline constexpr std::size_t kFullPool = 0;

struct ProtocolConfig {
  std::uint64_t seed = 0;
  std::size_t classifier_docs_per_group = 500;
  std::size_t lq_cap_per_group = 200;
  std::size_t min_class_support = 5;  // fewer correction items per class: global statistics
  std::vector<std::size_t> pool_sizes{kFullPool};  // kFullPool: everything left after the draw
  CutoffSchedule cutoffs{};
  std::size_t retrieval_depth = 1000;
  std::vector<Method> methods{Method::naive, Method::cc, Method::pacc, Method::kdey};
  Bm25Params bm25{};

  bool model_selection = true;
  std::vector<ClassifierHyperParams> hyperparameter_grid = default_hyperparameter_grid();
  ClassifierHyperParams fixed_hyperparams{};  // used when model_selection is off
  std::size_t cv_folds = 5;

  std::optional<double> kdey_bandwidth;  // nullopt: select on validation queries
  std::vector<double> bandwidth_grid = default_bandwidth_grid();
  std::size_t bandwidth_selection_cutoff = 100;
};

inline void validate_protocol_config(const ProtocolConfig& config, std::size_t class_count) {
  if (config.lq_cap_per_group == 0) throw Error("lq_cap_per_group must be at least 1");
  if (config.classifier_docs_per_group == 0) throw Error("classifier_docs_per_group must be at least 1");
  if (config.retrieval_depth == 0) throw Error("retrieval_depth must be at least 1");
  if (config.cutoffs.max_cutoff() > config.retrieval_depth) {
    throw Error("cutoffs must not exceed the retrieval depth");
  }
  if (config.methods.empty()) throw Error("no methods selected");
  if (config.pool_sizes.empty()) throw Error("no pool sizes selected");
  for (auto m : config.methods) {
    if (is_pmc(m) && class_count != 2) {
      throw Error(std::string(to_string(m)) + " is binary-only but the corpus has " +
                  std::to_string(class_count) + " classes");
    }
  }
  if (config.kdey_bandwidth && !(*config.kdey_bandwidth > 0.0)) {
    throw Error("kdey bandwidth must be positive");
  }
  if (config.cv_folds < 2) throw Error("cv_folds must be at least 2");
}

// Pool handling --------------------------------------------------------------

struct PoolSplit {
  Corpus drawn;
  Corpus remaining;
};

namespace detail {

inline Corpus empty_like(const Corpus& c) {
  Corpus out;
  out.class_count = c.class_count;
  out.attribute_name = c.attribute_name;
  out.group_names = c.group_names;
  return out;
}

}  // namespace detail

/// Uniform draw of up to per_group documents from each group; the drawn
/// documents are removed from the remaining pool. Groups with fewer documents
/// are taken whole and reported through `short_groups`.
inline PoolSplit draw_per_group(const Corpus& pool, std::size_t per_group, std::uint64_t seed,
                                std::vector<std::size_t>* short_groups = nullptr) {
  std::vector<std::vector<std::size_t>> members(pool.class_count);
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const auto& g = pool.documents[i].group;
    if (!g) throw Error("unlabeled document in labelled pool: " + pool.documents[i].id);
    members[*g].push_back(i);
  }
  Rng rng(seed);
  std::vector<char> taken(pool.size(), 0);
  for (std::size_t g = 0; g < members.size(); ++g) {
    if (members[g].empty()) throw Error("group " + std::to_string(g) + " has no documents to draw");
    if (members[g].size() < per_group && short_groups) short_groups->push_back(g);
    rng.shuffle(members[g]);
    const std::size_t take = std::min(per_group, members[g].size());
    for (std::size_t k = 0; k < take; ++k) taken[members[g][k]] = 1;
  }
  PoolSplit split{detail::empty_like(pool), detail::empty_like(pool)};
  for (std::size_t i = 0; i < pool.size(); ++i) {
    (taken[i] ? split.drawn : split.remaining).documents.push_back(pool.documents[i]);
  }
  return split;
}

/// Prefixes of one seeded permutation, so successive sizes are nested.
/// Returned positions are sorted.
inline std::vector<std::size_t> undersample_positions(std::size_t pool_size, std::size_t size,
                                                      std::uint64_t seed) {
  if (size > pool_size) {
    throw Error("requested pool size " + std::to_string(size) + " exceeds the available " +
                std::to_string(pool_size) + " documents");
  }
  std::vector<std::size_t> perm(pool_size);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(seed);
  rng.shuffle(perm);
  perm.resize(size);
  std::sort(perm.begin(), perm.end());
  return perm;
}

inline Corpus undersample_pool(const Corpus& pool, std::size_t size, std::uint64_t seed) {
  Corpus out = detail::empty_like(pool);
  for (auto i : undersample_positions(pool.size(), size, seed)) out.documents.push_back(pool.documents[i]);
  return out;
}

/// Keeps at most cap documents per group, in rank order (the highest-scored
/// members of each group survive).
inline std::vector<std::size_t> keep_top_per_group(std::span<const std::size_t> ranked_groups,
                                                   std::size_t class_count, std::size_t cap) {
  std::vector<std::size_t> seen(class_count, 0);
  std::vector<std::size_t> kept;
  for (std::size_t r = 0; r < ranked_groups.size(); ++r) {
    if (seen[ranked_groups[r]]++ < cap) kept.push_back(r);
  }
  return kept;
}

// Timing ---------------------------------------------------------------------

struct TimingWorkItem {
  PosteriorMatrix correction;
  std::vector<std::size_t> correction_labels;
  PosteriorMatrix test_bag;
  std::size_t cutoff = 0;
};

struct TimingSummary {
  double learn_ms_mean = 0.0;
  double predict_ms_mean = 0.0;
  std::size_t queries = 0;
};

inline double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

/// Wall-clock means of correction learning and one prediction per work item,
/// after one untimed warm-up pass over the first item.
inline TimingSummary measure_timings(QuantifierVariant variant, std::span<const TimingWorkItem> workload,
                                     const FitOptions& options = {}) {
  TimingSummary out;
  if (workload.empty()) return out;
  auto run = [&](const TimingWorkItem& item, double* learn, double* predict) {
    FitOptions opts = options;
    if (opts.cutoffs.empty()) opts.cutoffs = {item.cutoff};
    auto t0 = std::chrono::steady_clock::now();
    const auto model = fit_correction(variant, item.correction, item.correction_labels, opts);
    if (learn) *learn += elapsed_ms(t0);
    t0 = std::chrono::steady_clock::now();
    const auto est = estimate(model, item.test_bag, item.cutoff);
    if (predict) *predict += elapsed_ms(t0);
    return est;
  };
  run(workload.front(), nullptr, nullptr);
  for (const auto& item : workload) run(item, &out.learn_ms_mean, &out.predict_ms_mean);
  out.queries = workload.size();
  out.learn_ms_mean /= static_cast<double>(workload.size());
  out.predict_ms_mean /= static_cast<double>(workload.size());
  return out;
}

// Report ---------------------------------------------------------------------

struct MethodQueryResult {
  Method method = Method::cc;
  DistributionsAtCutoff estimates;     // quantifiers only
  std::map<std::size_t, double> rae;   // quantifiers only
  std::optional<double> rkl;           // quantifiers only
  std::optional<double> rnd;           // binary runs
  double learn_ms = 0.0;
  double predict_ms = 0.0;  // mean per cutoff
};

struct QueryResult {
  std::string query_id;
  std::size_t test_retrieved = 0;
  std::size_t correction_retrieved = 0;
  std::size_t correction_kept = 0;
  DistributionsAtCutoff truth;
  std::map<std::size_t, std::size_t> bag_sizes;
  double rkl_true = 0.0;
  std::optional<double> rnd_true;
  std::vector<MethodQueryResult> methods;
};

struct Summary {
  double mean = 0.0;
  double stdev = 0.0;
  std::size_t count = 0;
};

inline Summary summarize(std::span<const double> values) {
  Summary s;
  s.count = values.size();
  if (values.empty()) return s;
  for (double v : values) s.mean += v;
  s.mean /= static_cast<double>(values.size());
  for (double v : values) s.stdev += (v - s.mean) * (v - s.mean);
  s.stdev = std::sqrt(s.stdev / static_cast<double>(values.size()));
  return s;
}

struct SignificanceEntry {
  std::string metric;
  Method a = Method::cc;
  Method b = Method::cc;
  std::optional<double> p_value;
  std::string note;
};

struct PoolResult {
  std::size_t pool_size = 0;
  std::vector<QueryResult> queries;  // sorted by query id
  std::map<Method, Summary> ae_rkl;
  std::map<Method, Summary> ae_rnd;
  std::map<Method, std::map<std::size_t, Summary>> rae;
  std::map<Method, TimingSummary> timings;
  std::vector<SignificanceEntry> significance;
};

struct FairnessReport {
  std::uint64_t seed = 0;
  std::size_t class_count = 0;
  std::vector<std::string> group_names;
  std::vector<Method> methods;
  std::vector<std::size_t> cutoffs;
  PrevalenceVector target;
  std::string target_source;
  ClassifierHyperParams hyperparams;
  double cv_accuracy = 0.0;
  std::size_t classifier_training_docs = 0;
  std::optional<double> kdey_bandwidth;
  std::vector<std::pair<double, double>> bandwidth_table;
  std::vector<PoolResult> pools;
  std::vector<std::string> log;
};

struct ValidationData {
  Corpus correction_pool;
  Corpus test;
  std::vector<Query> queries;
};

struct ProtocolInputs {
  const Corpus& labeled;
  const Corpus& test;
  const std::vector<Query>& queries;
  const ValidationData* validation = nullptr;
};

namespace detail {

inline std::vector<std::size_t> labels_at(const Corpus& c, std::span<const RankedEntry> entries) {
  std::vector<std::size_t> out;
  out.reserve(entries.size());
  for (const auto& e : entries) {
    const auto& g = c.documents[e.doc].group;
    if (!g) throw Error("document " + c.documents[e.doc].id + " has no group label");
    out.push_back(*g);
  }
  return out;
}

inline PosteriorMatrix rows_at(const PosteriorMatrix& all, std::span<const RankedEntry> entries) {
  std::vector<std::size_t> idx;
  idx.reserve(entries.size());
  for (const auto& e : entries) idx.push_back(e.doc);
  return all.select(idx);
}

/// Ranked correction sample after the per-group cap.
struct CorrectionSample {
  std::size_t retrieved = 0;
  PosteriorMatrix posteriors;
  std::vector<std::size_t> labels;
};

inline CorrectionSample correction_sample(const InvertedIndex& index, const Corpus& pool,
                                          const PosteriorMatrix& pool_posteriors,
                                          const Query& query, const ProtocolConfig& config) {
  const auto ranked = retrieve(index, query.terms, config.retrieval_depth, config.bm25, query.id);
  CorrectionSample s;
  s.retrieved = ranked.size();
  const auto labels = labels_at(pool, ranked.entries);
  const auto kept = keep_top_per_group(labels, pool.class_count, config.lq_cap_per_group);
  std::vector<std::size_t> rows;
  rows.reserve(kept.size());
  for (auto r : kept) {
    rows.push_back(ranked.entries[r].doc);
    s.labels.push_back(labels[r]);
  }
  s.posteriors = pool_posteriors.select(rows);
  if (s.posteriors.class_count() == 0) s.posteriors = PosteriorMatrix(pool.class_count, {});
  return s;
}

inline PrevalenceVector target_distribution(const Corpus& test, std::string* source) {
  std::vector<std::size_t> relevant, all;
  bool has_flags = false;
  for (const auto& d : test.documents) {
    if (!d.group) continue;
    all.push_back(*d.group);
    if (d.relevant) {
      has_flags = true;
      if (*d.relevant) relevant.push_back(*d.group);
    }
  }
  if (has_flags && !relevant.empty()) {
    *source = "relevant_documents";
    return prevalence_of(relevant, test.class_count);
  }
  if (all.empty()) throw Error("test pool has no labelled documents to form the target distribution");
  *source = "all_documents";
  return prevalence_of(all, test.class_count);
}

}  // namespace detail

/// The end-to-end experimental protocol: classifier draw and training, a sweep
/// over correction-pool sizes, and per query the same-query retrieval of test
/// and correction rankings, per-method correction learning and per-cutoff
/// evaluation.
inline FairnessReport run_protocol(const ProtocolConfig& config, const ProtocolInputs& in) {
  const Corpus& L = in.labeled;
  const Corpus& U = in.test;
  if (L.class_count != U.class_count) throw Error("labelled and test pools have different class counts");
  const std::size_t n = L.class_count;
  validate_protocol_config(config, n);
  if (U.empty()) throw Error("test pool is empty");

  FairnessReport report;
  report.seed = config.seed;
  report.class_count = n;
  report.group_names = L.group_names;
  report.methods = config.methods;
  report.cutoffs = config.cutoffs.cutoffs();
  auto log = [&](std::string line) { report.log.push_back(std::move(line)); };

  // Classifier: balanced draw, removed from the correction side.
  std::vector<std::size_t> short_groups;
  auto split = draw_per_group(L, config.classifier_docs_per_group, derive_seed(config.seed, 1), &short_groups);
  for (auto g : short_groups) {
    log("classifier draw: group " + std::to_string(g) + " has fewer than " +
        std::to_string(config.classifier_docs_per_group) + " documents; took all of them");
  }
  const Corpus& l_phi = split.drawn;
  const Corpus& l_rest = split.remaining;
  report.classifier_training_docs = l_phi.size();

  CvOptions cv;
  cv.folds = config.cv_folds;
  cv.seed = derive_seed(config.seed, 3);
  ClassifierHyperParams hp = config.fixed_hyperparams;
  if (config.model_selection) {
    const auto sel = select_model(l_phi, config.hyperparameter_grid, cv);
    hp = sel.best;
    report.cv_accuracy = sel.best_accuracy;
    for (const auto& [point, acc] : sel.table) {
      char buf[128];
      std::snprintf(buf, sizeof buf, "model selection: C=%g class_weighting=%s cv_accuracy=%.6f",
                    point.C, to_string(point.class_weighting), acc);
      log(buf);
    }
  }
  report.hyperparams = hp;
  const auto model = train(l_phi, hp);

  std::vector<std::size_t> phi_labels;
  for (const auto& d : l_phi.documents) phi_labels.push_back(*d.group);
  const auto oof = cross_validated_posteriors(l_phi, hp, cv);
  if (!config.model_selection) {
    std::size_t correct = 0;
    const auto pred = crisp_labels(oof);
    for (std::size_t i = 0; i < pred.size(); ++i) correct += pred[i] == phi_labels[i];
    report.cv_accuracy = static_cast<double>(correct) / static_cast<double>(pred.size());
  }
  const auto global = make_global_correction(oof, phi_labels);
  std::optional<PmcRates> base_rates;
  if (n == 2) base_rates = estimate_pmc_rates(phi_labels, crisp_labels(oof), RateSource::classifier_training_set);

  const auto needs_kdey = std::find(config.methods.begin(), config.methods.end(), Method::kdey) != config.methods.end();
  double bandwidth = config.kdey_bandwidth.value_or(0.0);
  if (needs_kdey && !config.kdey_bandwidth) {
    if (!in.validation) throw Error("kdey bandwidth selection needs validation data or a fixed bandwidth");
    const auto& val = *in.validation;
    const auto val_u_index = build_index(val.test);
    const auto val_l_index = build_index(val.correction_pool);
    const auto val_u_post = posteriors(model, val.test.documents);
    const auto val_l_post = posteriors(model, val.correction_pool.documents);
    std::vector<ValidationQuery> vq;
    for (const auto& q : val.queries) {
      const auto u_q = retrieve(val_u_index, q.terms, config.retrieval_depth, config.bm25, q.id);
      if (u_q.empty()) continue;
      const auto corr = detail::correction_sample(val_l_index, val.correction_pool, val_l_post, q, config);
      if (corr.labels.empty()) continue;
      const std::size_t k = std::min(config.bandwidth_selection_cutoff, u_q.size());
      std::span<const RankedEntry> top(u_q.entries.data(), k);
      vq.push_back({corr.posteriors, corr.labels, detail::rows_at(val_u_post, top),
                    prevalence_of(detail::labels_at(val.test, top), n)});
    }
    const auto sel = select_kdey_bandwidth(vq, config.bandwidth_grid, &global, config.min_class_support);
    bandwidth = sel.best;
    report.bandwidth_table = sel.table;
  }
  if (needs_kdey) report.kdey_bandwidth = bandwidth;

  report.target = detail::target_distribution(U, &report.target_source);
  const auto u_index = build_index(U);
  const auto u_post = posteriors(model, U.documents);
  const auto rest_post = posteriors(model, l_rest.documents);

  for (auto requested : config.pool_sizes) {
    const std::size_t size = requested == kFullPool ? l_rest.size() : requested;
    const auto positions = undersample_positions(l_rest.size(), size, derive_seed(config.seed, 2));
    Corpus pool = detail::empty_like(l_rest);
    pool.documents.reserve(positions.size());
    for (auto p : positions) pool.documents.push_back(l_rest.documents[p]);
    const auto pool_post = rest_post.select(positions);
    const auto pool_index = build_index(pool);

    PoolResult pr;
    pr.pool_size = size;
    const std::string pool_tag = "pool " + std::to_string(size) + ": ";

    std::vector<Query> ordered = in.queries;
    std::sort(ordered.begin(), ordered.end(), [](const Query& a, const Query& b) { return a.id < b.id; });
    for (const auto& query : ordered) {
      const auto u_q = retrieve(u_index, query.terms, config.retrieval_depth, config.bm25, query.id);
      if (u_q.empty()) {
        log(pool_tag + "query " + query.id + ": no test documents retrieved; skipped");
        continue;
      }
      const auto corr = detail::correction_sample(pool_index, pool, pool_post, query, config);
      QueryResult qr;
      qr.query_id = query.id;
      qr.test_retrieved = u_q.size();
      qr.correction_retrieved = corr.retrieved;
      qr.correction_kept = corr.labels.size();

      const auto u_labels = detail::labels_at(U, u_q.entries);
      const auto u_q_post = detail::rows_at(u_post, u_q.entries);
      std::map<std::size_t, PosteriorMatrix> bags;
      for (auto k : config.cutoffs.cutoffs()) {
        const std::size_t m = std::min(k, u_q.size());
        qr.bag_sizes[k] = m;
        qr.truth.emplace(k, prevalence_of(std::span<const std::size_t>(u_labels.data(), m), n));
        bags.emplace(k, u_q_post.head(m));
      }
      qr.rkl_true = rkl(qr.truth, report.target, config.cutoffs);
      if (n == 2) qr.rnd_true = rnd(qr.truth, report.target, config.cutoffs);

      std::set<std::size_t> absent;
      {
        std::vector<char> present(n, 0);
        for (auto y : corr.labels) present[y] = 1;
        for (std::size_t j = 0; j < n; ++j) {
          if (!present[j]) absent.insert(j);
        }
      }
      bool absent_logged = false;

      for (auto method : config.methods) {
        MethodQueryResult mr;
        mr.method = method;
        if (auto variant = quantifier_for(method)) {
          FitOptions opts;
          opts.bandwidth = bandwidth;
          opts.cutoffs = config.cutoffs.cutoffs();
          opts.fallback = &global;
          opts.min_class_support = config.min_class_support;
          auto t0 = std::chrono::steady_clock::now();
          std::optional<CorrectionModel> fitted;
          if (*variant == QuantifierVariant::naive && corr.labels.empty()) {
            log(pool_tag + "query " + query.id + ": empty correction sample; naive reports uniform");
          } else {
            fitted = fit_correction(*variant, corr.posteriors, corr.labels, opts);
          }
          mr.learn_ms = elapsed_ms(t0);
          if (fitted && !fitted->fallback_classes.empty() && !absent_logged) {
            for (auto j : fitted->fallback_classes) {
              log(pool_tag + "query " + query.id + ": class " + std::to_string(j) +
                  " has fewer than " + std::to_string(config.min_class_support) +
                  " correction items; using global statistics");
            }
            absent_logged = true;
          }
          // KDE densities depend only on the bag, so the full ranking is
          // evaluated once and sliced per cutoff.
          std::vector<double> densities;
          double predict_total = 0.0;
          if (*variant == QuantifierVariant::kdey) {
            t0 = std::chrono::steady_clock::now();
            densities = kdey_class_densities(*fitted, bags.at(config.cutoffs.max_cutoff()));
            predict_total += elapsed_ms(t0);
          }
          for (auto k : config.cutoffs.cutoffs()) {
            t0 = std::chrono::steady_clock::now();
            PrevalenceVector est;
            if (!fitted) {
              est = PrevalenceVector::uniform(n);
            } else if (*variant == QuantifierVariant::kdey) {
              est = kdey_solve(std::span<const double>(densities.data(), qr.bag_sizes[k] * n), n).point;
            } else if (*variant == QuantifierVariant::acc && n == 2) {
              try {
                est = acc_estimate(*fitted, crisp_labels(bags.at(k)));
              } catch (const Error&) {
                log(pool_tag + "query " + query.id + ": uninformative ACC rates; solved least squares instead");
                est = solve_least_squares_simplex(fitted->rate_matrix,
                                                  classify_and_count(crisp_labels(bags.at(k)), n).values())
                          .point;
              }
            } else {
              est = estimate(*fitted, bags.at(k), k);
            }
            predict_total += elapsed_ms(t0);
            mr.rae[k] = rae(qr.truth.at(k), est, qr.bag_sizes[k]);
            mr.estimates.emplace(k, std::move(est));
          }
          mr.predict_ms = predict_total / static_cast<double>(config.cutoffs.cutoffs().size());
          mr.rkl = rkl(mr.estimates, report.target, config.cutoffs);
          if (n == 2) mr.rnd = rnd(mr.estimates, report.target, config.cutoffs);
        } else {
          // Post-metric corrections of the proxy rND from crisp predictions.
          auto t0 = std::chrono::steady_clock::now();
          PmcRates rates = *base_rates;
          if (method == Method::pmc_b_plus || method == Method::pmc_d_plus) {
            if (absent.empty()) {
              rates = estimate_pmc_rates(corr.labels, crisp_labels(corr.posteriors), RateSource::query_biased_lq);
            } else {
              log(pool_tag + "query " + query.id + ": " + to_string(method) +
                  " correction sample lacks a class; using classifier-set rates");
            }
          }
          mr.learn_ms = elapsed_ms(t0);
          t0 = std::chrono::steady_clock::now();
          DistributionsAtCutoff proxy;
          for (auto k : config.cutoffs.cutoffs()) {
            proxy.emplace(k, classify_and_count(crisp_labels(bags.at(k)), n));
          }
          const double proxy_rnd = rnd(proxy, report.target, config.cutoffs);
          try {
            mr.rnd = (method == Method::pmc_b || method == Method::pmc_b_plus) ? pmc_b_correct(proxy_rnd, rates)
                                                                               : pmc_d_correct(proxy_rnd, rates);
          } catch (const Error&) {
            log(pool_tag + "query " + query.id + ": " + to_string(method) +
                " degenerate denominator; reporting the proxy score");
            mr.rnd = proxy_rnd;
          }
          mr.predict_ms = elapsed_ms(t0);
        }
        qr.methods.push_back(std::move(mr));
      }
      pr.queries.push_back(std::move(qr));
    }

    // Aggregates.
    std::map<Method, std::vector<double>> rkl_err, rnd_err, learn, predict;
    std::map<Method, std::map<std::size_t, std::vector<double>>> rae_vals;
    for (const auto& qr : pr.queries) {
      for (const auto& mr : qr.methods) {
        if (mr.rkl) rkl_err[mr.method].push_back(std::abs(qr.rkl_true - *mr.rkl));
        if (mr.rnd && qr.rnd_true) rnd_err[mr.method].push_back(std::abs(*qr.rnd_true - *mr.rnd));
        for (const auto& [k, v] : mr.rae) rae_vals[mr.method][k].push_back(v);
        learn[mr.method].push_back(mr.learn_ms);
        predict[mr.method].push_back(mr.predict_ms);
      }
    }
    for (const auto& [m, v] : rkl_err) pr.ae_rkl[m] = summarize(v);
    for (const auto& [m, v] : rnd_err) pr.ae_rnd[m] = summarize(v);
    for (const auto& [m, per_k] : rae_vals) {
      for (const auto& [k, v] : per_k) pr.rae[m][k] = summarize(v);
    }
    for (const auto& [m, v] : learn) {
      pr.timings[m] = {summarize(v).mean, summarize(predict[m]).mean, v.size()};
    }
    auto add_tests = [&](const std::string& metric, const std::map<Method, std::vector<double>>& errs) {
      for (auto a = errs.begin(); a != errs.end(); ++a) {
        for (auto b = std::next(a); b != errs.end(); ++b) {
          SignificanceEntry e{metric, a->first, b->first, std::nullopt, ""};
          try {
            e.p_value = wilcoxon_signed_rank(a->second, b->second).p_value;
          } catch (const Error& err) {
            e.note = err.what();
          }
          pr.significance.push_back(std::move(e));
        }
      }
    };
    add_tests("rkl", rkl_err);
    if (n == 2) add_tests("rnd", rnd_err);
    report.pools.push_back(std::move(pr));
  }
  return report;
}

}  // namespace qfe

#endif  // QFE_PROTOCOL_HPP
