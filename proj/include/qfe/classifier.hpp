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

#ifndef QFE_CLASSIFIER_HPP
#define QFE_CLASSIFIER_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qfe/core.hpp"
#include "qfe/matrix.hpp"
#include "qfe/random.hpp"

namespace qfe {

enum class ClassWeighting { none, balanced };

inline const char* to_string(ClassWeighting w) {
  return w == ClassWeighting::balanced ? "balanced" : "none";
}

inline ClassWeighting parse_class_weighting(const std::string& s) {
  if (s == "balanced") return ClassWeighting::balanced;
  if (s == "none") return ClassWeighting::none;
  throw Error("unknown class weighting '" + s + "' (expected balanced or none)");
}

struct ClassifierHyperParams {
  double C = 1.0;
  ClassWeighting class_weighting = ClassWeighting::none;

  friend bool operator==(const ClassifierHyperParams&, const ClassifierHyperParams&) = default;
};

/// C in {10^i : -4 <= i <= 4} crossed with both weighting modes.
inline std::vector<ClassifierHyperParams> default_hyperparameter_grid() {
  std::vector<ClassifierHyperParams> grid;
  for (int i = -4; i <= 4; ++i) {
    for (auto w : {ClassWeighting::none, ClassWeighting::balanced}) {
      grid.push_back({std::pow(10.0, i), w});
    }
  }
  return grid;
}

/// Terms kept for featurization together with their smoothed idf.
struct Vocabulary {
  std::vector<std::string> terms;
  std::unordered_map<std::string, std::uint32_t> index;
  std::vector<double> idf;

  std::size_t size() const { return terms.size(); }

  static Vocabulary from_terms(std::vector<std::string> terms, std::vector<double> idf) {
    if (terms.size() != idf.size()) throw Error("vocabulary and idf sizes differ");
    Vocabulary v;
    v.terms = std::move(terms);
    v.idf = std::move(idf);
    v.index.reserve(v.terms.size());
    for (std::size_t i = 0; i < v.terms.size(); ++i) {
      if (!v.index.emplace(v.terms[i], static_cast<std::uint32_t>(i)).second) {
        throw Error("duplicate vocabulary term: " + v.terms[i]);
      }
    }
    return v;
  }
};

/// Vocabulary of terms occurring at least min_count times in total.
inline Vocabulary fit_vocabulary(std::span<const Document> docs, std::size_t min_count = 2) {
  std::unordered_map<std::string, std::pair<std::size_t, std::size_t>> stats;  // total, df
  std::vector<std::string> seen;
  for (const auto& doc : docs) {
    seen.assign(doc.tokens.begin(), doc.tokens.end());
    std::sort(seen.begin(), seen.end());
    for (std::size_t i = 0; i < seen.size(); ++i) {
      auto& s = stats[seen[i]];
      ++s.first;
      if (i == 0 || seen[i] != seen[i - 1]) ++s.second;
    }
  }
  std::vector<std::string> terms;
  for (const auto& [term, s] : stats) {
    if (s.first >= min_count) terms.push_back(term);
  }
  std::sort(terms.begin(), terms.end());
  const double n = static_cast<double>(docs.size());
  std::vector<double> idf;
  idf.reserve(terms.size());
  for (const auto& t : terms) {
    const double df = static_cast<double>(stats[t].second);
    idf.push_back(std::log((1.0 + n) / (1.0 + df)) + 1.0);
  }
  return Vocabulary::from_terms(std::move(terms), std::move(idf));
}

struct FeatureEntry {
  std::uint32_t index = 0;
  double weight = 0.0;
};

/// Sparse, index-sorted, L2-normalized tf-idf vector.
struct FeatureVector {
  std::vector<FeatureEntry> entries;

  bool empty() const { return entries.empty(); }
};

inline FeatureVector featurize(std::span<const std::string> tokens, const Vocabulary& vocab) {
  std::map<std::uint32_t, double> tf;
  for (const auto& t : tokens) {
    auto it = vocab.index.find(t);
    if (it != vocab.index.end()) tf[it->second] += 1.0;
  }
  FeatureVector fv;
  fv.entries.reserve(tf.size());
  double norm = 0.0;
  for (const auto& [idx, count] : tf) {
    const double w = count * vocab.idf[idx];
    fv.entries.push_back({idx, w});
    norm += w * w;
  }
  if (norm > 0.0) {
    norm = std::sqrt(norm);
    for (auto& e : fv.entries) e.weight /= norm;
  }
  return fv;
}

/// Featurized, labelled examples; the input to the optimizer.
struct TrainingSet {
  std::vector<FeatureVector> features;
  std::vector<std::size_t> labels;
  std::size_t class_count = 0;
  std::size_t feature_count = 0;

  std::size_t size() const { return labels.size(); }
};

/// Multinomial logistic regression. Weights are stored feature-major:
/// weights[j * n + c] for feature j < d, and the bias row at j = d.
struct LogisticModel {
  std::size_t class_count = 0;
  Vocabulary vocabulary;
  std::vector<double> weights;
  ClassifierHyperParams hyperparams;
  std::string fingerprint;
  std::vector<std::string> group_names;
  std::string attribute_name;
  std::size_t iterations = 0;

  std::size_t feature_count() const { return vocabulary.size(); }
  double weight(std::size_t cls, std::size_t feature) const {
    return weights[feature * class_count + cls];
  }
  double bias(std::size_t cls) const { return weights[feature_count() * class_count + cls]; }
};

struct OptimizerOptions {
  double gradient_tolerance = 1e-5;
  std::size_t max_iterations = 1000;
};

namespace detail {

inline std::vector<double> example_weights(const TrainingSet& data, ClassWeighting weighting) {
  std::vector<double> w(data.size(), 1.0);
  if (weighting == ClassWeighting::none) return w;
  std::vector<double> counts(data.class_count, 0.0);
  for (auto y : data.labels) counts[y] += 1.0;
  const double m = static_cast<double>(data.size());
  const double n = static_cast<double>(data.class_count);
  for (std::size_t i = 0; i < data.size(); ++i) w[i] = m / (n * counts[data.labels[i]]);
  return w;
}

inline void softmax_inplace(std::span<double> z) {
  double mx = z[0];
  for (double v : z) mx = std::max(mx, v);
  double sum = 0.0;
  for (double& v : z) {
    v = std::exp(v - mx);
    sum += v;
  }
  for (double& v : z) v /= sum;
}

inline void scores(std::span<const double> weights, const FeatureVector& x,
                   std::size_t n, std::size_t d, std::span<double> out) {
  for (std::size_t c = 0; c < n; ++c) out[c] = weights[d * n + c];
  for (const auto& e : x.entries) {
    const double* row = &weights[e.index * n];
    for (std::size_t c = 0; c < n; ++c) out[c] += row[c] * e.weight;
  }
}

}  // namespace detail

/// Regularized, example-weighted mean cross-entropy; fills gradient when
/// non-null. The bias row is not penalized.
inline double logistic_objective(const TrainingSet& data, std::span<const double> weights,
                                 const ClassifierHyperParams& hp,
                                 std::span<const double> example_weights,
                                 std::vector<double>* gradient) {
  const std::size_t n = data.class_count;
  const std::size_t d = data.feature_count;
  const double m = static_cast<double>(data.size());
  if (gradient) gradient->assign(weights.size(), 0.0);
  std::vector<double> z(n);
  double loss = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    detail::scores(weights, data.features[i], n, d, z);
    double mx = z[0];
    for (double v : z) mx = std::max(mx, v);
    double sum = 0.0;
    for (double v : z) sum += std::exp(v - mx);
    const double log_norm = mx + std::log(sum);
    const double s = example_weights[i];
    loss += s * (log_norm - z[data.labels[i]]);
    if (!gradient) continue;
    for (std::size_t c = 0; c < n; ++c) {
      z[c] = s * (std::exp(z[c] - log_norm) - (c == data.labels[i] ? 1.0 : 0.0));
    }
    auto& g = *gradient;
    for (const auto& e : data.features[i].entries) {
      double* row = &g[e.index * n];
      for (std::size_t c = 0; c < n; ++c) row[c] += z[c] * e.weight;
    }
    for (std::size_t c = 0; c < n; ++c) g[d * n + c] += z[c];
  }
  loss /= m;
  const double lambda = 1.0 / (hp.C * m);
  double penalty = 0.0;
  for (std::size_t k = 0; k < d * n; ++k) penalty += weights[k] * weights[k];
  loss += 0.5 * lambda * penalty;
  if (gradient) {
    auto& g = *gradient;
    for (double& v : g) v /= m;
    for (std::size_t k = 0; k < d * n; ++k) g[k] += lambda * weights[k];
  }
  return loss;
}

/// Full-batch gradient descent with Armijo backtracking. The trial step is the
/// Barzilai-Borwein estimate from the previous move.
inline std::vector<double> fit_logistic_weights(const TrainingSet& data,
                                                const ClassifierHyperParams& hp,
                                                std::vector<double> initial = {},
                                                const OptimizerOptions& options = {},
                                                std::size_t* iterations_used = nullptr) {
  const std::size_t size = (data.feature_count + 1) * data.class_count;
  std::vector<double> w = initial.size() == size ? std::move(initial) : std::vector<double>(size, 0.0);
  const auto sample_weights = detail::example_weights(data, hp.class_weighting);

  std::vector<double> grad;
  double f = logistic_objective(data, w, hp, sample_weights, &grad);
  std::vector<double> prev_w, prev_grad, trial(size), trial_grad;
  double step = 1.0;
  std::size_t it = 0;
  for (; it < options.max_iterations; ++it) {
    double gmax = 0.0, gnorm2 = 0.0;
    for (double g : grad) {
      gmax = std::max(gmax, std::abs(g));
      gnorm2 += g * g;
    }
    if (gmax < options.gradient_tolerance) break;

    if (!prev_w.empty()) {
      double ss = 0.0, sy = 0.0;
      for (std::size_t k = 0; k < size; ++k) {
        const double s = w[k] - prev_w[k];
        const double y = grad[k] - prev_grad[k];
        ss += s * s;
        sy += s * y;
      }
      step = sy > 0.0 ? std::clamp(ss / sy, 1e-10, 1e10) : 1.0;
    }

    double f_trial = f;
    bool accepted = false;
    for (int halving = 0; halving < 60; ++halving) {
      for (std::size_t k = 0; k < size; ++k) trial[k] = w[k] - step * grad[k];
      f_trial = logistic_objective(data, trial, hp, sample_weights, &trial_grad);
      if (f_trial <= f - 1e-4 * step * gnorm2) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    prev_w = std::move(w);
    prev_grad = std::move(grad);
    w = trial;
    grad = trial_grad;
    f = f_trial;
  }
  if (iterations_used) *iterations_used = it;
  return w;
}

inline std::string training_fingerprint(std::span<const Document> docs) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ULL;
    }
    h ^= 0xff;
    h *= 1099511628211ULL;
  };
  for (const auto& doc : docs) {
    mix(doc.id);
    mix(doc.group ? std::to_string(*doc.group) : "-");
    for (const auto& t : doc.tokens) mix(t);
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline TrainingSet make_training_set(std::span<const Document> docs, const Vocabulary& vocab,
                                     std::size_t class_count) {
  TrainingSet data;
  data.class_count = class_count;
  data.feature_count = vocab.size();
  data.features.reserve(docs.size());
  data.labels.reserve(docs.size());
  for (const auto& doc : docs) {
    if (!doc.group) throw Error("unlabeled document in classifier training set: " + doc.id);
    data.features.push_back(featurize(doc.tokens, vocab));
    data.labels.push_back(*doc.group);
  }
  return data;
}

inline void require_every_class(std::span<const Document> docs, std::size_t class_count,
                                std::size_t minimum, const char* message) {
  std::vector<std::size_t> counts(class_count, 0);
  for (const auto& doc : docs) {
    if (!doc.group) throw Error("unlabeled document in classifier training set: " + doc.id);
    if (*doc.group >= class_count) throw Error("group index out of range");
    ++counts[*doc.group];
  }
  for (auto c : counts) {
    if (c < minimum) throw Error(message);
  }
}

inline LogisticModel train(const Corpus& corpus, const ClassifierHyperParams& hp,
                           const OptimizerOptions& options = {}) {
  if (hp.C <= 0.0) throw Error("regularization strength C must be positive");
  require_every_class(corpus.documents, corpus.class_count, 1, "empty class in training set");
  LogisticModel model;
  model.class_count = corpus.class_count;
  model.vocabulary = fit_vocabulary(corpus.documents);
  model.hyperparams = hp;
  model.group_names = corpus.group_names;
  model.attribute_name = corpus.attribute_name;
  model.fingerprint = training_fingerprint(corpus.documents);
  const auto data = make_training_set(corpus.documents, model.vocabulary, corpus.class_count);
  model.weights = fit_logistic_weights(data, hp, {}, options, &model.iterations);
  return model;
}

inline std::vector<double> predict_proba(const LogisticModel& model, const FeatureVector& x) {
  std::vector<double> z(model.class_count);
  detail::scores(model.weights, x, model.class_count, model.feature_count(), z);
  detail::softmax_inplace(z);
  return z;
}

inline PosteriorMatrix posteriors(const LogisticModel& model, std::span<const Document> docs) {
  std::vector<double> data;
  data.reserve(docs.size() * model.class_count);
  for (const auto& doc : docs) {
    const auto p = predict_proba(model, featurize(doc.tokens, model.vocabulary));
    data.insert(data.end(), p.begin(), p.end());
  }
  return PosteriorMatrix(model.class_count, std::move(data));
}

inline std::vector<std::size_t> crisp_predict(const PosteriorMatrix& post) {
  return crisp_labels(post);
}

inline std::vector<std::size_t> crisp_predict(const LogisticModel& model,
                                              std::span<const Document> docs) {
  return crisp_predict(posteriors(model, docs));
}

/// Fold id per example; each class is shuffled and dealt round-robin.
inline std::vector<std::size_t> stratified_folds(std::span<const std::size_t> labels,
                                                 std::size_t class_count, std::size_t folds,
                                                 std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::size_t> assignment(labels.size(), 0);
  for (std::size_t c = 0; c < class_count; ++c) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == c) members.push_back(i);
    }
    rng.shuffle(members);
    for (std::size_t k = 0; k < members.size(); ++k) assignment[members[k]] = k % folds;
  }
  return assignment;
}

struct CvOptions {
  std::size_t folds = 5;
  std::uint64_t seed = 0;
  OptimizerOptions optimizer{};
};

namespace detail {

struct Fold {
  TrainingSet train;
  TrainingSet held_out;
  std::vector<std::size_t> held_out_positions;
};

inline std::vector<Fold> build_folds(const Corpus& corpus, const CvOptions& options) {
  require_every_class(corpus.documents, corpus.class_count, options.folds,
                      "every class needs at least as many examples as folds");
  std::vector<std::size_t> labels;
  labels.reserve(corpus.size());
  for (const auto& d : corpus.documents) labels.push_back(*d.group);
  const auto assignment = stratified_folds(labels, corpus.class_count, options.folds, options.seed);
  std::vector<Fold> folds(options.folds);
  for (std::size_t f = 0; f < options.folds; ++f) {
    std::vector<Document> train_docs, test_docs;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      if (assignment[i] == f) {
        test_docs.push_back(corpus.documents[i]);
        folds[f].held_out_positions.push_back(i);
      } else {
        train_docs.push_back(corpus.documents[i]);
      }
    }
    const auto vocab = fit_vocabulary(train_docs);
    folds[f].train = make_training_set(train_docs, vocab, corpus.class_count);
    folds[f].held_out = make_training_set(test_docs, vocab, corpus.class_count);
  }
  return folds;
}

inline double fold_accuracy(const Fold& fold, std::span<const double> weights) {
  const std::size_t n = fold.train.class_count;
  std::vector<double> z(n);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < fold.held_out.size(); ++i) {
    detail::scores(weights, fold.held_out.features[i], n, fold.train.feature_count, z);
    if (argmax(z) == fold.held_out.labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(fold.held_out.size());
}

}  // namespace detail

struct ModelSelectionResult {
  ClassifierHyperParams best;
  double best_accuracy = 0.0;
  std::vector<std::pair<ClassifierHyperParams, double>> table;  // grid point, mean CV accuracy
};

/// Grid search by mean k-fold accuracy. Ties go to the smaller C, then to
/// no class weighting.
inline ModelSelectionResult select_model(const Corpus& corpus,
                                         std::vector<ClassifierHyperParams> grid,
                                         const CvOptions& options = {}) {
  if (grid.empty()) throw Error("empty hyperparameter grid");
  for (const auto& hp : grid) {
    if (hp.C <= 0.0) throw Error("regularization strength C must be positive");
  }
  std::sort(grid.begin(), grid.end(), [](const auto& a, const auto& b) {
    if (a.C != b.C) return a.C < b.C;
    return a.class_weighting == ClassWeighting::none && b.class_weighting != ClassWeighting::none;
  });
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  const auto folds = detail::build_folds(corpus, options);
  ModelSelectionResult result;
  std::vector<double> mean_accuracy(grid.size(), 0.0);
  // Warm start along increasing C within each weighting mode.
  std::map<std::pair<std::size_t, ClassWeighting>, std::vector<double>> warm;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    double acc = 0.0;
    for (std::size_t f = 0; f < folds.size(); ++f) {
      auto& start = warm[{f, grid[g].class_weighting}];
      start = fit_logistic_weights(folds[f].train, grid[g], start, options.optimizer);
      acc += detail::fold_accuracy(folds[f], start);
    }
    mean_accuracy[g] = acc / static_cast<double>(folds.size());
    result.table.emplace_back(grid[g], mean_accuracy[g]);
  }
  std::size_t best = 0;
  for (std::size_t g = 1; g < grid.size(); ++g) {
    if (mean_accuracy[g] > mean_accuracy[best] + 1e-12) best = g;
  }
  result.best = grid[best];
  result.best_accuracy = mean_accuracy[best];
  return result;
}

/// Out-of-fold posteriors, aligned with corpus order.
inline PosteriorMatrix cross_validated_posteriors(const Corpus& corpus,
                                                  const ClassifierHyperParams& hp,
                                                  const CvOptions& options = {}) {
  const auto folds = detail::build_folds(corpus, options);
  const std::size_t n = corpus.class_count;
  std::vector<double> data(corpus.size() * n, 0.0);
  for (const auto& fold : folds) {
    const auto w = fit_logistic_weights(fold.train, hp, {}, options.optimizer);
    std::vector<double> z(n);
    for (std::size_t i = 0; i < fold.held_out.size(); ++i) {
      detail::scores(w, fold.held_out.features[i], n, fold.train.feature_count, z);
      detail::softmax_inplace(z);
      std::copy(z.begin(), z.end(), data.begin() + static_cast<std::ptrdiff_t>(fold.held_out_positions[i] * n));
    }
  }
  return PosteriorMatrix(n, std::move(data));
}

/// M(i, j) = P(predicted i | true j) from crisp predictions; columns sum to 1.
inline Matrix rate_matrix(std::span<const std::size_t> predicted,
                          std::span<const std::size_t> truth, std::size_t class_count) {
  if (predicted.size() != truth.size()) throw Error("prediction/label length mismatch");
  Matrix m(class_count, class_count);
  std::vector<double> counts(class_count, 0.0);
  for (std::size_t k = 0; k < truth.size(); ++k) {
    m(predicted[k], truth[k]) += 1.0;
    counts[truth[k]] += 1.0;
  }
  for (std::size_t j = 0; j < class_count; ++j) {
    if (counts[j] == 0.0) throw Error("class unseen when estimating classification rates");
    for (std::size_t i = 0; i < class_count; ++i) m(i, j) /= counts[j];
  }
  return m;
}

inline Matrix cv_rate_matrix(const Corpus& corpus, const ClassifierHyperParams& hp,
                             const CvOptions& options = {}) {
  const auto post = cross_validated_posteriors(corpus, hp, options);
  std::vector<std::size_t> truth;
  truth.reserve(corpus.size());
  for (const auto& d : corpus.documents) truth.push_back(*d.group);
  return rate_matrix(crisp_predict(post), truth, corpus.class_count);
}

// Persistence --------------------------------------------------------------

inline nlohmann::json model_to_json(const LogisticModel& model) {
  nlohmann::json j;
  j["format"] = "qfe-logistic-model";
  j["version"] = 1;
  j["class_count"] = model.class_count;
  j["attribute"] = model.attribute_name;
  j["group_names"] = model.group_names;
  j["hyperparameters"] = {{"C", model.hyperparams.C},
                          {"class_weighting", to_string(model.hyperparams.class_weighting)}};
  j["training_fingerprint"] = model.fingerprint;
  j["iterations"] = model.iterations;
  j["vocabulary"] = model.vocabulary.terms;
  j["idf"] = model.vocabulary.idf;
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t c = 0; c < model.class_count; ++c) {
    std::vector<double> row(model.feature_count() + 1);
    for (std::size_t f = 0; f <= model.feature_count(); ++f) row[f] = model.weights[f * model.class_count + c];
    rows.push_back(std::move(row));
  }
  j["weights"] = std::move(rows);
  return j;
}

inline LogisticModel model_from_json(const nlohmann::json& j) {
  try {
    if (j.at("format") != "qfe-logistic-model") throw Error("not a qfe model file");
    LogisticModel model;
    model.class_count = j.at("class_count").get<std::size_t>();
    model.attribute_name = j.value("attribute", "");
    model.group_names = j.at("group_names").get<std::vector<std::string>>();
    model.hyperparams.C = j.at("hyperparameters").at("C").get<double>();
    model.hyperparams.class_weighting =
        parse_class_weighting(j.at("hyperparameters").at("class_weighting").get<std::string>());
    model.fingerprint = j.at("training_fingerprint").get<std::string>();
    model.iterations = j.value("iterations", std::size_t{0});
    model.vocabulary = Vocabulary::from_terms(j.at("vocabulary").get<std::vector<std::string>>(),
                                              j.at("idf").get<std::vector<double>>());
    const auto rows = j.at("weights").get<std::vector<std::vector<double>>>();
    const std::size_t d = model.vocabulary.size();
    if (rows.size() != model.class_count) throw Error("weight matrix has wrong row count");
    model.weights.assign((d + 1) * model.class_count, 0.0);
    for (std::size_t c = 0; c < rows.size(); ++c) {
      if (rows[c].size() != d + 1) throw Error("weight matrix has wrong column count");
      for (std::size_t f = 0; f <= d; ++f) model.weights[f * model.class_count + c] = rows[c][f];
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed model file: ") + e.what());
  }
}

inline void save_model(const LogisticModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write model file " + path);
  out << model_to_json(model).dump(1) << '\n';
}

inline LogisticModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open model file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error("malformed model file " + path + ": " + e.what());
  }
  return model_from_json(j);
}

}  // namespace qfe

#endif  // QFE_CLASSIFIER_HPP
