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

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include "qfe/classifier.hpp"
#include "qfe/random.hpp"
#include "test_util.hpp"

namespace qfe {
namespace {

using testing::corpus_of;
using testing::doc;

Corpus separable_corpus(std::size_t per_class) {
  std::vector<Document> docs;
  for (std::size_t i = 0; i < per_class; ++i) {
    docs.push_back(doc("a" + std::to_string(i), "apple apricot avocado apple", 0));
    docs.push_back(doc("b" + std::to_string(i), "banana blueberry banana blackberry", 1));
  }
  return corpus_of(std::move(docs), 2);
}

TEST(Featurize, OutOfVocabularyGivesZeroVector) {
  const auto vocab = Vocabulary::from_terms({"cat"}, {1.0});
  EXPECT_TRUE(featurize(std::vector<std::string>{"dog", "emu"}, vocab).empty());
}

TEST(Featurize, SingleTermIsUnitVector) {
  const auto vocab = Vocabulary::from_terms({"cat", "dog"}, {1.7, 1.2});
  const auto x = featurize(std::vector<std::string>{"dog", "dog"}, vocab);
  ASSERT_EQ(x.entries.size(), 1u);
  EXPECT_EQ(x.entries[0].index, 1u);
  EXPECT_DOUBLE_EQ(x.entries[0].weight, 1.0);
}

TEST(Featurize, TwoEqualIdfTermsShareWeight) {
  const auto vocab = Vocabulary::from_terms({"cat", "dog"}, {1.5, 1.5});
  const auto x = featurize(std::vector<std::string>{"cat", "dog"}, vocab);
  ASSERT_EQ(x.entries.size(), 2u);
  for (const auto& e : x.entries) EXPECT_NEAR(e.weight, 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(FitVocabulary, KeepsTermsSeenTwiceWithSmoothIdf) {
  std::vector<Document> docs{doc("1", "cat cat dog"), doc("2", "cat emu"), doc("3", "fox")};
  const auto v = fit_vocabulary(docs);
  EXPECT_EQ(v.terms, (std::vector<std::string>{"cat"}));
  EXPECT_NEAR(v.idf[0], std::log(4.0 / 3.0) + 1.0, 1e-15);
}

TEST(LogisticObjective, AnalyticGradientMatchesCentralDifferences) {
  Rng rng(3);
  TrainingSet data;
  data.class_count = 3;
  data.feature_count = 4;
  for (std::size_t i = 0; i < 5; ++i) {
    FeatureVector x;
    for (std::uint32_t j = 0; j < 4; ++j) {
      if (rng.bernoulli(0.7)) x.entries.push_back({j, rng.uniform()});
    }
    data.features.push_back(x);
    data.labels.push_back(i % 3);
  }
  for (auto weighting : {ClassWeighting::none, ClassWeighting::balanced}) {
    const ClassifierHyperParams hp{0.5, weighting};
    std::vector<double> w((data.feature_count + 1) * data.class_count);
    for (double& v : w) v = rng.normal();
    std::vector<double> sw(data.size(), 1.0);
    if (weighting == ClassWeighting::balanced) sw = {5.0 / 6.0, 5.0 / 6.0, 5.0 / 3.0, 5.0 / 6.0, 5.0 / 6.0};
    std::vector<double> grad;
    logistic_objective(data, w, hp, sw, &grad);
    double diff2 = 0.0, norm2 = 0.0;
    const double h = 1e-6;
    for (std::size_t k = 0; k < w.size(); ++k) {
      auto plus = w, minus = w;
      plus[k] += h;
      minus[k] -= h;
      const double fd = (logistic_objective(data, plus, hp, sw, nullptr) -
                         logistic_objective(data, minus, hp, sw, nullptr)) /
                        (2.0 * h);
      diff2 += (fd - grad[k]) * (fd - grad[k]);
      norm2 += grad[k] * grad[k];
    }
    EXPECT_LT(std::sqrt(diff2) / std::sqrt(norm2), 1e-4);
  }
}

TEST(Train, SeparableDataIsFitPerfectly) {
  const auto corpus = separable_corpus(5);
  const auto model = train(corpus, {100.0, ClassWeighting::none});
  const auto pred = crisp_predict(model, corpus.documents);
  for (std::size_t i = 0; i < pred.size(); ++i) EXPECT_EQ(pred[i], *corpus.documents[i].group);
}

TEST(Train, OneExamplePerClassMatchesClosedForm) {
  const auto corpus = corpus_of({doc("x", "alpha alpha", 0), doc("y", "beta beta", 1)}, 2);
  const auto model = train(corpus, {1.0, ClassWeighting::none});
  const auto post = posteriors(model, corpus.documents);
  // By symmetry the optimum has logits (a, -a) on each example with
  // a = 1 - sigmoid(2a); solve by bisection.
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double g = mid - (1.0 - 1.0 / (1.0 + std::exp(-2.0 * mid)));
    (g > 0 ? hi : lo) = mid;
  }
  const double expected = 1.0 / (1.0 + std::exp(-2.0 * lo));
  EXPECT_NEAR(post.row(0)[0], expected, 1e-5);
  EXPECT_NEAR(post.row(1)[1], expected, 1e-5);
  EXPECT_NEAR(post.row(0)[0], 0.662584191636, 1e-6);
}

TEST(Train, IdenticalFeaturesGiveUniformPosteriors) {
  const auto corpus = corpus_of({doc("1", "same words", 0), doc("2", "same words", 1), doc("3", "same words", 0),
                                 doc("4", "same words", 1)},
                                2);
  const auto model = train(corpus, {1.0, ClassWeighting::balanced});
  const auto post = posteriors(model, corpus.documents);
  EXPECT_NEAR(post.row(0)[0], 0.5, 1e-6);
}

TEST(Train, RejectsMissingClass) {
  const auto corpus = corpus_of({doc("1", "aa aa", 0), doc("2", "bb bb", 0)}, 2);
  EXPECT_THROW(train(corpus, {1.0, ClassWeighting::none}), Error);
  EXPECT_THROW(train(separable_corpus(2), {0.0, ClassWeighting::none}), Error);
}

TEST(Predict, ZeroFeatureVectorIsSoftmaxOfBiases) {
  LogisticModel model;
  model.class_count = 2;
  model.vocabulary = Vocabulary::from_terms({"x"}, {1.0});
  model.weights = {3.0, -3.0, 0.0, std::log(3.0)};  // feature row, then bias row
  const auto p = predict_proba(model, FeatureVector{});
  EXPECT_NEAR(p[0], 0.25, 1e-15);
  EXPECT_NEAR(p[1], 0.75, 1e-15);
}

TEST(Predict, RowsSumToOneAndIdenticalDocsMatch) {
  const auto corpus = separable_corpus(4);
  const auto model = train(corpus, {1.0, ClassWeighting::none});
  std::vector<Document> docs{doc("p", "apple banana"), doc("q", "apple banana"), doc("r", "unknown")};
  const auto post = posteriors(model, docs);
  for (std::size_t r = 0; r < post.rows(); ++r) EXPECT_TRUE(is_on_simplex(post.row(r)));
  EXPECT_EQ(post.row(0)[0], post.row(1)[0]);
}

TEST(RateMatrix, Examples) {
  const std::vector<std::size_t> truth{0, 0, 1, 1, 2};
  EXPECT_EQ(rate_matrix(truth, truth, 3), Matrix::identity(3));
  const std::vector<std::size_t> zeros{0, 0, 0, 0};
  const std::vector<std::size_t> t2{0, 1, 0, 1};
  EXPECT_EQ(rate_matrix(zeros, t2, 2), Matrix::from_rows({{1.0, 1.0}, {0.0, 0.0}}));
  Rng rng(1);
  std::vector<std::size_t> p(100), t(100);
  for (std::size_t i = 0; i < 100; ++i) {
    p[i] = rng.below(3);
    t[i] = i % 3;
  }
  const auto m = rate_matrix(p, t, 3);
  for (std::size_t j = 0; j < 3; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < 3; ++i) s += m(i, j);
    EXPECT_NEAR(s, 1.0, 1e-12);
  }
}

TEST(StratifiedFolds, BalancedAcrossFolds) {
  std::vector<std::size_t> labels;
  for (std::size_t i = 0; i < 50; ++i) labels.push_back(i % 2);
  const auto a = stratified_folds(labels, 2, 5, 17);
  std::vector<std::vector<int>> counts(5, std::vector<int>(2, 0));
  for (std::size_t i = 0; i < labels.size(); ++i) counts[a[i]][labels[i]]++;
  for (const auto& f : counts) {
    EXPECT_EQ(f[0], 5);
    EXPECT_EQ(f[1], 5);
  }
  EXPECT_EQ(a, stratified_folds(labels, 2, 5, 17));
}

TEST(SelectModel, SingleGridPoint) {
  const auto corpus = separable_corpus(5);
  const std::vector<ClassifierHyperParams> grid{{3.0, ClassWeighting::balanced}};
  const auto sel = select_model(corpus, grid);
  EXPECT_EQ(sel.best.C, 3.0);
  EXPECT_EQ(sel.best.class_weighting, ClassWeighting::balanced);
}

TEST(SelectModel, TieGoesToSmallerC) {
  const auto corpus = separable_corpus(5);
  const std::vector<ClassifierHyperParams> grid{{100.0, ClassWeighting::none}, {10.0, ClassWeighting::none}};
  const auto sel = select_model(corpus, grid);
  EXPECT_EQ(sel.best.C, 10.0);
  EXPECT_DOUBLE_EQ(sel.best_accuracy, 1.0);
}

TEST(SelectModel, SeparableDataReachesFullAccuracy) {
  const auto corpus = separable_corpus(10);
  const auto sel = select_model(corpus, default_hyperparameter_grid());
  EXPECT_DOUBLE_EQ(sel.best_accuracy, 1.0);
  for (const auto& [point, acc] : sel.table) {
    if (point.C >= 1.0) {
      EXPECT_DOUBLE_EQ(acc, 1.0);
    }
  }
}

TEST(CrossValidation, RequiresEnoughExamplesPerClass) {
  EXPECT_THROW(cross_validated_posteriors(separable_corpus(3), {1.0, ClassWeighting::none}), Error);
  const auto rates = cv_rate_matrix(separable_corpus(10), {10.0, ClassWeighting::none});
  EXPECT_EQ(rates, Matrix::identity(2));
}

TEST(ModelFile, RoundTripPreservesPredictions) {
  const auto corpus = separable_corpus(5);
  const auto model = train(corpus, {2.0, ClassWeighting::balanced});
  const auto path = std::filesystem::temp_directory_path() / "qfe_test_model.json";
  save_model(model, path.string());
  const auto loaded = load_model(path.string());
  EXPECT_EQ(loaded.hyperparams.C, 2.0);
  EXPECT_EQ(loaded.hyperparams.class_weighting, ClassWeighting::balanced);
  EXPECT_EQ(loaded.fingerprint, model.fingerprint);
  EXPECT_EQ(loaded.weights, model.weights);
  const auto a = posteriors(model, corpus.documents);
  const auto b = posteriors(loaded, corpus.documents);
  for (std::size_t i = 0; i < a.data().size(); ++i) EXPECT_EQ(a.data()[i], b.data()[i]);
  std::filesystem::remove(path);
  EXPECT_THROW(model_from_json(nlohmann::json{{"format", "other"}}), Error);
}

}  // namespace
}  // namespace qfe
