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

#ifndef QFE_QUANTIFIERS_HPP
#define QFE_QUANTIFIERS_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "qfe/core.hpp"
#include "qfe/fairness.hpp"
#include "qfe/kde.hpp"
#include "qfe/matrix.hpp"
#include "qfe/simplex_solver.hpp"

namespace qfe {

enum class QuantifierVariant { naive, cc, acc, pacc, kdey };

inline const char* to_string(QuantifierVariant v) {
  switch (v) {
    case QuantifierVariant::naive: return "naive";
    case QuantifierVariant::cc: return "cc";
    case QuantifierVariant::acc: return "acc";
    case QuantifierVariant::pacc: return "pacc";
    case QuantifierVariant::kdey: return "kdey";
  }
  return "?";
}

inline constexpr double kLikelihoodFloor = 1e-10;
inline constexpr double kUninformativeRateGap = 1e-6;

/// Classification statistics gathered without query bias (out-of-fold on the
/// classifier's training set). Used per class when a correction sample lacks
/// that class.
struct GlobalCorrection {
  Matrix crisp_rates;
  Matrix mean_posteriors;
  std::vector<std::vector<double>> class_points;  // flattened posterior rows per class
};

inline GlobalCorrection make_global_correction(const PosteriorMatrix& post,
                                               std::span<const std::size_t> labels) {
  const std::size_t n = post.class_count();
  if (post.rows() != labels.size()) throw Error("posterior/label length mismatch");
  GlobalCorrection g;
  g.crisp_rates = Matrix(n, n);
  g.mean_posteriors = Matrix(n, n);
  g.class_points.assign(n, {});
  std::vector<double> counts(n, 0.0);
  for (std::size_t r = 0; r < post.rows(); ++r) {
    const auto row = post.row(r);
    const std::size_t y = labels[r];
    counts[y] += 1.0;
    g.crisp_rates(argmax(row), y) += 1.0;
    for (std::size_t i = 0; i < n; ++i) g.mean_posteriors(i, y) += row[i];
    g.class_points[y].insert(g.class_points[y].end(), row.begin(), row.end());
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (counts[j] == 0.0) throw Error("class unseen in global correction sample");
    for (std::size_t i = 0; i < n; ++i) {
      g.crisp_rates(i, j) /= counts[j];
      g.mean_posteriors(i, j) /= counts[j];
    }
  }
  return g;
}

/// Per-query state learned from the correction sample.
struct CorrectionModel {
  QuantifierVariant variant = QuantifierVariant::cc;
  std::size_t class_count = 0;
  Matrix rate_matrix;                    // acc: crisp rates; pacc: mean posteriors
  std::vector<GaussianKde> class_kdes;   // kdey
  std::map<std::size_t, PrevalenceVector> naive_prevalences;
  double bandwidth = 0.0;
  std::vector<std::size_t> fallback_classes;
};

struct FitOptions {
  double bandwidth = 0.1;
  std::vector<std::size_t> cutoffs;          // naive only
  const GlobalCorrection* fallback = nullptr;
  std::size_t min_class_support = 1;  // classes with fewer items take the fallback
};

inline PrevalenceVector classify_and_count(std::span<const std::size_t> predicted,
                                           std::size_t class_count) {
  if (predicted.empty()) throw Error("cannot quantify an empty bag");
  return prevalence_of(predicted, class_count);
}

/// Learns the correction from a labelled, ranked correction sample. Labels
/// must be in rank order for naive. A class with fewer than
/// `min_class_support` items takes the fallback statistics when provided; a
/// class without items and without a fallback is an error.
inline CorrectionModel fit_correction(QuantifierVariant variant, const PosteriorMatrix& post,
                                      std::span<const std::size_t> labels,
                                      const FitOptions& options = {}) {
  if (post.rows() != labels.size()) throw Error("posterior/label length mismatch");
  const std::size_t n = post.class_count();
  CorrectionModel model;
  model.variant = variant;
  model.class_count = n;

  if (variant == QuantifierVariant::cc) return model;

  if (variant == QuantifierVariant::naive) {
    if (labels.empty()) throw Error("empty correction sample");
    for (auto k : options.cutoffs) {
      const std::size_t take = std::min(k, labels.size());
      model.naive_prevalences.emplace(k, prevalence_of(labels.subspan(0, take), n));
    }
    return model;
  }

  std::vector<std::vector<std::size_t>> members(n);
  for (std::size_t r = 0; r < labels.size(); ++r) {
    if (labels[r] >= n) throw Error("label out of range in correction sample");
    members[labels[r]].push_back(r);
  }
  std::vector<char> use_fallback(n, 0);
  for (std::size_t j = 0; j < n; ++j) {
    if (members[j].empty() && !options.fallback) throw Error("class unseen in correction sample");
    if (options.fallback && members[j].size() < std::max<std::size_t>(options.min_class_support, 1)) {
      use_fallback[j] = 1;
      model.fallback_classes.push_back(j);
    }
  }

  switch (variant) {
    case QuantifierVariant::acc: {
      model.rate_matrix = Matrix(n, n);
      for (std::size_t j = 0; j < n; ++j) {
        if (use_fallback[j]) {
          model.rate_matrix.set_column(j, options.fallback->crisp_rates.column(j));
          continue;
        }
        for (auto r : members[j]) model.rate_matrix(argmax(post.row(r)), j) += 1.0;
        for (std::size_t i = 0; i < n; ++i) {
          model.rate_matrix(i, j) /= static_cast<double>(members[j].size());
        }
      }
      break;
    }
    case QuantifierVariant::pacc: {
      model.rate_matrix = Matrix(n, n);
      for (std::size_t j = 0; j < n; ++j) {
        if (use_fallback[j]) {
          model.rate_matrix.set_column(j, options.fallback->mean_posteriors.column(j));
          continue;
        }
        for (auto r : members[j]) {
          const auto row = post.row(r);
          for (std::size_t i = 0; i < n; ++i) model.rate_matrix(i, j) += row[i];
        }
        for (std::size_t i = 0; i < n; ++i) {
          model.rate_matrix(i, j) /= static_cast<double>(members[j].size());
        }
      }
      break;
    }
    case QuantifierVariant::kdey: {
      model.bandwidth = options.bandwidth;
      for (std::size_t j = 0; j < n; ++j) {
        std::vector<double> points;
        if (use_fallback[j]) {
          points = options.fallback->class_points.at(j);
        } else {
          points.reserve(members[j].size() * n);
          for (auto r : members[j]) {
            const auto row = post.row(r);
            points.insert(points.end(), row.begin(), row.end());
          }
        }
        model.class_kdes.emplace_back(n, std::move(points), options.bandwidth);
      }
      break;
    }
    default:
      break;
  }
  return model;
}

/// Binary: the tpr/fpr adjustment clipped to [0,1]. Multiclass: least
/// squares on the simplex against the crisp rate matrix.
inline PrevalenceVector acc_estimate(const CorrectionModel& model,
                                     std::span<const std::size_t> predicted) {
  if (model.variant != QuantifierVariant::acc) throw Error("model was not fitted for ACC");
  const auto cc = classify_and_count(predicted, model.class_count);
  if (model.class_count == 2) {
    const double tpr = model.rate_matrix(1, 1);
    const double fpr = model.rate_matrix(1, 0);
    if (std::abs(tpr - fpr) < kUninformativeRateGap) throw Error("uninformative classifier rates");
    const double positive = std::clamp((cc[1] - fpr) / (tpr - fpr), 0.0, 1.0);
    return PrevalenceVector({1.0 - positive, positive});
  }
  return solve_least_squares_simplex(model.rate_matrix, cc.values()).point;
}

inline std::vector<double> mean_posterior(const PosteriorMatrix& post) {
  if (post.empty()) throw Error("cannot quantify an empty bag");
  std::vector<double> t(post.class_count(), 0.0);
  for (std::size_t r = 0; r < post.rows(); ++r) {
    const auto row = post.row(r);
    for (std::size_t i = 0; i < t.size(); ++i) t[i] += row[i];
  }
  for (double& v : t) v /= static_cast<double>(post.rows());
  return t;
}

inline PrevalenceVector pacc_estimate(const CorrectionModel& model, const PosteriorMatrix& post) {
  if (model.variant != QuantifierVariant::pacc) throw Error("model was not fitted for PACC");
  return solve_least_squares_simplex(model.rate_matrix, mean_posterior(post)).point;
}

/// Row-major m x n matrix of class-conditional densities q_i(x) of each bag
/// item. Independent of the mixture weights, so computed once per bag.
inline std::vector<double> kdey_class_densities(const CorrectionModel& model,
                                                const PosteriorMatrix& post) {
  if (model.variant != QuantifierVariant::kdey) throw Error("model was not fitted for KDEy");
  const std::size_t n = model.class_count;
  std::vector<double> q(post.rows() * n);
  for (std::size_t r = 0; r < post.rows(); ++r) {
    for (std::size_t i = 0; i < n; ++i) q[r * n + i] = model.class_kdes[i].density(post.row(r));
  }
  return q;
}

/// -(1/m) sum_x log(sum_i p_i q_i(x) + floor).
inline double kdey_negative_log_likelihood(std::span<const double> densities, std::size_t n,
                                           std::span<const double> p,
                                           std::vector<double>* gradient = nullptr) {
  const std::size_t m = densities.size() / n;
  if (gradient) gradient->assign(n, 0.0);
  double acc = 0.0;
  for (std::size_t r = 0; r < m; ++r) {
    const double* q = &densities[r * n];
    double mix = kLikelihoodFloor;
    for (std::size_t i = 0; i < n; ++i) mix += p[i] * q[i];
    acc -= std::log(mix);
    if (gradient) {
      for (std::size_t i = 0; i < n; ++i) (*gradient)[i] -= q[i] / mix;
    }
  }
  const double inv_m = 1.0 / static_cast<double>(m);
  if (gradient) {
    for (double& g : *gradient) g *= inv_m;
  }
  return acc * inv_m;
}

inline SimplexSolution kdey_solve(std::span<const double> densities, std::size_t n) {
  if (densities.empty()) throw Error("cannot quantify an empty bag");
  return minimize_on_simplex(n, [&](std::span<const double> p, std::vector<double>* g) {
    return kdey_negative_log_likelihood(densities, n, p, g);
  });
}

inline PrevalenceVector kdey_estimate(const CorrectionModel& model, const PosteriorMatrix& post) {
  if (post.empty()) throw Error("cannot quantify an empty bag");
  return kdey_solve(kdey_class_densities(model, post), model.class_count).point;
}

inline PrevalenceVector naive_estimate(const CorrectionModel& model, std::size_t k) {
  if (model.variant != QuantifierVariant::naive) throw Error("model was not fitted for Naive@k");
  auto it = model.naive_prevalences.find(k);
  if (it == model.naive_prevalences.end()) {
    throw Error("cutoff " + std::to_string(k) + " was not stored at fit time");
  }
  return it->second;
}

/// Dispatch over the variants; `bag` is the top-k prefix of the test ranking.
inline PrevalenceVector estimate(const CorrectionModel& model, const PosteriorMatrix& bag,
                                 std::size_t k) {
  switch (model.variant) {
    case QuantifierVariant::naive: return naive_estimate(model, k);
    case QuantifierVariant::cc: return classify_and_count(crisp_labels(bag), model.class_count);
    case QuantifierVariant::acc: return acc_estimate(model, crisp_labels(bag));
    case QuantifierVariant::pacc: return pacc_estimate(model, bag);
    case QuantifierVariant::kdey: return kdey_estimate(model, bag);
  }
  throw Error("unknown quantifier variant");
}

struct ValidationQuery {
  PosteriorMatrix correction_posteriors;
  std::vector<std::size_t> correction_labels;
  PosteriorMatrix test_bag;  // top-100 of the test ranking
  PrevalenceVector truth;
};

struct BandwidthSelection {
  double best = 0.0;
  std::vector<std::pair<double, double>> table;  // bandwidth, mean RAE
};

inline std::vector<double> default_bandwidth_grid() {
  std::vector<double> grid;
  for (int i = 1; i <= 10; ++i) grid.push_back(0.01 * i);
  return grid;
}

/// Bandwidth minimizing mean RAE over validation queries; ties go to the
/// smaller bandwidth.
inline BandwidthSelection select_kdey_bandwidth(std::span<const ValidationQuery> queries,
                                                std::vector<double> candidates,
                                                const GlobalCorrection* fallback = nullptr,
                                                std::size_t min_class_support = 1) {
  if (queries.empty()) throw Error("empty validation set");
  if (candidates.empty()) throw Error("no candidate bandwidths");
  std::sort(candidates.begin(), candidates.end());
  BandwidthSelection out;
  double best_rae = 0.0;
  for (double h : candidates) {
    double total = 0.0;
    for (const auto& q : queries) {
      FitOptions opts;
      opts.bandwidth = h;
      opts.fallback = fallback;
      opts.min_class_support = min_class_support;
      const auto model = fit_correction(QuantifierVariant::kdey, q.correction_posteriors,
                                        q.correction_labels, opts);
      total += rae(q.truth, kdey_estimate(model, q.test_bag), q.test_bag.rows());
    }
    const double mean = total / static_cast<double>(queries.size());
    out.table.emplace_back(h, mean);
    if (out.table.size() == 1 || mean < best_rae) {
      best_rae = mean;
      out.best = h;
    }
  }
  return out;
}

}  // namespace qfe

#endif  // QFE_QUANTIFIERS_HPP
