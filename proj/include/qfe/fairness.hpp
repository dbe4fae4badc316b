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

#ifndef QFE_FAIRNESS_HPP
#define QFE_FAIRNESS_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <span>
#include <vector>

#include "qfe/core.hpp"

namespace qfe {

/// Rank cutoffs with their 1/log2(k) exposure weights.
class CutoffSchedule {
 public:
  CutoffSchedule() : CutoffSchedule(std::vector<std::size_t>{50, 100, 500, 1000}) {}

  explicit CutoffSchedule(std::vector<std::size_t> cutoffs) : cutoffs_(std::move(cutoffs)) {
    if (cutoffs_.empty()) throw Error("cutoff schedule is empty");
    std::sort(cutoffs_.begin(), cutoffs_.end());
    if (std::adjacent_find(cutoffs_.begin(), cutoffs_.end()) != cutoffs_.end()) {
      throw Error("duplicate cutoff in schedule");
    }
    for (auto k : cutoffs_) {
      if (k < 2) throw Error("cutoffs must be at least 2");
    }
    normalizer_ = 0.0;
    for (auto k : cutoffs_) normalizer_ += weight(k);
  }

  static double weight(std::size_t k) { return 1.0 / std::log2(static_cast<double>(k)); }

  const std::vector<std::size_t>& cutoffs() const { return cutoffs_; }
  double normalizer() const { return normalizer_; }
  std::size_t max_cutoff() const { return cutoffs_.back(); }

 private:
  std::vector<std::size_t> cutoffs_;
  double normalizer_ = 0.0;
};

using DistributionsAtCutoff = std::map<std::size_t, PrevalenceVector>;

inline constexpr double kKlSmoothing = 1e-6;

/// KL(p || q) in nats after additive smoothing of both arguments.
inline double kl_divergence(const PrevalenceVector& p, const PrevalenceVector& q,
                            double smoothing = kKlSmoothing) {
  if (p.size() != q.size()) throw Error("KL arguments have different class counts");
  const double n = static_cast<double>(p.size());
  const double denom = 1.0 + n * smoothing;
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double ps = (p[i] + smoothing) / denom;
    const double qs = (q[i] + smoothing) / denom;
    acc += ps * std::log(ps / qs);
  }
  return std::max(acc, 0.0);
}

namespace detail {

template <typename Term>
double discounted_mean(const DistributionsAtCutoff& dist, const CutoffSchedule& schedule,
                       Term term) {
  double acc = 0.0;
  for (auto k : schedule.cutoffs()) {
    auto it = dist.find(k);
    if (it == dist.end()) throw Error("missing distribution for cutoff " + std::to_string(k));
    acc += CutoffSchedule::weight(k) * term(it->second);
  }
  return acc / schedule.normalizer();
}

}  // namespace detail

inline double rkl(const DistributionsAtCutoff& dist, const PrevalenceVector& target,
                  const CutoffSchedule& schedule = {}) {
  return detail::discounted_mean(dist, schedule, [&](const PrevalenceVector& p) {
    return kl_divergence(p, target);
  });
}

/// Binary only; class 1 is the protected group.
inline double rnd(const DistributionsAtCutoff& dist, const PrevalenceVector& target,
                  const CutoffSchedule& schedule = {}) {
  if (target.size() != 2) throw Error("rND is binary-only");
  return detail::discounted_mean(dist, schedule, [&](const PrevalenceVector& p) {
    if (p.size() != 2) throw Error("rND is binary-only");
    return std::abs(p[1] - target[1]);
  });
}

/// Relative absolute error with smoothing eps = 1/(2m) on both arguments.
inline double rae(const PrevalenceVector& truth, const PrevalenceVector& estimate,
                  std::size_t bag_size) {
  if (bag_size == 0) throw Error("RAE needs a positive bag size");
  if (truth.size() != estimate.size()) throw Error("RAE arguments have different class counts");
  const double n = static_cast<double>(truth.size());
  const double eps = 1.0 / (2.0 * static_cast<double>(bag_size));
  const double denom = 1.0 + n * eps;
  double acc = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double p = (truth[i] + eps) / denom;
    const double q = (estimate[i] + eps) / denom;
    acc += std::abs(q - p) / p;
  }
  return acc / n;
}

inline double ae_over_queries(std::span<const double> true_scores,
                              std::span<const double> estimated_scores) {
  if (true_scores.size() != estimated_scores.size()) {
    throw Error("true and estimated scores cover different query sets");
  }
  if (true_scores.empty()) throw Error("no queries to average over");
  double acc = 0.0;
  for (std::size_t i = 0; i < true_scores.size(); ++i) {
    acc += std::abs(true_scores[i] - estimated_scores[i]);
  }
  return acc / static_cast<double>(true_scores.size());
}

inline double ae_over_queries(const std::map<std::string, double>& true_scores,
                              const std::map<std::string, double>& estimated_scores) {
  if (true_scores.size() != estimated_scores.size()) {
    throw Error("true and estimated scores cover different query sets");
  }
  std::vector<double> a, b;
  for (const auto& [query, score] : true_scores) {
    auto it = estimated_scores.find(query);
    if (it == estimated_scores.end()) throw Error("query missing from estimates: " + query);
    a.push_back(score);
    b.push_back(it->second);
  }
  return ae_over_queries(a, b);
}

struct WilcoxonResult {
  double statistic = 0.0;  // min(W+, W-)
  double w_plus = 0.0;
  double z = 0.0;
  double p_value = 1.0;
  std::size_t effective_pairs = 0;
};

/// Two-sided signed-rank test with the normal approximation. Zero
/// differences are dropped, tied |d| share their average rank and the
/// variance is tie-corrected; no continuity correction.
inline WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error("paired samples have different lengths");
  std::vector<double> d;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    if (diff != 0.0) d.push_back(diff);
  }
  const std::size_t n = d.size();
  if (n < 6) throw Error("sample too small");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return std::abs(d[x]) < std::abs(d[y]); });
  std::vector<double> ranks(n);
  double tie_term = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && std::abs(d[order[j + 1]]) == std::abs(d[order[i]])) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    const double t = static_cast<double>(j - i + 1);
    tie_term += t * t * t - t;
    i = j + 1;
  }

  WilcoxonResult r;
  r.effective_pairs = n;
  double w_minus = 0.0;
  for (std::size_t i = 0; i < n; ++i) (d[i] > 0 ? r.w_plus : w_minus) += ranks[i];
  r.statistic = std::min(r.w_plus, w_minus);
  const double nn = static_cast<double>(n);
  const double mean = nn * (nn + 1.0) / 4.0;
  const double var = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0 - tie_term / 48.0;
  r.z = var > 0.0 ? (r.w_plus - mean) / std::sqrt(var) : 0.0;
  r.p_value = std::clamp(std::erfc(std::abs(r.z) / std::sqrt(2.0)), 0.0, 1.0);
  return r;
}

}  // namespace qfe

#endif  // QFE_FAIRNESS_HPP
