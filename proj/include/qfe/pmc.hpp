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

#ifndef QFE_PMC_HPP
#define QFE_PMC_HPP

#include <algorithm>
#include <cmath>
#include <span>

#include "qfe/core.hpp"

// Post-metric corrections: binary-only rescalings of an rND score computed
// from predicted ("proxy") labels. Class 1 is the protected group.
namespace qfe {

enum class RateSource { classifier_training_set, query_biased_lq };

struct PmcRates {
  double p = 0.0;     // P(pred = 1 | true = 0)
  double w = 0.0;     // P(pred = 0 | true = 1)
  double beta = 0.0;  // P(true = 1)
  RateSource source = RateSource::classifier_training_set;
};

inline constexpr double kPmcDenominatorFloor = 1e-6;
inline constexpr double kPmcMixtureFloor = 1e-9;

inline PmcRates estimate_pmc_rates(std::span<const std::size_t> labels,
                                   std::span<const std::size_t> predictions, RateSource source) {
  if (labels.size() != predictions.size()) throw Error("label/prediction length mismatch");
  double negatives = 0.0, positives = 0.0, false_pos = 0.0, false_neg = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] > 1 || predictions[i] > 1) throw Error("PMC rates need binary labels");
    if (labels[i] == 0) {
      negatives += 1.0;
      if (predictions[i] == 1) false_pos += 1.0;
    } else {
      positives += 1.0;
      if (predictions[i] == 0) false_neg += 1.0;
    }
  }
  if (negatives == 0.0 || positives == 0.0) throw Error("PMC rates need both classes present");
  return {false_pos / negatives, false_neg / positives, positives / (negatives + positives), source};
}

/// rND / ((1 - p) - w), clipped to [0, 1].
inline double pmc_b_correct(double rnd_proxy, const PmcRates& rates) {
  const double denom = (1.0 - rates.p) - rates.w;
  if (std::abs(denom) < kPmcDenominatorFloor) throw Error("degenerate PMC denominator");
  return std::clamp(rnd_proxy / denom, 0.0, 1.0);
}

/// rND * ((1 - w) beta / x - w beta / y), clipped to [0, 1], with
/// x = (1 - w) beta + p (1 - beta) and y = w beta + (1 - p)(1 - beta).
inline double pmc_d_correct(double rnd_proxy, const PmcRates& rates) {
  const double x = (1.0 - rates.w) * rates.beta + rates.p * (1.0 - rates.beta);
  const double y = rates.w * rates.beta + (1.0 - rates.p) * (1.0 - rates.beta);
  if (x < kPmcMixtureFloor || y < kPmcMixtureFloor) throw Error("degenerate PMC denominator");
  const double factor = (1.0 - rates.w) * rates.beta / x - rates.w * rates.beta / y;
  return std::clamp(rnd_proxy * factor, 0.0, 1.0);
}

}  // namespace qfe

#endif  // QFE_PMC_HPP
