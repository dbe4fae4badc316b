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

#include "qfe/pmc.hpp"

namespace qfe {
namespace {

TEST(PmcRates, CountsMisclassifications) {
  const std::vector<std::size_t> labels{0, 0, 0, 0, 1, 1};
  const std::vector<std::size_t> preds{0, 1, 0, 0, 0, 1};
  const auto r = estimate_pmc_rates(labels, preds, RateSource::query_biased_lq);
  EXPECT_DOUBLE_EQ(r.p, 0.25);
  EXPECT_DOUBLE_EQ(r.w, 0.5);
  EXPECT_DOUBLE_EQ(r.beta, 1.0 / 3.0);
  EXPECT_EQ(r.source, RateSource::query_biased_lq);
}

TEST(PmcRates, RejectsBadInput) {
  const std::vector<std::size_t> one_class{0, 0}, preds{0, 1}, multi{0, 2};
  EXPECT_THROW(estimate_pmc_rates(one_class, preds, RateSource::classifier_training_set), Error);
  EXPECT_THROW(estimate_pmc_rates(multi, preds, RateSource::classifier_training_set), Error);
  EXPECT_THROW(estimate_pmc_rates(preds, std::vector<std::size_t>{0}, RateSource::classifier_training_set), Error);
}

TEST(PmcB, DividesBySensitivityGap) {
  EXPECT_NEAR(pmc_b_correct(0.4, {0.1, 0.1, 0.5, RateSource::classifier_training_set}), 0.5, 1e-15);
  EXPECT_EQ(pmc_b_correct(0.3, {0.0, 0.0, 0.5, RateSource::classifier_training_set}), 0.3);
  EXPECT_EQ(pmc_b_correct(0.9, {0.3, 0.3, 0.5, RateSource::classifier_training_set}), 1.0);
  EXPECT_THROW(pmc_b_correct(0.4, {0.5, 0.5, 0.5, RateSource::classifier_training_set}), Error);
}

TEST(PmcD, ScalesByPosteriorGap) {
  // x = y = 0.5 so the factor is 0.9 - 0.1.
  EXPECT_NEAR(pmc_d_correct(0.4, {0.1, 0.1, 0.5, RateSource::classifier_training_set}), 0.32, 1e-15);
  // Perfect proxy leaves the value unchanged.
  EXPECT_NEAR(pmc_d_correct(0.25, {0.0, 0.0, 0.3, RateSource::classifier_training_set}), 0.25, 1e-15);
  // p = 0.2, w = 0.1, beta = 0.25: x = 0.225 + 0.15, y = 0.025 + 0.6.
  const double factor = 0.225 / 0.375 - 0.025 / 0.625;
  EXPECT_NEAR(pmc_d_correct(0.5, {0.2, 0.1, 0.25, RateSource::classifier_training_set}), 0.5 * factor, 1e-15);
}

TEST(PmcD, DegenerateMixtureThrows) {
  EXPECT_THROW(pmc_d_correct(0.4, {0.0, 1.0, 1.0, RateSource::classifier_training_set}), Error);
}

}  // namespace
}  // namespace qfe
