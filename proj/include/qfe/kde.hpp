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

#ifndef QFE_KDE_HPP
#define QFE_KDE_HPP

#include <cmath>
#include <span>
#include <vector>

#include "qfe/core.hpp"

namespace qfe {

/// Isotropic Gaussian kernel density estimate over points in R^d.
/// Evaluation is const and reentrant.
class GaussianKde {
 public:
  GaussianKde() = default;

  GaussianKde(std::size_t dimension, std::vector<double> points, double bandwidth)
      : dimension_(dimension), points_(std::move(points)), bandwidth_(bandwidth) {
    if (dimension_ == 0) throw Error("KDE dimension must be positive");
    if (!(bandwidth_ > 0.0) || !std::isfinite(bandwidth_)) throw Error("KDE bandwidth must be positive");
    if (points_.empty() || points_.size() % dimension_ != 0) {
      throw Error("KDE needs at least one point of the declared dimension");
    }
    const double pi = 3.14159265358979323846;
    log_normalizer_ = -0.5 * static_cast<double>(dimension_) * std::log(2.0 * pi * bandwidth_ * bandwidth_);
    inv_two_h2_ = 1.0 / (2.0 * bandwidth_ * bandwidth_);
  }

  double density(std::span<const double> x) const {
    const std::size_t m = size();
    double acc = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      const double* p = &points_[k * dimension_];
      double d2 = 0.0;
      for (std::size_t j = 0; j < dimension_; ++j) {
        const double diff = x[j] - p[j];
        d2 += diff * diff;
      }
      acc += std::exp(-d2 * inv_two_h2_);
    }
    return std::exp(log_normalizer_) * acc / static_cast<double>(m);
  }

  std::size_t size() const { return points_.size() / dimension_; }
  std::size_t dimension() const { return dimension_; }
  double bandwidth() const { return bandwidth_; }
  std::span<const double> points() const { return points_; }

 private:
  std::size_t dimension_ = 0;
  std::vector<double> points_;
  double bandwidth_ = 0.0;
  double log_normalizer_ = 0.0;
  double inv_two_h2_ = 0.0;
};

}  // namespace qfe

#endif  // QFE_KDE_HPP
