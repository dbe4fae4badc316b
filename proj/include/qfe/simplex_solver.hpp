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

#ifndef QFE_SIMPLEX_SOLVER_HPP
#define QFE_SIMPLEX_SOLVER_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "qfe/core.hpp"
#include "qfe/matrix.hpp"

namespace qfe {

struct SimplexSolverOptions {
  double move_tolerance = 1e-10;
  std::size_t max_iterations = 10000;
};

struct SimplexSolution {
  PrevalenceVector point;
  double objective = 0.0;
  std::size_t iterations = 0;
};

namespace detail {

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline PrevalenceVector renormalized(std::vector<double> p) {
  double s = 0.0;
  for (double& v : p) {
    v = std::max(v, 0.0);
    s += v;
  }
  for (double& v : p) v /= s;
  return PrevalenceVector(std::move(p));
}

}  // namespace detail

/// 0.5 * |t - M p|^2.
inline double least_squares_objective(const Matrix& M, std::span<const double> t,
                                      std::span<const double> p) {
  const auto mp = M.multiply(p);
  double acc = 0.0;
  for (std::size_t i = 0; i < mp.size(); ++i) acc += (t[i] - mp[i]) * (t[i] - mp[i]);
  return 0.5 * acc;
}

/// Projected gradient on 0.5 * |t - M p|^2 over the simplex with fixed step
/// 1/|M|_F^2, starting from the uniform vector. Returns the best iterate.
inline SimplexSolution solve_least_squares_simplex(const Matrix& M, std::span<const double> t,
                                                   const SimplexSolverOptions& options = {}) {
  const std::size_t n = M.cols();
  if (n == 0 || M.rows() != t.size()) throw Error("least-squares system has mismatched shape");
  for (double v : M.data()) {
    if (!std::isfinite(v)) throw Error("non-finite value in rate matrix");
  }
  for (double v : t) {
    if (!std::isfinite(v)) throw Error("non-finite value in bag representation");
  }
  const double lipschitz = M.frobenius_norm_squared();
  std::vector<double> p(n, 1.0 / static_cast<double>(n));
  std::vector<double> best = p;
  double best_f = least_squares_objective(M, t, p);
  if (lipschitz <= 0.0) return {PrevalenceVector(best), best_f, 0};
  const double step = 1.0 / lipschitz;

  std::vector<double> trial(n);
  std::size_t it = 0;
  for (; it < options.max_iterations; ++it) {
    const auto mp = M.multiply(p);
    for (std::size_t j = 0; j < n; ++j) {
      double g = 0.0;
      for (std::size_t i = 0; i < M.rows(); ++i) g += M(i, j) * (mp[i] - t[i]);
      trial[j] = p[j] - step * g;
    }
    auto next = euclidean_simplex_projection(trial);
    const double moved = detail::max_abs_diff(next, p);
    p = std::move(next);
    const double f = least_squares_objective(M, t, p);
    if (f < best_f) {
      best_f = f;
      best = p;
    }
    if (moved < options.move_tolerance) break;
  }
  return {detail::renormalized(best), best_f, it};
}

/// Projected gradient with Armijo backtracking along the projection arc, for
/// convex objectives without a usable global Lipschitz bound. The trial step is
/// Barzilai-Borwein. Starts from the uniform vector.
inline SimplexSolution minimize_on_simplex(
    std::size_t n,
    const std::function<double(std::span<const double>, std::vector<double>*)>& objective,
    const SimplexSolverOptions& options = {}) {
  std::vector<double> p(n, 1.0 / static_cast<double>(n));
  std::vector<double> grad, next_grad, prev_p, prev_grad, trial(n);
  double f = objective(p, &grad);
  double step = 1.0;
  std::size_t it = 0;
  for (; it < options.max_iterations; ++it) {
    if (!prev_p.empty()) {
      double ss = 0.0, sy = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double s = p[i] - prev_p[i];
        const double y = grad[i] - prev_grad[i];
        ss += s * s;
        sy += s * y;
      }
      step = sy > 0.0 ? std::clamp(ss / sy, 1e-12, 1e12) : step * 2.0;
    }
    bool accepted = false;
    std::vector<double> next;
    double f_next = f;
    for (int halving = 0; halving < 80; ++halving) {
      for (std::size_t i = 0; i < n; ++i) trial[i] = p[i] - step * grad[i];
      next = euclidean_simplex_projection(trial);
      double decrease = 0.0;
      for (std::size_t i = 0; i < n; ++i) decrease += grad[i] * (p[i] - next[i]);
      f_next = objective(next, &next_grad);
      if (f_next <= f - 1e-4 * decrease) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    const double moved = detail::max_abs_diff(next, p);
    prev_p = std::move(p);
    prev_grad = std::move(grad);
    p = std::move(next);
    grad = next_grad;
    f = f_next;
    if (moved < options.move_tolerance) break;
  }
  return {detail::renormalized(p), f, it};
}

}  // namespace qfe

#endif  // QFE_SIMPLEX_SOLVER_HPP
