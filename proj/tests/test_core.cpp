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
#include <set>

#include "qfe/core.hpp"
#include "qfe/matrix.hpp"
#include "qfe/random.hpp"
#include "qfe/simplex_solver.hpp"
#include "test_util.hpp"

namespace qfe {
namespace {

TEST(PrevalenceVector, RejectsPointsOffTheSimplex) {
  EXPECT_THROW(PrevalenceVector({0.5, 0.6}), Error);
  EXPECT_THROW(PrevalenceVector({-0.1, 1.1}), Error);
  EXPECT_THROW(PrevalenceVector(std::vector<double>{}), Error);
  EXPECT_THROW(PrevalenceVector({NAN, 1.0}), Error);
  EXPECT_NO_THROW(PrevalenceVector({0.25, 0.75}));
  EXPECT_NO_THROW(PrevalenceVector({0.5, 0.5 + 5e-10}));
}

TEST(PrevalenceVector, UniformAndOneHot) {
  const auto u = PrevalenceVector::uniform(4);
  for (double v : u) EXPECT_DOUBLE_EQ(v, 0.25);
  const auto h = PrevalenceVector::one_hot(3, 2);
  EXPECT_EQ(h.vector(), (std::vector<double>{0.0, 0.0, 1.0}));
  EXPECT_THROW(PrevalenceVector::one_hot(3, 3), Error);
  EXPECT_THROW(PrevalenceVector::uniform(0), Error);
}

TEST(PrevalenceOf, CountsGroups) {
  const std::vector<std::size_t> ten{0, 0, 1, 1, 1, 2, 2, 2, 2, 2};
  const auto p = prevalence_of(ten, 3);
  EXPECT_DOUBLE_EQ(p[0], 0.2);
  EXPECT_DOUBLE_EQ(p[1], 0.3);
  EXPECT_DOUBLE_EQ(p[2], 0.5);

  const std::vector<std::size_t> all_zero{0, 0, 0, 0};
  EXPECT_EQ(prevalence_of(all_zero, 2).vector(), (std::vector<double>{1.0, 0.0}));

  const std::vector<std::size_t> sym{0, 1, 2, 0, 1, 2};
  for (double v : prevalence_of(sym, 3)) EXPECT_DOUBLE_EQ(v, 1.0 / 3.0);
}

TEST(PrevalenceOf, RejectsUnlabeledDocuments) {
  std::vector<Document> docs{testing::doc("a", "x", 0), testing::doc("b", "y")};
  EXPECT_THROW(prevalence_of(std::span<const Document>(docs), 2), Error);
  EXPECT_THROW(prevalence_of(std::vector<std::size_t>{}, 2), Error);
  EXPECT_THROW(prevalence_of(std::vector<std::size_t>{2}, 2), Error);
}

TEST(ProjectToSimplex, ClipAndRenormalize) {
  EXPECT_EQ(project_to_simplex(std::vector<double>{0.5, 0.5}).vector(), (std::vector<double>{0.5, 0.5}));
  const auto p = project_to_simplex(std::vector<double>{-0.2, 0.6, 0.6});
  EXPECT_DOUBLE_EQ(p[0], 0.0);
  EXPECT_DOUBLE_EQ(p[1], 0.5);
  EXPECT_DOUBLE_EQ(p[2], 0.5);
  EXPECT_EQ(project_to_simplex(std::vector<double>{-1.0, -1.0}).vector(), (std::vector<double>{0.5, 0.5}));
}

TEST(EuclideanProjection, IsNearestSimplexPoint) {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> v(3);
    for (double& x : v) x = 2.0 * rng.uniform() - 0.5;
    const auto p = euclidean_simplex_projection(v);
    ASSERT_TRUE(is_on_simplex(p));
    double best = 0.0;
    for (std::size_t i = 0; i < 3; ++i) best += (p[i] - v[i]) * (p[i] - v[i]);
    // No grid point is closer than the projection.
    for (int a = 0; a <= 100; ++a) {
      for (int b = 0; a + b <= 100; ++b) {
        const double q[3] = {a / 100.0, b / 100.0, (100 - a - b) / 100.0};
        double d = 0.0;
        for (std::size_t i = 0; i < 3; ++i) d += (q[i] - v[i]) * (q[i] - v[i]);
        ASSERT_GE(d, best - 1e-12);
      }
    }
  }
}

TEST(Argmax, FirstMaximumWins) {
  EXPECT_EQ(argmax(std::vector<double>{0.2, 0.5, 0.3}), 1u);
  EXPECT_EQ(argmax(std::vector<double>{0.5, 0.5}), 0u);
  const auto post = testing::posterior_rows({{0.2, 0.5, 0.3}, {0.6, 0.2, 0.2}});
  EXPECT_EQ(crisp_labels(post), (std::vector<std::size_t>{1, 0}));
}

TEST(PosteriorMatrix, ValidatesRowsAndSlices) {
  EXPECT_THROW(PosteriorMatrix(2, {0.5, 0.6}), Error);
  EXPECT_THROW(PosteriorMatrix(2, {0.5, 0.5, 1.0}), Error);
  const auto m = testing::posterior_rows({{0.1, 0.9}, {0.7, 0.3}, {0.5, 0.5}});
  EXPECT_EQ(m.rows(), 3u);
  EXPECT_EQ(m.head(2).rows(), 2u);
  EXPECT_EQ(m.head(10).rows(), 3u);
  const std::vector<std::size_t> idx{2, 0};
  const auto s = m.select(idx);
  EXPECT_DOUBLE_EQ(s.row(0)[0], 0.5);
  EXPECT_DOUBLE_EQ(s.row(1)[1], 0.9);
}

TEST(ValidateCorpus, RejectsDuplicatesAndRange) {
  auto c = testing::corpus_of({testing::doc("a", "x", 0), testing::doc("a", "y", 1)}, 2);
  EXPECT_THROW(validate_corpus(c), Error);
  c = testing::corpus_of({testing::doc("a", "x", 0), testing::doc("b", "y", 2)}, 2);
  EXPECT_THROW(validate_corpus(c), Error);
  c = testing::corpus_of({testing::doc("a", "x", 0), testing::doc("b", "y", 1)}, 2);
  EXPECT_NO_THROW(validate_corpus(c));
}

TEST(Rng, SameSeedSameStream) {
  Rng a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next();
    EXPECT_EQ(x, b.next());
    differs |= x != c.next();
  }
  EXPECT_TRUE(differs);
}

TEST(Rng, BelowAndCategoricalStayInRange) {
  Rng rng(5);
  std::vector<int> counts(3, 0);
  const std::vector<double> w{0.2, 0.0, 0.8};
  for (int i = 0; i < 20000; ++i) {
    ASSERT_LT(rng.below(7), 7u);
    counts[rng.categorical(w)]++;
  }
  EXPECT_EQ(counts[1], 0);
  EXPECT_NEAR(counts[0] / 20000.0, 0.2, 0.02);
}

TEST(Rng, ShuffleIsAPermutation) {
  Rng rng(9);
  std::vector<int> v(50);
  std::iota(v.begin(), v.end(), 0);
  rng.shuffle(v);
  EXPECT_EQ(std::set<int>(v.begin(), v.end()).size(), 50u);
}

TEST(DeriveSeed, DistinctTagsGiveDistinctSeeds) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t tag = 0; tag < 100; ++tag) seen.insert(derive_seed(7, tag));
  EXPECT_EQ(seen.size(), 100u);
  EXPECT_EQ(derive_seed(7, 3), derive_seed(7, 3));
}

TEST(Matrix, MultiplyAndColumns) {
  auto m = Matrix::from_rows({{1.0, 2.0}, {3.0, 4.0}});
  EXPECT_EQ(m.multiply(std::vector<double>{1.0, 1.0}), (std::vector<double>{3.0, 7.0}));
  EXPECT_EQ(m.column(1), (std::vector<double>{2.0, 4.0}));
  m.set_column(0, std::vector<double>{0.0, 0.0});
  EXPECT_DOUBLE_EQ(m.frobenius_norm_squared(), 20.0);
  EXPECT_EQ(Matrix::identity(2), Matrix::from_rows({{1.0, 0.0}, {0.0, 1.0}}));
}

TEST(LeastSquaresSimplex, IdentitySystem) {
  const auto sol = solve_least_squares_simplex(Matrix::identity(2), std::vector<double>{0.3, 0.7});
  EXPECT_NEAR(sol.point[0], 0.3, 1e-9);
  EXPECT_NEAR(sol.point[1], 0.7, 1e-9);
}

TEST(LeastSquaresSimplex, SymmetricFixedPoint) {
  const auto M = Matrix::from_rows({{0.9, 0.1}, {0.1, 0.9}});
  const auto sol = solve_least_squares_simplex(M, std::vector<double>{0.5, 0.5});
  EXPECT_NEAR(sol.point[0], 0.5, 1e-9);
}

TEST(LeastSquaresSimplex, MatchesFineGridOnExactSystem) {
  const auto M = Matrix::from_rows({{0.8, 0.3}, {0.2, 0.7}});
  const std::vector<double> t{0.55, 0.45};
  // 0.8 * 0.5 + 0.3 * 0.5 = 0.55 exactly.
  EXPECT_DOUBLE_EQ(0.8 * 0.5 + 0.3 * 0.5, 0.55);
  double best_p = 0.0, best_f = INFINITY;
  for (int i = 0; i <= 10000; ++i) {
    const double p1 = i * 1e-4;
    const double r0 = t[0] - (0.8 * p1 + 0.3 * (1 - p1));
    const double r1 = t[1] - (0.2 * p1 + 0.7 * (1 - p1));
    const double f = 0.5 * (r0 * r0 + r1 * r1);
    if (f < best_f) {
      best_f = f;
      best_p = p1;
    }
  }
  const auto sol = solve_least_squares_simplex(M, t);
  EXPECT_NEAR(sol.point[0], 0.5, 1e-6);
  EXPECT_NEAR(sol.point[0], best_p, 1e-4);
  EXPECT_LE(sol.objective, best_f + 1e-12);
}

TEST(MinimizeOnSimplex, QuadraticWithInteriorMinimum) {
  const std::vector<double> c{0.2, 0.3, 0.5};
  const auto sol = minimize_on_simplex(3, [&](std::span<const double> p, std::vector<double>* g) {
    double f = 0.0;
    if (g) g->assign(3, 0.0);
    for (std::size_t i = 0; i < 3; ++i) {
      f += (p[i] - c[i]) * (p[i] - c[i]);
      if (g) (*g)[i] = 2.0 * (p[i] - c[i]);
    }
    return f;
  });
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(sol.point[i], c[i], 1e-6);
}

}  // namespace
}  // namespace qfe
