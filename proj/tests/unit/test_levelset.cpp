#include <gtest/gtest.h>

#include <numeric>

#include "confclust/levelset.hpp"
#include "oracles.hpp"

using namespace confclust;

namespace {

// d_k by a full sort of all distances.
double brute_dk(const Dataset& ref, std::size_t k, const Vector& q, std::size_t exclude = SIZE_MAX) {
  std::vector<double> d;
  for (std::size_t i = 0; i < ref.n(); ++i)
    if (i != exclude) d.push_back(std::sqrt(oracle::sq_dist(ref, i, q)));
  std::sort(d.begin(), d.end());
  return d[k - 1];
}

SplitPair crescent_split(std::uint64_t seed) {
  return split_half(gen_crescents(2, 150, 1.0, 0.1, seed), seed);
}

}  // namespace

TEST(Knn, TwoPointExample) {
  Dataset ref = oracle::points_1d({0, 1});
  EXPECT_DOUBLE_EQ(knn_density(ref, 1, oracle::vec({0.25})), 2.0);
  EXPECT_DOUBLE_EQ(kth_neighbor_distance(ref, 2, oracle::vec({0.25})), 0.75);
}

TEST(Knn, MonotoneAlongRay) {
  Rng rng(1);
  Dataset ref = oracle::random_data(30, 2, rng, 1.0);
  double prev = kInf;
  for (int s = 0; s < 50; ++s) {
    double p = knn_density(ref, 5, oracle::vec({3.0 + 0.3 * s, 3.0 + 0.3 * s}));
    EXPECT_LE(p, prev);
    prev = p;
  }
}

TEST(Knn, MatchesBruteForce) {
  Rng rng(2);
  Dataset ref = oracle::random_data(60, 3, rng);
  std::vector<Vector> queries;
  for (int i = 0; i < 40; ++i) queries.push_back(oracle::vec({rng.normal() * 4, rng.normal() * 4, rng.normal() * 4}));
  for (std::size_t k : {1u, 4u, 17u}) {
    for (std::size_t a = 0; a < queries.size(); ++a) {
      const double dk = brute_dk(ref, k, queries[a]);
      EXPECT_NEAR(knn_density(ref, k, queries[a]), double(k) / (60.0 * dk), 1e-12);
      for (std::size_t b = 0; b < queries.size(); ++b)
        if (brute_dk(ref, k, queries[a]) < brute_dk(ref, k, queries[b]))
          EXPECT_GT(knn_density(ref, k, queries[a]), knn_density(ref, k, queries[b]));
    }
  }
}

TEST(Knn, LeaveOneOutAndDuplicates) {
  Rng rng(3);
  Dataset ref = oracle::random_data(25, 2, rng);
  KnnDensity den = fit_knn_density(ref, 3);
  for (std::size_t i = 0; i < ref.n(); ++i)
    EXPECT_NEAR(den.values[i], 3.0 / (25.0 * brute_dk(ref, 3, Vector(ref.point(i)), i)), 1e-12);
  Dataset dup = oracle::points_1d({0, 0, 1});
  KnnDensity dd = fit_knn_density(dup, 1);
  EXPECT_EQ(dd.values[0], kInf);
  EXPECT_EQ(dd.values[1], kInf);
  EXPECT_DOUBLE_EQ(dd.values[2], 1.0 / 3.0);
}

TEST(Knn, Errors) {
  Dataset ref = oracle::points_1d({0, 1});
  EXPECT_THROW(knn_density(ref, 0, oracle::vec({0})), std::invalid_argument);
  EXPECT_THROW(knn_density(ref, 3, oracle::vec({0})), std::invalid_argument);
  EXPECT_THROW(knn_density(ref, 1, oracle::vec({0, 0})), std::invalid_argument);
  EXPECT_THROW(fit_knn_density(ref, 2), std::invalid_argument);
}

TEST(LevelQuantile, SmallQIsMinimum) {
  Rng rng(4);
  KnnDensity den = fit_knn_density(oracle::random_data(50, 2, rng), 4);
  EXPECT_EQ(level_from_quantile(den, 1e-6), *std::min_element(den.values.begin(), den.values.end()));
  EXPECT_THROW(level_from_quantile(den, 0.0), std::invalid_argument);
  EXPECT_THROW(level_from_quantile(den, 1.0), std::invalid_argument);
}

TEST(LevelQuantile, KeptFractionMatchesQuantile) {
  // Distinct values: the kept fraction is 1 - q up to one point.
  Rng rng(5);
  KnnDensity den;
  for (int i = 0; i < 137; ++i) den.values.push_back(rng.uniform(0.0, 5.0));
  const double m = double(den.values.size());
  for (double q : {0.05, 0.3, 0.5, 0.888, 0.9, 0.99}) {
    const double t = level_from_quantile(den, q);
    const double kept = double(std::count_if(den.values.begin(), den.values.end(), [&](double v) { return v >= t; }));
    EXPECT_NEAR(kept / m, 1 - q, 1.0 / m + 1e-12) << q;
  }
  // kNN densities can tie (mutual k-th neighbours); ties only add kept points.
  KnnDensity knn = fit_knn_density(oracle::random_data(137, 2, rng), 6);
  for (double q : {0.3, 0.9}) {
    const double t = level_from_quantile(knn, q);
    const double kept = double(std::count_if(knn.values.begin(), knn.values.end(), [&](double v) { return v >= t; }));
    EXPECT_GE(kept / m, 1 - q - 1e-12);
  }
}

TEST(LevelQuantile, InvariantUnderMonotoneTransform) {
  Rng rng(6);
  KnnDensity den = fit_knn_density(oracle::random_data(80, 2, rng), 5);
  KnnDensity transformed = den;
  for (auto& v : transformed.values) v = std::log(v) * 3.0 + std::pow(v, 3.0);
  for (double q : {0.2, 0.5, 0.9}) {
    const double t1 = level_from_quantile(den, q), t2 = level_from_quantile(transformed, q);
    for (std::size_t i = 0; i < den.values.size(); ++i)
      EXPECT_EQ(den.values[i] >= t1, transformed.values[i] >= t2);
  }
}

TEST(LevelSet, KeepAllUsesNearestNeighbourDistances) {
  SplitPair sp = crescent_split(7);
  LevelSetFit fit = level_set_fit(sp, 5, -kInf, 0.1, false);
  EXPECT_EQ(fit.model.kept.size(), sp.fit_half.n());
  std::vector<double> nn;
  for (std::size_t i = 0; i < sp.calib_half.n(); ++i) nn.push_back(brute_dk(sp.fit_half, 1, Vector(sp.calib_half.point(i))));
  std::sort(nn.begin(), nn.end());
  const std::size_t rank = static_cast<std::size_t>(std::ceil((nn.size() + 1) * 0.9 - 1e-9));
  EXPECT_DOUBLE_EQ(fit.model.radius, nn[rank - 1]);
  for (const auto& c : fit.set.components) EXPECT_EQ(c.radius, fit.model.radius);
}

TEST(LevelSet, QuantileLevelKeepsDensestPoints) {
  SplitPair sp = crescent_split(8);
  LevelSetFit fit = level_set_fit(sp, 8, LevelQuantile{0.5}, 0.1, false);
  KnnDensity den = fit_knn_density(sp.fit_half, 8);
  for (std::size_t i = 0; i < den.values.size(); ++i) {
    const bool kept = std::find(fit.model.kept.begin(), fit.model.kept.end(), i) != fit.model.kept.end();
    EXPECT_EQ(kept, den.values[i] >= fit.model.level);
  }
  const PredictionSet s = level_set_spheres(sp, 8, LevelQuantile{0.5}, 0.1, false);
  EXPECT_EQ(s.threshold, fit.set.threshold);
}

TEST(LevelSet, AdaptiveRadii) {
  SplitPair sp = crescent_split(9);
  LevelSetFit fit = level_set_fit(sp, 8, LevelQuantile{0.5}, 0.1, true);
  ASSERT_EQ(fit.set.components.size(), fit.model.kept_densities.size());
  for (std::size_t j = 0; j < fit.set.components.size(); ++j)
    EXPECT_NEAR(fit.set.components[j].radius, fit.model.radius / std::sqrt(fit.model.kept_densities[j]), 1e-12);
}

TEST(LevelSet, GridAgreement) {
  SplitPair sp = crescent_split(10);
  for (bool adaptive : {false, true}) {
    PredictionSet s = level_set_spheres(sp, 8, LevelQuantile{0.7}, 0.1, adaptive);
    Vector y(2);
    std::size_t bad = 0;
    for (int a = 0; a < 100; ++a)
      for (int b = 0; b < 100; ++b) {
        y << -2 + 7.0 * a / 99, -5 + 8.0 * b / 99;
        bad += s.contains(y) != s.residual_contains(y);
      }
    EXPECT_EQ(bad, 0u);
  }
}

TEST(LevelSet, EmptyLevelNamesTheLevel) {
  SplitPair sp = crescent_split(11);
  try {
    level_set_fit(sp, 4, 1e12, 0.1, false);
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("1e+12"), std::string::npos) << e.what();
  }
}
