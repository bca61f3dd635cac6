#include <gtest/gtest.h>

#include <numeric>

#include "confclust/gmm.hpp"
#include "oracles.hpp"

using namespace confclust;

TEST(Em, SingleComponentIsMle) {
  Rng rng(1);
  Dataset d = oracle::random_data(40, 2, rng);
  GeneralModel m = em_fit(d, 1);
  Vector mean = d.mean();
  Matrix cov = Matrix::Zero(2, 2);
  for (std::size_t i = 0; i < d.n(); ++i) {
    Vector x = Vector(d.point(i)) - mean;
    cov += x * x.transpose();
  }
  cov /= double(d.n());
  EXPECT_LT((m.means[0] - mean).norm(), 1e-10);
  EXPECT_LT((m.covariances[0] - cov).norm(), 1e-9);
  EXPECT_NEAR(m.weights[0], 1.0, 1e-15);
}

TEST(Em, SeparatedBlobsRecovered) {
  std::vector<Vector> c{oracle::vec({0, 0}), oracle::vec({30, 30})};
  const double sigma = 0.5;
  const std::size_t per = 200;
  Dataset d = gen_blobs(c, per, sigma, 0, Box{}, 3);
  GeneralModel m = em_fit(d, 2, {.seed = 4});
  Matrix r = responsibilities(d, m);
  for (Eigen::Index i = 0; i < r.rows(); ++i) EXPECT_GT(r.row(i).maxCoeff(), 1.0 - 1e-9);
  const double se = sigma / std::sqrt(double(per));
  for (const auto& truth : c) {
    double best = 1e300;
    for (const auto& mu : m.means) best = std::min(best, (mu - truth).cwiseAbs().maxCoeff());
    EXPECT_LT(best, 3 * se);
  }
}

TEST(Em, TraceMonotone) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    Rng rng(300 + s);
    Dataset d = oracle::random_data(60, 2, rng);
    GeneralFit fit = em_fit_traced(d, 3, {.restarts = 2, .seed = s});
    ASSERT_GE(fit.trace.size(), 2u);
    for (std::size_t i = 1; i < fit.trace.size(); ++i) EXPECT_LE(fit.trace[i], fit.trace[i - 1] + 1e-10);
    EXPECT_NEAR(fit.objective, ell_gm(d, fit.model), 1e-10);
  }
}

TEST(Em, Errors) {
  Dataset d = oracle::points_1d({0, 1});
  EXPECT_THROW(em_fit(d, 0), std::invalid_argument);
  EXPECT_THROW(em_fit(d, 3), std::invalid_argument);
}

TEST(EllGm, SingleComponentEqualsEllKm) {
  Rng rng(5);
  Dataset d = oracle::random_data(30, 3, rng);
  GeneralModel m = oracle::random_model(1, 3, rng);
  EXPECT_DOUBLE_EQ(ell_gm(d, m), ell_km(d, m));
}

TEST(EllGm, MatchesNaiveOracle) {
  Rng rng(6);
  for (int t = 0; t < 20; ++t) {
    const std::size_t d = 1 + rng.index(3), k = 1 + rng.index(5);
    Dataset data = oracle::random_data(25, d, rng);
    GeneralModel m = oracle::random_model(k, d, rng);
    EXPECT_NEAR(ell_gm(data, m), oracle::ell_gm(data, m), 1e-10);
  }
}

TEST(EllGm, SandwichWithEllKm) {
  Rng rng(7);
  for (int t = 0; t < 50; ++t) {
    const std::size_t k = 1 + rng.index(5);
    Dataset data = oracle::random_data(40, 2, rng);
    GeneralModel m = oracle::random_model(k, 2, rng);
    const double gm = ell_gm(data, m), km = ell_km(data, m);
    EXPECT_LE(gm, km + 1e-10);
    EXPECT_LE(km, gm + std::log(double(k)) + 1e-10);
  }
}

TEST(EllGm, FarPointsDoNotUnderflow) {
  GeneralModel m{{0.5, 0.5}, {oracle::vec({0}), oracle::vec({1})}, {Matrix::Identity(1, 1), Matrix::Identity(1, 1)}};
  Dataset d = oracle::points_1d({1e4});
  EXPECT_TRUE(std::isfinite(ell_gm(d, m)));
  Matrix r = responsibilities(d, m);
  EXPECT_NEAR(r.sum(), 1.0, 1e-12);
}

TEST(Responsibilities, RowStochastic) {
  Rng rng(8);
  Dataset d = oracle::random_data(50, 3, rng);
  GeneralModel m = oracle::random_model(4, 3, rng);
  Matrix r = responsibilities(d, m);
  for (Eigen::Index i = 0; i < r.rows(); ++i) {
    EXPECT_NEAR(r.row(i).sum(), 1.0, 1e-12);
    EXPECT_GE(r.row(i).minCoeff(), 0.0);
  }
  // against the textbook posterior
  for (std::size_t i = 0; i < 5; ++i) {
    Vector y = d.point(i);
    double total = 0;
    std::vector<double> p;
    for (std::size_t j = 0; j < 4; ++j) {
      p.push_back(m.weights[j] * oracle::gaussian_pdf(y, m.means[j], m.covariances[j]));
      total += p.back();
    }
    for (std::size_t j = 0; j < 4; ++j) EXPECT_NEAR(r(i, j), p[j] / total, 1e-10);
  }
}
