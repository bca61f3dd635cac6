#include <gtest/gtest.h>

#include <map>
#include <numbers>
#include <numeric>

#include "confclust/geometry.hpp"
#include "confclust/kmeans.hpp"
#include "oracles.hpp"

using namespace confclust;

namespace {

PredictionSet balls(std::vector<Vector> centers, double radius) {
  return make_prediction_set(Residual::plain_distance(std::move(centers)), radius, 0.1);
}

// a ~ b in both labelings exactly when they are in the same group.
bool same_partition(const std::vector<int>& x, const std::vector<int>& y) {
  if (x.size() != y.size()) return false;
  std::map<int, int> fwd, back;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if ((x[i] < 0) != (y[i] < 0)) return false;
    if (x[i] < 0) continue;
    auto [f, fi] = fwd.emplace(x[i], y[i]);
    auto [b, bi] = back.emplace(y[i], x[i]);
    if (f->second != y[i] || b->second != x[i]) return false;
  }
  return true;
}

GeneralModel random_ellipses(std::size_t k, Rng& rng) {
  GeneralModel m = oracle::random_model(k, 2, rng, 4.0);
  return m;
}

}  // namespace

TEST(Membership, CenterAndClosedBoundary) {
  PredictionSet s = balls({oracle::vec({0, 0})}, 2.0);
  EXPECT_TRUE(membership(s, oracle::vec({0, 0})));
  EXPECT_TRUE(membership(s, oracle::vec({2, 0})));
  EXPECT_TRUE(membership(s, oracle::vec({0, -2})));
  EXPECT_FALSE(membership(s, oracle::vec({2.0000001, 0})));
  EXPECT_THROW(membership(s, oracle::vec({0, 0, 0})), std::invalid_argument);
}

TEST(Volume, UnitBall) {
  PredictionSet s = balls({oracle::vec({1, -1})}, 1.0);
  VolumeEstimate v = estimate_volume(s, 100000, 1);
  EXPECT_NEAR(v.value, std::numbers::pi, 3 * v.std_error);
  EXPECT_GT(v.std_error, 0.0);
  EXPECT_LE(v.value, v.proposal_box.volume());
  EXPECT_NEAR(v.proposal_box.volume(), 2.02 * 2.02, 1e-12);
  EXPECT_EQ(v.n_samples, 100000u);
}

TEST(Volume, TwoDisjointBalls) {
  PredictionSet s = balls({oracle::vec({0, 0}), oracle::vec({5, 0})}, 1.0);
  VolumeEstimate v = estimate_volume(s, 100000, 2);
  EXPECT_NEAR(v.value, 2 * std::numbers::pi, 3 * v.std_error);
}

TEST(Volume, OverlappingBallsLensComplement) {
  const double exact = oracle::two_disc_union_area(1.0, 1.0);
  EXPECT_NEAR(exact, 2 * std::numbers::pi - (2 * std::numbers::pi / 3 - std::sqrt(3.0) / 2), 1e-12);
  PredictionSet s = balls({oracle::vec({0, 0}), oracle::vec({1, 0})}, 1.0);
  VolumeEstimate v = estimate_volume(s, 100000, 3);
  EXPECT_NEAR(v.value, exact, 3 * v.std_error);
}

TEST(Volume, EllipseArea) {
  Matrix cov(2, 2);
  cov << 4, 1, 1, 1;
  GeneralModel m{{1.0}, {oracle::vec({0, 0})}, {cov}};
  // log-form set with r2 = 2: area = pi r2 sqrt(det)
  Residual r = Residual::gaussian(ResidualKind::gmm_log_form, m);
  const double t = 1.0 + 0.5 * std::log(cov.determinant());
  PredictionSet s = make_prediction_set(r, t, 0.1);
  EXPECT_NEAR(s.components[0].r2, 2.0, 1e-12);
  VolumeEstimate v = estimate_volume(s, 100000, 4);
  EXPECT_NEAR(v.value, std::numbers::pi * 2.0 * std::sqrt(cov.determinant()), 3 * v.std_error);
}

TEST(Volume, UnbiasedOverSeeds) {
  PredictionSet s = balls({oracle::vec({0, 0}), oracle::vec({1.5, 0})}, 1.0);
  const double exact = oracle::two_disc_union_area(1.0, 1.5);
  double sum = 0, se2 = 0;
  const int seeds = 200;
  for (int i = 0; i < seeds; ++i) {
    VolumeEstimate v = estimate_volume(s, 2000, 1000 + i);
    sum += v.value;
    se2 += v.std_error * v.std_error;
  }
  const double pooled = std::sqrt(se2) / seeds;
  EXPECT_LT(std::abs(sum / seeds - exact), 4 * pooled);
}

TEST(Volume, DeterministicAndErrors) {
  PredictionSet s = balls({oracle::vec({0, 0})}, 1.0);
  EXPECT_EQ(estimate_volume(s, 5000, 7).value, estimate_volume(s, 5000, 7).value);
  EXPECT_THROW(estimate_volume(s, 0, 7), std::invalid_argument);
  PredictionSet unbounded = balls({oracle::vec({0, 0})}, kInf);
  EXPECT_THROW(estimate_volume(unbounded, 10, 1), std::domain_error);
  PredictionSet empty = balls({oracle::vec({0, 0})}, -1.0);
  EXPECT_EQ(estimate_volume(empty, 10, 1).value, 0.0);
}

TEST(Volume, MonotoneInAlpha) {
  std::vector<Vector> c{oracle::vec({0, 0}), oracle::vec({6, 0})};
  Dataset d = gen_blobs(c, 100, 1.0, 0, Box{}, 5);
  SplitPair sp = split_half(d, 5);
  SphereModel m = lloyd(sp.fit_half, 2);
  double prev = 0, prev_se = 0;
  for (double alpha : {0.4, 0.2, 0.1, 0.05}) {
    VolumeEstimate v = estimate_volume(k_spheres(m, sp.calib_half, alpha, false), 20000, 9);
    EXPECT_GE(v.value, prev - 3 * std::hypot(v.std_error, prev_se));
    prev = v.value;
    prev_se = v.std_error;
  }
}

TEST(Components, DisjointBallsAreSeparateClusters) {
  PredictionSet s = balls({oracle::vec({0, 0}), oracle::vec({5, 0}), oracle::vec({0, 5}), oracle::vec({9, 9})}, 1.0);
  Clustering c = connected_components(s, nullptr, ConnectivityRule::geometric);
  EXPECT_EQ(c.r, 4u);
  EXPECT_EQ(c.component_of, (std::vector<int>{0, 1, 2, 3}));
}

TEST(Components, ChainIsOneCluster) {
  std::vector<Vector> c;
  for (int i = 0; i < 10; ++i) c.push_back(oracle::vec({1.5 * i, 0.1 * (i % 2)}));
  PredictionSet s = balls(c, 1.0);
  EXPECT_EQ(connected_components(s, nullptr, ConnectivityRule::geometric).r, 1u);
  // removing a middle link splits it
  c.erase(c.begin() + 5);
  EXPECT_EQ(connected_components(balls(c, 1.0), nullptr, ConnectivityRule::geometric).r, 2u);
}

TEST(Components, TouchingBallsConnect) {
  PredictionSet s = balls({oracle::vec({0, 0}), oracle::vec({2, 0})}, 1.0);
  EXPECT_EQ(connected_components(s, nullptr, ConnectivityRule::geometric).r, 1u);
}

TEST(Components, CanonicalIdsAndEmptyComponents) {
  SphereModel m{{oracle::vec({10, 0}), oracle::vec({0, 0}), oracle::vec({10.5, 0})}, {1.0, 3.0, 1.0},
                {0.45, 0.1, 0.45}, {9, 2, 9}};
  PredictionSet s = make_prediction_set(Residual::weighted_sphere(m), 3.0, 0.1);
  ASSERT_TRUE(s.components[1].empty);
  ASSERT_FALSE(s.components[0].empty);
  Clustering c = connected_components(s, nullptr, ConnectivityRule::geometric);
  EXPECT_EQ(c.r, 1u);
  EXPECT_EQ(c.component_of, (std::vector<int>{0, -1, 0}));
}

TEST(Components, SampleRuleNeedsSamples) {
  PredictionSet s = balls({oracle::vec({0, 0})}, 1.0);
  EXPECT_THROW(connected_components(s, nullptr, ConnectivityRule::sample_based), std::invalid_argument);
}

TEST(Components, SampleRuleWitnessesOverlap) {
  PredictionSet s = balls({oracle::vec({0, 0}), oracle::vec({1.8, 0})}, 1.0);
  Dataset far = oracle::points_2d({{-0.5, 0}, {2.3, 0}});
  EXPECT_EQ(connected_components(s, &far, ConnectivityRule::sample_based).r, 2u);
  Dataset witness = oracle::points_2d({{0.9, 0}});
  Clustering c = connected_components(s, &witness, ConnectivityRule::sample_based);
  EXPECT_EQ(c.r, 1u);
  EXPECT_EQ(c.point_labels, (std::vector<int>{0}));
}

TEST(Components, EllipseIntersectionMatchesGridOracle) {
  Rng rng(11);
  int checked = 0;
  for (int t = 0; t < 300; ++t) {
    GeneralModel m = random_ellipses(2, rng);
    Residual r = Residual::gaussian(ResidualKind::maxmix_score, m);
    auto ga = std::make_shared<const GaussianComponent>(m.means[0], m.covariances[0]);
    auto gb = std::make_shared<const GaussianComponent>(m.means[1], m.covariances[1]);
    Component a = Component::ellipsoid(ga, rng.uniform(0.2, 4.0));
    Component b = Component::ellipsoid(gb, rng.uniform(0.2, 4.0));
    // min over a fine grid of max(q_a, q_b): <= 1 iff the ellipses meet
    double best = kInf;
    Vector y(2);
    for (int u = 0; u <= 400; ++u)
      for (int v = 0; v <= 400; ++v) {
        y << -12 + 24.0 * u / 400, -12 + 24.0 * v / 400;
        best = std::min(best, std::max(a.normalized_sq(y), b.normalized_sq(y)));
      }
    if (std::abs(best - 1.0) < 0.03) continue;  // too close to call on the grid
    ++checked;
    EXPECT_EQ(components_intersect(a, b), best < 1.0) << "trial " << t << " grid min " << best;
  }
  EXPECT_GT(checked, 250);
}

TEST(Components, SampleMergesRefineGeometricMerges) {
  Rng rng(12);
  for (int t = 0; t < 40; ++t) {
    const bool ellipses = t % 2 == 1;
    PredictionSet s;
    if (ellipses) {
      GeneralModel m = random_ellipses(6, rng);
      s = make_prediction_set(Residual::gaussian(ResidualKind::maxmix_score, m), rng.uniform(2.0, 6.0), 0.1);
    } else {
      std::vector<Vector> c;
      for (int j = 0; j < 8; ++j) c.push_back(oracle::vec({rng.uniform(-6, 6), rng.uniform(-6, 6)}));
      s = balls(c, rng.uniform(0.5, 2.5));
    }
    RowMatrix pts(3000, 2);
    for (int i = 0; i < 3000; ++i) pts.row(i) << rng.uniform(-10, 10), rng.uniform(-10, 10);
    Dataset samples(pts);
    Clustering geo = connected_components(s, nullptr, ConnectivityRule::geometric);
    Clustering smp = connected_components(s, &samples, ConnectivityRule::sample_based);
    EXPECT_LE(geo.r, smp.r);
    for (std::size_t a = 0; a < s.components.size(); ++a)
      for (std::size_t b = 0; b < s.components.size(); ++b)
        if (smp.component_of[a] >= 0 && smp.component_of[a] == smp.component_of[b])
          EXPECT_EQ(geo.component_of[a], geo.component_of[b]);
    EXPECT_LE(geo.r, s.components.size());
  }
}

TEST(Components, IndependentOfComponentOrder) {
  Rng rng(13);
  for (int t = 0; t < 20; ++t) {
    std::vector<Vector> c;
    for (int j = 0; j < 10; ++j) c.push_back(oracle::vec({rng.uniform(-8, 8), rng.uniform(-8, 8)}));
    std::vector<std::size_t> perm(c.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    rng.shuffle(std::span<std::size_t>(perm));
    std::vector<Vector> pc;
    for (auto p : perm) pc.push_back(c[p]);
    Clustering a = connected_components(balls(c, 2.0), nullptr, ConnectivityRule::geometric);
    Clustering b = connected_components(balls(pc, 2.0), nullptr, ConnectivityRule::geometric);
    EXPECT_EQ(a.r, b.r);
    std::vector<int> mapped(c.size());
    for (std::size_t j = 0; j < c.size(); ++j) mapped[perm[j]] = b.component_of[j];
    EXPECT_TRUE(same_partition(a.component_of, mapped));
    // canonical ids: first appearance order
    int next = 0;
    for (int id : a.component_of)
      if (id == next) ++next;
      else EXPECT_LT(id, next);
  }
}

TEST(AssignPoints, CenterOutsideAndPermutation) {
  std::vector<Vector> c{oracle::vec({0, 0}), oracle::vec({1.5, 0}), oracle::vec({6, 0})};
  PredictionSet s = balls(c, 1.0);
  Clustering cl = connected_components(s, nullptr, ConnectivityRule::geometric);
  ASSERT_EQ(cl.r, 2u);
  Dataset d = oracle::points_2d({{6, 0}, {0, 0}, {20, 20}, {0.8, 0}});
  std::vector<int> labels = assign_points(s, cl, d);
  EXPECT_EQ(labels[0], cl.component_of[2]);
  EXPECT_EQ(labels[1], cl.component_of[0]);
  EXPECT_EQ(labels[2], kOutside);
  EXPECT_EQ(labels[3], cl.component_of[0]);

  Rng rng(14);
  RowMatrix pts(500, 2);
  for (int i = 0; i < 500; ++i) pts.row(i) << rng.uniform(-2, 8), rng.uniform(-2, 2);
  Dataset probes(pts);
  std::vector<Vector> rc{c[2], c[0], c[1]};
  PredictionSet sr = balls(rc, 1.0);
  Clustering clr = connected_components(sr, nullptr, ConnectivityRule::geometric);
  EXPECT_TRUE(same_partition(assign_points(s, cl, probes), assign_points(sr, clr, probes)));
}

TEST(Components, TwoBlobsSixSpheresMergeIntoTwo) {
  std::vector<Vector> c{oracle::vec({0, 0}), oracle::vec({12, 0})};
  Dataset d = gen_blobs(c, 200, 1.0, 0, Box{}, 15);
  SplitPair sp = split_half(d, 15);
  SphereModel m = lloyd(sp.fit_half, 6, {.seed = 15});
  PredictionSet s = k_spheres(m, sp.calib_half, 0.1, false);
  EXPECT_EQ(connected_components(s, nullptr, ConnectivityRule::geometric).r, 2u);
  EXPECT_EQ(connected_components(s, &sp.calib_half, ConnectivityRule::sample_based).r, 2u);
}
