#include <gtest/gtest.h>

#include <filesystem>

#include "confclust/gmm.hpp"
#include "confclust/serialize.hpp"
#include "oracles.hpp"

using namespace confclust;

namespace {

template <class T>
T round_trip(const T& x) {
  json j = x;
  return json::parse(j.dump()).get<T>();
}

void expect_same_membership(const PredictionSet& a, const PredictionSet& b, double lo, double hi) {
  Vector y(2);
  for (int u = 0; u < 60; ++u)
    for (int v = 0; v < 60; ++v) {
      y << lo + (hi - lo) * u / 59, lo + (hi - lo) * v / 59;
      ASSERT_EQ(a.contains(y), b.contains(y));
      ASSERT_EQ(a.residual(y), b.residual(y));
    }
}

SplitPair blob_split(std::uint64_t seed) {
  std::vector<Vector> c{oracle::vec({0, 0}), oracle::vec({6, 0}), oracle::vec({0, 6})};
  return split_half(gen_blobs(c, 50, 1.0, 0, Box{}, seed), seed);
}

}  // namespace

TEST(Json, NonFiniteReals) {
  EXPECT_EQ(real_to_json(kInf), "inf");
  EXPECT_EQ(real_to_json(-kInf), "-inf");
  EXPECT_EQ(real_to_json(std::nan("")), "nan");
  EXPECT_EQ(real_from_json(real_to_json(kInf)), kInf);
  EXPECT_EQ(real_from_json(real_to_json(-kInf)), -kInf);
  EXPECT_TRUE(std::isnan(real_from_json(real_to_json(std::nan("")))));
  EXPECT_EQ(real_from_json(json(0.1)), 0.1);
  EXPECT_THROW(real_from_json(json("abc")), std::invalid_argument);
}

TEST(Json, ModelsRoundTrip) {
  SplitPair sp = blob_split(1);
  PipelineConfig cfg;
  cfg.k = 3;
  for (Method m : {Method::kspheres, Method::gmm, Method::levelset}) {
    cfg.method = m;
    cfg.k = m == Method::levelset ? 8 : 3;
    PipelineResult res = run_pipeline(sp, cfg);
    json j = model_to_json(res.model);
    FittedModel back = model_from_json(json::parse(j.dump()));
    EXPECT_EQ(model_to_json(back).dump(), j.dump());
    EXPECT_EQ(back.index(), res.model.index());
  }
  EXPECT_THROW(model_from_json(json{{"type", "nope"}}), std::invalid_argument);
}

TEST(Json, GeneralModelExact) {
  Rng rng(2);
  GeneralModel m = oracle::random_model(3, 2, rng);
  GeneralModel b = round_trip(m);
  EXPECT_EQ(b.weights, m.weights);
  for (std::size_t j = 0; j < 3; ++j) {
    EXPECT_EQ(b.means[j], m.means[j]);
    EXPECT_EQ(b.covariances[j], m.covariances[j]);
  }
}

TEST(Json, PredictionSetsRoundTrip) {
  SplitPair sp = blob_split(3);
  for (Method m : {Method::kspheres, Method::kspheres_weighted, Method::gmm, Method::maxmix_klloyd,
                   Method::maxmix_em, Method::levelset}) {
    PipelineConfig cfg;
    cfg.method = m;
    cfg.k = m == Method::levelset ? 6 : 3;
    cfg.adaptive = true;
    PipelineResult res = run_pipeline(sp, cfg);
    PredictionSet back = round_trip(res.set);
    EXPECT_EQ(back.threshold, res.set.threshold);
    EXPECT_EQ(back.alpha, res.set.alpha);
    EXPECT_EQ(back.residual.kind(), res.set.residual.kind());
    ASSERT_EQ(back.components.size(), res.set.components.size());
    for (std::size_t j = 0; j < back.components.size(); ++j) {
      EXPECT_EQ(back.components[j].empty, res.set.components[j].empty);
      EXPECT_EQ(back.components[j].r2, res.set.components[j].r2);
    }
    expect_same_membership(res.set, back, -4, 10);
  }
}

TEST(Json, PredictionSetSchema) {
  SphereModel m{{oracle::vec({1, 2})}, {1.0}, {1.0}, {3}};
  json j = make_prediction_set(Residual::plain_distance(m.centers), 2.5, 0.1);
  EXPECT_EQ(j.at("kind"), "plain_distance");
  EXPECT_EQ(j.at("alpha"), 0.1);
  EXPECT_EQ(j.at("threshold"), 2.5);
  EXPECT_EQ(j.at("components")[0].at("radius"), 2.5);
  EXPECT_EQ(j.at("components")[0].at("center"), json({1.0, 2.0}));
  GeneralModel g{{1.0}, {oracle::vec({0, 0})}, {Matrix::Identity(2, 2)}};
  json e = make_prediction_set(Residual::gaussian(ResidualKind::gmm_log_form, g), 1.0, 0.1);
  EXPECT_TRUE(e.at("components")[0].contains("mu"));
  EXPECT_TRUE(e.at("components")[0].contains("sigma"));
  EXPECT_EQ(e.at("components")[0].at("r2"), 2.0);
}

TEST(Json, UnboundedThresholdSurvives) {
  PredictionSet s = make_prediction_set(Residual::plain_distance({oracle::vec({0, 0})}), kInf, 0.01);
  json j = s;
  EXPECT_EQ(j.at("threshold"), "inf");
  EXPECT_EQ(round_trip(s).threshold, kInf);
}

TEST(Json, OtherArtifactsRoundTrip) {
  VolumeEstimate v{3.5, 0.1, 1000, 42, Box{oracle::vec({0, 1}), oracle::vec({2, 3})}};
  VolumeEstimate vb = round_trip(v);
  EXPECT_EQ(vb.value, v.value);
  EXPECT_EQ(vb.seed, v.seed);
  EXPECT_EQ(vb.proposal_box.hi, v.proposal_box.hi);

  Clustering c{2, {0, -1, 1}, {0, kOutside, 1, 1}};
  Clustering cb = round_trip(c);
  EXPECT_EQ(cb.r, 2u);
  EXPECT_EQ(cb.component_of, c.component_of);
  EXPECT_EQ(cb.point_labels, c.point_labels);

  VolumeCurve curve{{1, 2, 3}, {3, 2, 2.5}, {0.1, 0.1, 0.1}, Matrix::Constant(2, 3, 1.5)};
  VolumeCurve curveb = round_trip(curve);
  EXPECT_EQ(curveb.ks, curve.ks);
  EXPECT_EQ(curveb.volumes, curve.volumes);
  ASSERT_TRUE(curveb.bootstrap.has_value());
  EXPECT_EQ(*curveb.bootstrap, *curve.bootstrap);

  TestDecision d{2, {{1, 2, 0.5, 1.5}}, {1, 2}, {false, true}};
  TestDecision db = round_trip(d);
  EXPECT_EQ(db.k_hat, 2u);
  EXPECT_EQ(db.rejected, d.rejected);
  ASSERT_EQ(db.intervals.size(), 1u);
  EXPECT_EQ(db.intervals[0].hi, 1.5);
  json dj = d;
  EXPECT_EQ(dj.at("rejected").at("2"), true);
}

TEST(Json, FileRoundTrip) {
  auto dir = std::filesystem::temp_directory_path() / "confclust_json_test";
  std::filesystem::create_directories(dir);
  json j = {{"a", 1}, {"b", {1.5, 2.5}}};
  write_json(dir / "x.json", j);
  EXPECT_EQ(read_json(dir / "x.json"), j);
  EXPECT_THROW(read_json(dir / "missing.json"), std::runtime_error);
  std::filesystem::remove_all(dir);
}

TEST(Pipeline, MethodNames) {
  for (Method m : {Method::kspheres, Method::kspheres_weighted, Method::gmm, Method::maxmix_klloyd,
                   Method::maxmix_em, Method::levelset})
    EXPECT_EQ(method_from_string(to_string(m)), m);
  EXPECT_THROW(method_from_string("kmedoids"), std::invalid_argument);
}

TEST(Pipeline, MethodsUseDocumentedResiduals) {
  SplitPair sp = blob_split(4);
  PipelineConfig cfg;
  cfg.k = 3;
  const std::vector<std::pair<Method, ResidualKind>> expected{
      {Method::kspheres, ResidualKind::plain_distance},
      {Method::kspheres_weighted, ResidualKind::weighted_sphere},
      {Method::gmm, ResidualKind::gmm_inverse_density},
      {Method::maxmix_klloyd, ResidualKind::maxmix_score},
      {Method::maxmix_em, ResidualKind::maxmix_score},
      {Method::levelset, ResidualKind::levelset_distance}};
  for (auto [m, kind] : expected) {
    cfg.method = m;
    EXPECT_EQ(run_pipeline(sp, cfg).set.residual.kind(), kind) << to_string(m);
  }
  cfg.method = Method::levelset;
  cfg.adaptive = true;
  EXPECT_EQ(run_pipeline(sp, cfg).set.residual.kind(), ResidualKind::levelset_adaptive);
}
