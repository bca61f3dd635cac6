#pragma once

#include <string_view>
#include <variant>

#include "confclust/conformal.hpp"
#include "confclust/kmeans.hpp"
#include "confclust/levelset.hpp"

namespace confclust {

enum class Method { kspheres, kspheres_weighted, gmm, maxmix_klloyd, maxmix_em, levelset };

std::string_view to_string(Method method);
Method method_from_string(std::string_view name);

struct PipelineConfig {
  Method method = Method::kspheres;
  std::size_t k = 1;  // clusters, or k_nn for the levelset method
  double alpha = 0.1;
  FitOptions fit;
  double level_quantile = 0.9;  // levelset only
  bool adaptive = false;        // levelset only
};

using FittedModel = std::variant<SphereModel, GeneralModel, LevelSetModel>;

struct PipelineResult {
  FittedModel model;
  PredictionSet set;
};

/// Fit the base clustering on split.fit_half and calibrate on split.calib_half:
///   kspheres / kspheres-weighted  Lloyd + plain / weighted sphere residual
///   gmm                           EM + inverse-density residual
///   maxmix-klloyd / maxmix-em     generalized Lloyd / EM + max-mixture score
///   levelset                      kNN level set (k = k_nn) + nearest kept point
PipelineResult run_pipeline(const SplitPair& split, const PipelineConfig& config);

}  // namespace confclust
