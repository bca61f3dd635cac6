#include "confclust/pipeline.hpp"

#include <array>
#include <stdexcept>
#include <string>

#include "confclust/gmm.hpp"

namespace confclust {

namespace {

constexpr std::array<std::pair<Method, std::string_view>, 6> kMethodNames{{
    {Method::kspheres, "kspheres"},
    {Method::kspheres_weighted, "kspheres-weighted"},
    {Method::gmm, "gmm"},
    {Method::maxmix_klloyd, "maxmix-klloyd"},
    {Method::maxmix_em, "maxmix-em"},
    {Method::levelset, "levelset"},
}};

}  // namespace

std::string_view to_string(Method method) {
  for (const auto& [m, name] : kMethodNames)
    if (m == method) return name;
  return "unknown";
}

Method method_from_string(std::string_view name) {
  for (const auto& [m, n] : kMethodNames)
    if (n == name) return m;
  throw std::invalid_argument("unknown method '" + std::string(name) + "'");
}

PipelineResult run_pipeline(const SplitPair& split, const PipelineConfig& config) {
  const Dataset& fit = split.fit_half;
  const Dataset& calib = split.calib_half;
  switch (config.method) {
    case Method::kspheres:
    case Method::kspheres_weighted: {
      SphereModel model = lloyd(fit, config.k, config.fit);
      PredictionSet set = k_spheres(model, calib, config.alpha, config.method == Method::kspheres_weighted);
      return {std::move(model), std::move(set)};
    }
    case Method::gmm: {
      GeneralModel model = em_fit(fit, config.k, config.fit);
      PredictionSet set = k_ellipsoids(model, calib, config.alpha, ResidualKind::gmm_inverse_density);
      return {std::move(model), std::move(set)};
    }
    case Method::maxmix_klloyd:
    case Method::maxmix_em: {
      GeneralModel model = config.method == Method::maxmix_em ? em_fit(fit, config.k, config.fit)
                                                              : generalized_lloyd(fit, config.k, config.fit);
      PredictionSet set = k_ellipsoids(model, calib, config.alpha, ResidualKind::maxmix_score);
      return {std::move(model), std::move(set)};
    }
    case Method::levelset: {
      LevelSetFit lf = level_set_fit(split, config.k, LevelQuantile{config.level_quantile}, config.alpha,
                                     config.adaptive);
      return {std::move(lf.model), std::move(lf.set)};
    }
  }
  throw std::invalid_argument("run_pipeline: unknown method");
}

}  // namespace confclust
