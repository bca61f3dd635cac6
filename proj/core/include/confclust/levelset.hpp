#pragma once

#include <variant>
#include <vector>

#include "confclust/conformal.hpp"

namespace confclust {

/// kNN density p(x) = k / (n d_k(x)) evaluated on its own reference points.
/// At a reference point the point itself is excluded from its neighbors.
struct KnnDensity {
  Dataset reference;
  std::size_t k_nn = 1;
  std::vector<double> values;
};

/// Distance from `query` to its k-th nearest reference point (brute force).
double kth_neighbor_distance(const Dataset& reference, std::size_t k_nn, const PointRef& query,
                             std::size_t exclude = static_cast<std::size_t>(-1));

/// p(query) = k_nn / (n d_k(query)); +inf when d_k is zero.
double knn_density(const Dataset& reference, std::size_t k_nn, const PointRef& query);

/// Leave-one-out kNN density at every reference point; requires k_nn < n.
KnnDensity fit_knn_density(const Dataset& reference, std::size_t k_nn);

/// Lower empirical q-quantile of the density values: the ceil(q m)-th smallest
/// (at least the smallest).
double level_from_quantile(const KnnDensity& density, double q);

struct LevelQuantile {
  double q;
};
/// Either an absolute density level t or a quantile of the fitted densities.
using LevelSpec = std::variant<double, LevelQuantile>;

struct LevelSetModel {
  std::size_t k_nn = 1;
  double level = 0.0;
  double radius = 0.0;  // conformal threshold M
  bool adaptive = false;
  std::vector<std::size_t> kept;  // indices into the fitting half
  std::vector<Vector> kept_points;
  std::vector<double> kept_densities;
};

struct LevelSetFit {
  LevelSetModel model;
  PredictionSet set;
};

/// Keep fitting-half points with density >= level, then calibrate the
/// nearest-kept-point residual (optionally scaled by sqrt(density)) on the
/// calibration half. The result is a union of balls about kept points.
LevelSetFit level_set_fit(const SplitPair& split, std::size_t k_nn, const LevelSpec& level, double alpha,
                          bool adaptive);
PredictionSet level_set_spheres(const SplitPair& split, std::size_t k_nn, const LevelSpec& level,
                                double alpha, bool adaptive);

}  // namespace confclust
