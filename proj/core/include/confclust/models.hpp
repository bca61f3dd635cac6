#pragma once

#include <cstddef>
#include <vector>

#include "confclust/dataset.hpp"

namespace confclust {

/// k-means fit: centers, within-cluster RMS radius about the cluster mean,
/// cluster shares and sizes.
struct SphereModel {
  std::vector<Vector> centers;
  std::vector<double> sigmas;
  std::vector<double> weights;
  std::vector<std::size_t> counts;

  std::size_t k() const { return centers.size(); }
  std::size_t d() const { return centers.empty() ? 0 : static_cast<std::size_t>(centers.front().size()); }
};

/// Gaussian-component parameters shared by the generalized k-means (max-mixture)
/// and EM fits. Weights may be zero for components that lost all their points.
struct GeneralModel {
  std::vector<double> weights;
  std::vector<Vector> means;
  std::vector<Matrix> covariances;

  std::size_t k() const { return means.size(); }
  std::size_t d() const { return means.empty() ? 0 : static_cast<std::size_t>(means.front().size()); }
};

/// Ridge floor used by every covariance update: if the smallest eigenvalue of S
/// is below eps = 1e-8 * trace(S)/d, add eps*I. When trace(S) is zero the floor
/// falls back to 1e-8 * fallback_scale.
void regularize_covariance(Matrix& s, double fallback_scale);

/// trace of the sample covariance of `data` divided by d (1.0 when zero).
double data_scale(const Dataset& data);

}  // namespace confclust
