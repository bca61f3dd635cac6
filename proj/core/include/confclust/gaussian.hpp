#pragma once

#include <limits>
#include <utility>
#include <vector>

#include "confclust/models.hpp"

namespace confclust {

/// Cached Cholesky factorization of one covariance.
class GaussianComponent {
 public:
  GaussianComponent(Vector mean, const Matrix& covariance);

  const Vector& mean() const { return mean_; }
  const Matrix& covariance() const { return covariance_; }
  double log_det() const { return log_det_; }
  std::size_t dim() const { return static_cast<std::size_t>(mean_.size()); }

  /// (y - mu)^T Sigma^{-1} (y - mu)
  double mahalanobis_sq(const PointRef& y) const;
  /// log phi(y; mu, Sigma), the normalized Gaussian log density.
  double log_density(const PointRef& y) const;
  /// Draw from N(mu, Sigma) given standard normals z.
  Vector transform(const Vector& z) const { return mean_ + lower_ * z; }
  double max_eigenvalue() const { return max_eig_; }

 private:
  Vector mean_;
  Matrix covariance_;
  Matrix lower_;
  double log_det_ = 0.0;
  double max_eig_ = 0.0;
};

/// Evaluates the per-component score
///   s_j(y) = 1/2 (y-mu_j)^T Sigma_j^{-1} (y-mu_j) + 1/2 log det Sigma_j - log pi_j
/// of a GeneralModel. Components with zero weight score +infinity.
class MixtureScorer {
 public:
  explicit MixtureScorer(const GeneralModel& model);

  std::size_t k() const { return components_.size(); }
  std::size_t dim() const { return components_.empty() ? 0 : components_.front().dim(); }
  const GaussianComponent& component(std::size_t j) const { return components_[j]; }
  double log_weight(std::size_t j) const { return log_weights_[j]; }

  double score(std::size_t j, const PointRef& y) const;

  /// argmin_j s_j(y) with ties going to the lowest index, and the minimum.
  std::pair<std::size_t, double> best(const PointRef& y) const;

  /// log sum_j exp(-s_j(y)), max-shifted.
  double log_sum_exp_neg(const PointRef& y) const;

 private:
  std::vector<GaussianComponent> components_;
  std::vector<double> log_weights_;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace confclust
