#pragma once

#include <functional>
#include <memory>
#include <string_view>
#include <vector>

#include "confclust/gaussian.hpp"
#include "confclust/models.hpp"

namespace confclust {

enum class ResidualKind {
  plain_distance,       // min_j ||y - c_j||
  weighted_sphere,      // min_j ||y - c_j||^2 / s_j^2 + 2d log s_j - 2 log p_j
  gmm_inverse_density,  // min_j 1 / (p_j phi(y; mu_j, Sigma_j))
  gmm_log_form,         // min_j 1/2 maha_j + 1/2 log det Sigma_j - log p_j
  maxmix_score,         // min_j maha_j + log det Sigma_j - 2 log p_j
  levelset_distance,    // min over kept points ||y - Y_j||
  levelset_adaptive,    // min over kept points ||y - Y_j|| sqrt(density_j)
};

std::string_view to_string(ResidualKind kind);
ResidualKind residual_kind_from_string(std::string_view name);
bool is_ellipsoidal(ResidualKind kind);

/// Conformity score fitted on the first half of a split. Evaluation is a pure
/// function of the stored parameters and the query point.
class Residual {
 public:
  static Residual plain_distance(std::vector<Vector> centers);
  static Residual weighted_sphere(const SphereModel& model);
  static Residual gaussian(ResidualKind kind, const GeneralModel& model);
  /// Levelset residuals over kept points. An empty `densities` gives the
  /// unweighted distance; otherwise each distance is scaled by sqrt(density).
  static Residual nearest_point(std::vector<Vector> points, std::vector<double> densities = {});

  ResidualKind kind() const { return kind_; }
  std::size_t dim() const;
  std::size_t size() const;  // number of terms in the min

  double term(std::size_t j, const PointRef& y) const;
  double operator()(const PointRef& y) const;
  std::vector<double> evaluate(const Dataset& data) const;

  const std::vector<Vector>& centers() const { return centers_; }
  const std::vector<double>& sigmas() const { return sigmas_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<double>& densities() const { return densities_; }
  const GeneralModel& general_model() const { return general_; }
  const MixtureScorer& scorer() const { return *scorer_; }

 private:
  ResidualKind kind_ = ResidualKind::plain_distance;
  std::vector<Vector> centers_;  // ball kinds: centers or kept points
  std::vector<double> sigmas_;
  std::vector<double> weights_;
  std::vector<double> densities_;
  GeneralModel general_;
  std::shared_ptr<const MixtureScorer> scorer_;
};

/// One piece of a prediction set: a closed ball {||y - c|| <= radius} or a
/// closed ellipsoid {(y - mu)^T Sigma^{-1} (y - mu) <= r2}. A component whose
/// squared radius came out negative is `empty` and contains nothing.
struct Component {
  enum class Shape { ball, ellipsoid };

  Shape shape = Shape::ball;
  Vector center;
  double radius = 0.0;  // ball radius, or sqrt(r2) for ellipsoids
  double r2 = 0.0;      // squared (Mahalanobis) radius
  bool empty = false;
  std::shared_ptr<const GaussianComponent> gaussian;  // ellipsoids only

  static Component ball(Vector center, double radius);
  static Component ellipsoid(std::shared_ptr<const GaussianComponent> g, double r2);

  bool contains(const PointRef& y) const;
  /// Squared distance in units of the component's own radius (<= 1 inside).
  double normalized_sq(const PointRef& y) const;
  /// Axis-aligned bounding box; only meaningful when !empty.
  Box bounds() const;
  /// Radius of a ball about `center` that encloses the component.
  double enclosing_radius() const;
  const Matrix& shape_matrix() const { return gaussian->covariance(); }
};

/// Union of balls or ellipsoids that equals {y : residual(y) <= threshold}.
struct PredictionSet {
  double alpha = 0.1;
  double threshold = 0.0;
  Residual residual;
  std::vector<Component> components;

  std::size_t dim() const { return residual.dim(); }
  /// Membership through the explicit geometry.
  bool contains(const PointRef& y) const;
  /// Membership through the residual: residual(y) <= threshold.
  bool residual_contains(const PointRef& y) const { return residual(y) <= threshold; }
  std::size_t nonempty_count() const;
};

/// The ceil((m+1)(1-alpha))-th smallest of m residuals, or +inf when that rank
/// exceeds m.
double conformal_quantile(std::vector<double> residuals, double alpha);

/// Invert {residual <= threshold} into explicit components.
PredictionSet make_prediction_set(Residual residual, double threshold, double alpha);

/// Split-conformal set from a residual fitted on the first half: threshold is
/// the conformal quantile of the residuals over `calib`.
PredictionSet calibrate(Residual residual, const Dataset& calib, double alpha);

/// k-means centers to k balls: equal radii (weighted = false) or per-ball radii
/// sigma_j sqrt([t + 2 log pi_j - 2d log sigma_j]_+) (weighted = true).
PredictionSet k_spheres(const SphereModel& model, const Dataset& calib, double alpha, bool weighted);

/// Gaussian-component model to a union of ellipsoids under one of the
/// gmm_inverse_density, gmm_log_form or maxmix_score residuals.
PredictionSet k_ellipsoids(const GeneralModel& model, const Dataset& calib, double alpha,
                           ResidualKind kind);

/// Full-conformal p-value of y: the builder maps the augmented dataset
/// (data followed by y) to its n+1 residuals and must be invariant to
/// permutations of that dataset.
using ResidualBuilder = std::function<std::vector<double>(const Dataset&)>;
double full_conformal_pvalue(const Dataset& data, const PointRef& y, const ResidualBuilder& builder);

/// R_i = ||Y_i - mean of the augmented data||.
std::vector<double> mean_distance_residuals(const Dataset& augmented);

}  // namespace confclust
