#include "confclust/conformal.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace confclust {

namespace {

constexpr std::array<std::pair<ResidualKind, std::string_view>, 7> kKindNames{{
    {ResidualKind::plain_distance, "plain_distance"},
    {ResidualKind::weighted_sphere, "weighted_sphere"},
    {ResidualKind::gmm_inverse_density, "gmm_inverse_density"},
    {ResidualKind::gmm_log_form, "gmm_log_form"},
    {ResidualKind::maxmix_score, "maxmix_score"},
    {ResidualKind::levelset_distance, "levelset_distance"},
    {ResidualKind::levelset_adaptive, "levelset_adaptive"},
}};

double safe_log(double x) { return x > 0.0 ? std::log(x) : -kInf; }

}  // namespace

std::string_view to_string(ResidualKind kind) {
  for (const auto& [k, name] : kKindNames)
    if (k == kind) return name;
  return "unknown";
}

ResidualKind residual_kind_from_string(std::string_view name) {
  for (const auto& [k, n] : kKindNames)
    if (n == name) return k;
  throw std::invalid_argument("unknown residual kind '" + std::string(name) + "'");
}

bool is_ellipsoidal(ResidualKind kind) {
  return kind == ResidualKind::gmm_inverse_density || kind == ResidualKind::gmm_log_form ||
         kind == ResidualKind::maxmix_score;
}

Residual Residual::plain_distance(std::vector<Vector> centers) {
  if (centers.empty()) throw std::invalid_argument("Residual: no centers");
  Residual r;
  r.kind_ = ResidualKind::plain_distance;
  r.centers_ = std::move(centers);
  return r;
}

Residual Residual::weighted_sphere(const SphereModel& model) {
  if (model.k() == 0) throw std::invalid_argument("Residual: empty sphere model");
  if (model.sigmas.size() != model.k() || model.weights.size() != model.k())
    throw std::invalid_argument("Residual: inconsistent sphere model");
  Residual r;
  r.kind_ = ResidualKind::weighted_sphere;
  r.centers_ = model.centers;
  r.sigmas_ = model.sigmas;
  r.weights_ = model.weights;
  return r;
}

Residual Residual::gaussian(ResidualKind kind, const GeneralModel& model) {
  if (!is_ellipsoidal(kind)) throw std::invalid_argument("Residual::gaussian: not an ellipsoidal kind");
  Residual r;
  r.kind_ = kind;
  r.general_ = model;
  r.weights_ = model.weights;
  r.centers_ = model.means;
  r.scorer_ = std::make_shared<const MixtureScorer>(model);
  return r;
}

Residual Residual::nearest_point(std::vector<Vector> points, std::vector<double> densities) {
  if (points.empty()) throw std::invalid_argument("Residual: no kept points");
  if (!densities.empty() && densities.size() != points.size())
    throw std::invalid_argument("Residual: densities do not match points");
  Residual r;
  r.kind_ = densities.empty() ? ResidualKind::levelset_distance : ResidualKind::levelset_adaptive;
  r.centers_ = std::move(points);
  r.densities_ = std::move(densities);
  return r;
}

std::size_t Residual::dim() const {
  return centers_.empty() ? 0 : static_cast<std::size_t>(centers_.front().size());
}

std::size_t Residual::size() const { return centers_.size(); }

double Residual::term(std::size_t j, const PointRef& y) const {
  switch (kind_) {
    case ResidualKind::plain_distance:
    case ResidualKind::levelset_distance:
      return (y - centers_[j]).norm();
    case ResidualKind::weighted_sphere: {
      if (!(weights_[j] > 0.0)) return kInf;
      const double dist2 = (y - centers_[j]).squaredNorm();
      if (sigmas_[j] == 0.0) return dist2 == 0.0 ? -kInf : kInf;
      const double d = static_cast<double>(dim());
      return dist2 / (sigmas_[j] * sigmas_[j]) + 2.0 * d * std::log(sigmas_[j]) -
             2.0 * std::log(weights_[j]);
    }
    case ResidualKind::levelset_adaptive: {
      const double dist = (y - centers_[j]).norm();
      if (std::isinf(densities_[j])) return dist == 0.0 ? 0.0 : kInf;
      return dist * std::sqrt(densities_[j]);
    }
    case ResidualKind::gmm_log_form:
      return scorer_->score(j, y);
    case ResidualKind::maxmix_score: {
      const double lw = scorer_->log_weight(j);
      if (lw == -kInf) return kInf;
      const auto& g = scorer_->component(j);
      return g.mahalanobis_sq(y) + g.log_det() - 2.0 * lw;
    }
    case ResidualKind::gmm_inverse_density: {
      const double lw = scorer_->log_weight(j);
      if (lw == -kInf) return kInf;
      return std::exp(-(lw + scorer_->component(j).log_density(y)));
    }
  }
  return kInf;
}

double Residual::operator()(const PointRef& y) const {
  if (static_cast<std::size_t>(y.size()) != dim()) throw std::invalid_argument("Residual: dimension mismatch");
  double best = kInf;
  for (std::size_t j = 0; j < size(); ++j) best = std::min(best, term(j, y));
  return best;
}

std::vector<double> Residual::evaluate(const Dataset& data) const {
  std::vector<double> out(data.n());
  for (std::size_t i = 0; i < data.n(); ++i) out[i] = (*this)(data.point(i));
  return out;
}

Component Component::ball(Vector center, double radius) {
  Component c;
  c.shape = Shape::ball;
  c.center = std::move(center);
  c.empty = !(radius >= 0.0);
  c.radius = c.empty ? 0.0 : radius;
  c.r2 = c.radius * c.radius;
  return c;
}

Component Component::ellipsoid(std::shared_ptr<const GaussianComponent> g, double r2) {
  Component c;
  c.shape = Shape::ellipsoid;
  c.center = g->mean();
  c.gaussian = std::move(g);
  c.empty = !(r2 >= 0.0);
  c.r2 = c.empty ? 0.0 : r2;
  c.radius = std::sqrt(c.r2);
  return c;
}

bool Component::contains(const PointRef& y) const {
  if (empty) return false;
  if (shape == Shape::ball) return (y - center).norm() <= radius;
  return gaussian->mahalanobis_sq(y) <= r2;
}

double Component::normalized_sq(const PointRef& y) const {
  if (empty) return kInf;
  const double q = shape == Shape::ball ? (y - center).squaredNorm() : gaussian->mahalanobis_sq(y);
  if (r2 == 0.0) return q == 0.0 ? 0.0 : kInf;
  return q / r2;
}

Box Component::bounds() const {
  Vector half;
  if (shape == Shape::ball) {
    half = Vector::Constant(center.size(), radius);
  } else {
    half = (r2 * gaussian->covariance().diagonal().array()).sqrt().matrix();
  }
  return Box{center - half, center + half};
}

double Component::enclosing_radius() const {
  if (shape == Shape::ball) return radius;
  return std::sqrt(r2 * gaussian->max_eigenvalue());
}

bool PredictionSet::contains(const PointRef& y) const {
  if (static_cast<std::size_t>(y.size()) != dim())
    throw std::invalid_argument("PredictionSet: dimension mismatch");
  return std::any_of(components.begin(), components.end(),
                     [&](const Component& c) { return c.contains(y); });
}

std::size_t PredictionSet::nonempty_count() const {
  return static_cast<std::size_t>(
      std::count_if(components.begin(), components.end(), [](const Component& c) { return !c.empty; }));
}

double conformal_quantile(std::vector<double> residuals, double alpha) {
  if (residuals.empty()) throw std::invalid_argument("conformal_quantile: no residuals");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("conformal_quantile: alpha must be in (0,1)");
  const double m = static_cast<double>(residuals.size());
  // Guard against (m+1)(1-alpha) landing a hair above an integer.
  const double rank = std::ceil((m + 1.0) * (1.0 - alpha) - 1e-9);
  if (rank > m) return kInf;
  const auto idx = static_cast<std::size_t>(std::max(rank, 1.0)) - 1;
  std::nth_element(residuals.begin(), residuals.begin() + static_cast<std::ptrdiff_t>(idx), residuals.end());
  return residuals[idx];
}

PredictionSet make_prediction_set(Residual residual, double threshold, double alpha) {
  PredictionSet set;
  set.alpha = alpha;
  set.threshold = threshold;
  const double t = threshold;
  const double d = static_cast<double>(residual.dim());
  for (std::size_t j = 0; j < residual.size(); ++j) {
    const Vector& c = residual.centers()[j];
    switch (residual.kind()) {
      case ResidualKind::plain_distance:
      case ResidualKind::levelset_distance:
        set.components.push_back(Component::ball(c, t >= 0.0 ? t : -1.0));
        break;
      case ResidualKind::weighted_sphere: {
        const double w = residual.weights()[j];
        const double s = residual.sigmas()[j];
        if (!(w > 0.0)) {
          set.components.push_back(Component::ball(c, -1.0));
        } else if (s == 0.0) {
          set.components.push_back(Component::ball(c, 0.0));
        } else {
          const double bracket = t + 2.0 * std::log(w) - 2.0 * d * std::log(s);
          set.components.push_back(Component::ball(c, bracket >= 0.0 ? s * std::sqrt(bracket) : -1.0));
        }
        break;
      }
      case ResidualKind::levelset_adaptive: {
        const double p = residual.densities()[j];
        if (t < 0.0) set.components.push_back(Component::ball(c, -1.0));
        else if (std::isinf(p)) set.components.push_back(Component::ball(c, 0.0));
        else set.components.push_back(Component::ball(c, t / std::sqrt(p)));
        break;
      }
      case ResidualKind::gmm_log_form:
      case ResidualKind::maxmix_score:
      case ResidualKind::gmm_inverse_density: {
        const auto& g = residual.scorer().component(j);
        const double lw = residual.scorer().log_weight(j);
        double r2 = -1.0;
        if (lw != -kInf) {
          if (residual.kind() == ResidualKind::gmm_log_form) {
            r2 = 2.0 * t - g.log_det() + 2.0 * lw;
          } else if (residual.kind() == ResidualKind::maxmix_score) {
            r2 = t - g.log_det() + 2.0 * lw;
          } else {
            r2 = 2.0 * (safe_log(t) + lw - 0.5 * d * std::log(2.0 * std::numbers::pi) - 0.5 * g.log_det());
          }
        }
        if (std::isnan(r2)) r2 = -1.0;
        set.components.push_back(
            Component::ellipsoid(std::make_shared<const GaussianComponent>(g), r2));
        break;
      }
    }
  }
  set.residual = std::move(residual);
  return set;
}

PredictionSet calibrate(Residual residual, const Dataset& calib, double alpha) {
  if (calib.d() != residual.dim()) throw std::invalid_argument("calibrate: dimension mismatch");
  const double t = conformal_quantile(residual.evaluate(calib), alpha);
  return make_prediction_set(std::move(residual), t, alpha);
}

PredictionSet k_spheres(const SphereModel& model, const Dataset& calib, double alpha, bool weighted) {
  if (model.d() != calib.d()) throw std::invalid_argument("k_spheres: dimension mismatch");
  return calibrate(weighted ? Residual::weighted_sphere(model) : Residual::plain_distance(model.centers),
                   calib, alpha);
}

PredictionSet k_ellipsoids(const GeneralModel& model, const Dataset& calib, double alpha,
                           ResidualKind kind) {
  if (model.d() != calib.d()) throw std::invalid_argument("k_ellipsoids: dimension mismatch");
  return calibrate(Residual::gaussian(kind, model), calib, alpha);
}

double full_conformal_pvalue(const Dataset& data, const PointRef& y, const ResidualBuilder& builder) {
  if (static_cast<std::size_t>(y.size()) != data.d())
    throw std::invalid_argument("full_conformal_pvalue: dimension mismatch");
  RowMatrix aug(static_cast<Eigen::Index>(data.n() + 1), static_cast<Eigen::Index>(data.d()));
  aug.topRows(static_cast<Eigen::Index>(data.n())) = data.matrix();
  aug.row(static_cast<Eigen::Index>(data.n())) = y.transpose();
  const std::vector<double> r = builder(Dataset(std::move(aug)));
  if (r.size() != data.n() + 1) throw std::invalid_argument("full_conformal_pvalue: builder returned wrong count");
  const double last = r.back();
  const auto count = std::count_if(r.begin(), r.end(), [&](double v) { return v >= last; });
  return static_cast<double>(count) / static_cast<double>(r.size());
}

std::vector<double> mean_distance_residuals(const Dataset& augmented) {
  const Vector mean = augmented.mean();
  std::vector<double> r(augmented.n());
  for (std::size_t i = 0; i < augmented.n(); ++i) r[i] = (augmented.point(i) - mean).norm();
  return r;
}

}  // namespace confclust
