#include "confclust/gaussian.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace confclust {

void regularize_covariance(Matrix& s, double fallback_scale) {
  const double d = static_cast<double>(s.rows());
  s = 0.5 * (s + s.transpose()).eval();
  double eps = 1e-8 * s.trace() / d;
  if (!(eps > 0.0)) eps = 1e-8 * (fallback_scale > 0.0 ? fallback_scale : 1.0);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(s, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < eps) s.diagonal().array() += eps;
}

double data_scale(const Dataset& data) {
  const RowMatrix centered = data.matrix().rowwise() - data.matrix().colwise().mean();
  const double tr = centered.squaredNorm() / static_cast<double>(data.n()) / static_cast<double>(data.d());
  return tr > 0.0 ? tr : 1.0;
}

GaussianComponent::GaussianComponent(Vector mean, const Matrix& covariance)
    : mean_(std::move(mean)), covariance_(covariance) {
  if (covariance.rows() != mean_.size() || covariance.cols() != mean_.size())
    throw std::invalid_argument("GaussianComponent: covariance shape does not match mean");
  Eigen::LLT<Matrix> llt(covariance);
  if (llt.info() != Eigen::Success) throw std::domain_error("GaussianComponent: covariance is singular");
  lower_ = llt.matrixL();
  const Vector diag = lower_.diagonal();
  if (!(diag.array() > 0.0).all()) throw std::domain_error("GaussianComponent: covariance is singular");
  log_det_ = 2.0 * diag.array().log().sum();
  if (!std::isfinite(log_det_)) throw std::domain_error("GaussianComponent: covariance is singular");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(covariance, Eigen::EigenvaluesOnly);
  max_eig_ = eig.eigenvalues().maxCoeff();
}

double GaussianComponent::mahalanobis_sq(const PointRef& y) const {
  Vector z = y - mean_;
  lower_.triangularView<Eigen::Lower>().solveInPlace(z);
  return z.squaredNorm();
}

double GaussianComponent::log_density(const PointRef& y) const {
  const double d = static_cast<double>(dim());
  return -0.5 * mahalanobis_sq(y) - 0.5 * log_det_ - 0.5 * d * std::log(2.0 * std::numbers::pi);
}

MixtureScorer::MixtureScorer(const GeneralModel& model) {
  if (model.k() == 0) throw std::invalid_argument("MixtureScorer: empty model");
  if (model.weights.size() != model.k() || model.covariances.size() != model.k())
    throw std::invalid_argument("MixtureScorer: inconsistent component counts");
  components_.reserve(model.k());
  log_weights_.reserve(model.k());
  for (std::size_t j = 0; j < model.k(); ++j) {
    if (model.means[j].size() != model.means.front().size())
      throw std::invalid_argument("MixtureScorer: components differ in dimension");
    if (model.weights[j] < 0.0) throw std::invalid_argument("MixtureScorer: negative weight");
    components_.emplace_back(model.means[j], model.covariances[j]);
    log_weights_.push_back(model.weights[j] > 0.0 ? std::log(model.weights[j]) : -kInf);
  }
}

double MixtureScorer::score(std::size_t j, const PointRef& y) const {
  if (log_weights_[j] == -kInf) return kInf;
  const auto& c = components_[j];
  return 0.5 * c.mahalanobis_sq(y) + 0.5 * c.log_det() - log_weights_[j];
}

std::pair<std::size_t, double> MixtureScorer::best(const PointRef& y) const {
  std::size_t arg = 0;
  double min = kInf;
  for (std::size_t j = 0; j < k(); ++j) {
    const double s = score(j, y);
    if (s < min) {
      min = s;
      arg = j;
    }
  }
  return {arg, min};
}

double MixtureScorer::log_sum_exp_neg(const PointRef& y) const {
  std::vector<double> terms(k());
  double top = -kInf;
  for (std::size_t j = 0; j < k(); ++j) {
    terms[j] = -score(j, y);
    top = std::max(top, terms[j]);
  }
  if (top == -kInf) return -kInf;
  double acc = 0.0;
  for (double t : terms) acc += std::exp(t - top);
  return top + std::log(acc);
}

}  // namespace confclust
