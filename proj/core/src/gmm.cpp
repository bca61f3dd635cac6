#include "confclust/gmm.hpp"

#include <cmath>
#include <stdexcept>

#include "confclust/gaussian.hpp"

namespace confclust {

namespace {

// E-step; returns l_GM at the current parameters.
double e_step(const Dataset& data, const MixtureScorer& scorer, Matrix& resp) {
  const std::size_t k = scorer.k();
  resp.resize(static_cast<Eigen::Index>(data.n()), static_cast<Eigen::Index>(k));
  double total = 0.0;
  for (std::size_t i = 0; i < data.n(); ++i) {
    const auto y = data.point(i);
    const double lse = scorer.log_sum_exp_neg(y);
    for (std::size_t j = 0; j < k; ++j)
      resp(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = std::exp(-scorer.score(j, y) - lse);
    total -= lse;
  }
  return total / static_cast<double>(data.n());
}

void m_step(const Dataset& data, const Matrix& resp, double scale, GeneralModel& model) {
  const auto d = static_cast<Eigen::Index>(data.d());
  const double n = static_cast<double>(data.n());
  for (std::size_t j = 0; j < model.k(); ++j) {
    const auto col = resp.col(static_cast<Eigen::Index>(j));
    const double nj = col.sum();
    if (!(nj > 1e-12 * n)) {
      model.weights[j] = 0.0;
      continue;
    }
    Vector mu = Vector::Zero(d);
    for (std::size_t i = 0; i < data.n(); ++i) mu += col[static_cast<Eigen::Index>(i)] * data.point(i);
    mu /= nj;
    Matrix cov = Matrix::Zero(d, d);
    for (std::size_t i = 0; i < data.n(); ++i) {
      const Vector c = data.point(i) - mu;
      cov.noalias() += col[static_cast<Eigen::Index>(i)] * (c * c.transpose());
    }
    cov /= nj;
    regularize_covariance(cov, scale);
    model.means[j] = std::move(mu);
    model.covariances[j] = std::move(cov);
    model.weights[j] = nj / n;
  }
}

}  // namespace

double ell_gm(const Dataset& data, const GeneralModel& model) {
  const MixtureScorer scorer(model);
  if (scorer.dim() != data.d()) throw std::invalid_argument("ell_gm: dimension mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < data.n(); ++i) total -= scorer.log_sum_exp_neg(data.point(i));
  return total / static_cast<double>(data.n());
}

Matrix responsibilities(const Dataset& data, const GeneralModel& model) {
  const MixtureScorer scorer(model);
  if (scorer.dim() != data.d()) throw std::invalid_argument("responsibilities: dimension mismatch");
  Matrix resp;
  e_step(data, scorer, resp);
  return resp;
}

GeneralFit em_fit_traced(const Dataset& data, std::size_t k, const FitOptions& opts) {
  if (k == 0) throw std::invalid_argument("em_fit: k must be >= 1");
  if (k > data.n()) throw std::invalid_argument("em_fit: k must not exceed the number of points");
  const double scale = data_scale(data);
  GeneralFit best;
  best.objective = kInf;
  for (std::size_t r = 0; r < std::max<std::size_t>(opts.restarts, 1); ++r) {
    FitOptions init = opts;
    init.restarts = 1;
    init.seed = derive_seed(opts.seed, 0xe300 + r);
    const SphereFit start = lloyd_fit(data, k, init);

    GeneralFit fit;
    fit.model = moments_from_labels(data, start.labels, start.model.centers, scale);
    Matrix resp;
    double prev = kInf;
    // Ends on an E-step so the returned model is the one the objective belongs to.
    const std::size_t max_iter = std::max<std::size_t>(opts.max_iter, 1);
    for (std::size_t iter = 0;; ++iter) {
      const double obj = e_step(data, MixtureScorer(fit.model), resp);
      fit.trace.push_back(obj);
      fit.objective = obj;
      if (iter > 0 && prev - obj <= opts.tol * std::abs(prev)) break;
      if (iter == max_iter) break;
      prev = obj;
      m_step(data, resp, scale, fit.model);
    }
    fit.labels.resize(data.n());
    for (std::size_t i = 0; i < data.n(); ++i) {
      Eigen::Index arg;
      resp.row(static_cast<Eigen::Index>(i)).maxCoeff(&arg);
      fit.labels[i] = static_cast<std::size_t>(arg);
    }
    if (fit.objective < best.objective) best = std::move(fit);
  }
  return best;
}

GeneralModel em_fit(const Dataset& data, std::size_t k, const FitOptions& opts) {
  return em_fit_traced(data, k, opts).model;
}

}  // namespace confclust
