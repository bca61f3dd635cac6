#include "confclust/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "confclust/gaussian.hpp"

namespace confclust {

namespace {

void check_k(const Dataset& data, std::size_t k) {
  if (k == 0) throw std::invalid_argument("k must be >= 1");
  if (k > data.n()) throw std::invalid_argument("k must not exceed the number of points");
}

bool converged(double prev, double cur, double tol) {
  return prev - cur <= tol * std::abs(prev);
}

struct Assignment {
  std::vector<std::size_t> labels;
  std::vector<double> dist2;
  double objective = 0.0;
};

Assignment assign_nearest(const Dataset& data, const std::vector<Vector>& centers) {
  Assignment a;
  a.labels.resize(data.n());
  a.dist2.resize(data.n());
  double total = 0.0;
  for (std::size_t i = 0; i < data.n(); ++i) {
    const auto y = data.point(i);
    double best = kInf;
    std::size_t arg = 0;
    for (std::size_t j = 0; j < centers.size(); ++j) {
      const double d2 = (y - centers[j]).squaredNorm();
      if (d2 < best) {
        best = d2;
        arg = j;
      }
    }
    a.labels[i] = arg;
    a.dist2[i] = best;
    total += best;
  }
  a.objective = total / static_cast<double>(data.n());
  return a;
}

SphereFit lloyd_once(const Dataset& data, std::size_t k, const FitOptions& opts, Rng& rng) {
  std::vector<Vector> centers;
  for (std::size_t idx : kmeanspp_seeds(data, k, rng)) centers.emplace_back(data.point(idx));

  SphereFit fit;
  Assignment a;
  double prev = kInf;
  const std::size_t max_iter = std::max<std::size_t>(opts.max_iter, 1);
  for (std::size_t iter = 0;; ++iter) {
    a = assign_nearest(data, centers);
    fit.trace.push_back(a.objective);
    if (iter > 0 && converged(prev, a.objective, opts.tol)) break;
    if (iter == max_iter) break;
    prev = a.objective;

    std::vector<Vector> sums(k, Vector::Zero(static_cast<Eigen::Index>(data.d())));
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < data.n(); ++i) {
      sums[a.labels[i]] += data.point(i);
      ++counts[a.labels[i]];
    }
    std::vector<double> residual = a.dist2;
    for (std::size_t j = 0; j < k; ++j) {
      if (counts[j] > 0) {
        centers[j] = sums[j] / static_cast<double>(counts[j]);
      } else {
        const auto far = static_cast<std::size_t>(
            std::max_element(residual.begin(), residual.end()) - residual.begin());
        centers[j] = data.point(far);
        residual[far] = 0.0;
      }
    }
  }

  SphereModel& m = fit.model;
  m.centers = centers;
  m.sigmas.assign(k, 0.0);
  m.weights.assign(k, 0.0);
  m.counts.assign(k, 0);
  std::vector<Vector> means(k, Vector::Zero(static_cast<Eigen::Index>(data.d())));
  for (std::size_t i = 0; i < data.n(); ++i) {
    means[a.labels[i]] += data.point(i);
    ++m.counts[a.labels[i]];
  }
  for (std::size_t j = 0; j < k; ++j)
    if (m.counts[j] > 0) means[j] /= static_cast<double>(m.counts[j]);
  for (std::size_t i = 0; i < data.n(); ++i)
    m.sigmas[a.labels[i]] += (data.point(i) - means[a.labels[i]]).squaredNorm();
  for (std::size_t j = 0; j < k; ++j) {
    if (m.counts[j] > 0) m.sigmas[j] = std::sqrt(m.sigmas[j] / static_cast<double>(m.counts[j]));
    m.weights[j] = static_cast<double>(m.counts[j]) / static_cast<double>(data.n());
  }
  fit.labels = std::move(a.labels);
  fit.objective = a.objective;
  return fit;
}

}  // namespace

std::vector<std::size_t> kmeanspp_seeds(const Dataset& data, std::size_t k, Rng& rng) {
  check_k(data, k);
  std::vector<std::size_t> seeds;
  seeds.push_back(rng.index(data.n()));
  std::vector<double> d2(data.n(), kInf);
  while (seeds.size() < k) {
    const Vector last = data.point(seeds.back());
    double total = 0.0;
    for (std::size_t i = 0; i < data.n(); ++i) {
      d2[i] = std::min(d2[i], (data.point(i) - last).squaredNorm());
      total += d2[i];
    }
    // All remaining points coincide with a seed: fall back to a uniform pick.
    seeds.push_back(total > 0.0 ? rng.categorical(d2) : rng.index(data.n()));
  }
  return seeds;
}

std::vector<std::size_t> nearest_center(const Dataset& data, const std::vector<Vector>& centers) {
  if (centers.empty()) throw std::invalid_argument("nearest_center: no centers");
  if (static_cast<std::size_t>(centers.front().size()) != data.d())
    throw std::invalid_argument("nearest_center: dimension mismatch");
  return assign_nearest(data, centers).labels;
}

SphereFit lloyd_fit(const Dataset& data, std::size_t k, const FitOptions& opts) {
  check_k(data, k);
  SphereFit best;
  best.objective = kInf;
  for (std::size_t r = 0; r < std::max<std::size_t>(opts.restarts, 1); ++r) {
    Rng rng(opts.seed, 0x11d0000 + r);
    SphereFit fit = lloyd_once(data, k, opts, rng);
    if (fit.objective < best.objective) best = std::move(fit);
  }
  return best;
}

SphereModel lloyd(const Dataset& data, std::size_t k, const FitOptions& opts) {
  return lloyd_fit(data, k, opts).model;
}

double within_ss(const Dataset& data, const SphereModel& model) {
  if (model.k() == 0) throw std::invalid_argument("within_ss: empty model");
  if (model.d() != data.d()) throw std::invalid_argument("within_ss: dimension mismatch");
  return assign_nearest(data, model.centers).objective;
}

GeneralModel moments_from_labels(const Dataset& data, const std::vector<std::size_t>& labels,
                                 const std::vector<Vector>& fallback_means, double scale) {
  const std::size_t k = fallback_means.size();
  const auto d = static_cast<Eigen::Index>(data.d());
  GeneralModel m;
  m.weights.assign(k, 0.0);
  m.means.assign(k, Vector::Zero(d));
  m.covariances.assign(k, Matrix::Zero(d, d));
  std::vector<std::size_t> counts(k, 0);
  for (std::size_t i = 0; i < data.n(); ++i) {
    m.means[labels[i]] += data.point(i);
    ++counts[labels[i]];
  }
  for (std::size_t j = 0; j < k; ++j) {
    if (counts[j] > 0) m.means[j] /= static_cast<double>(counts[j]);
    else m.means[j] = fallback_means[j];
  }
  for (std::size_t i = 0; i < data.n(); ++i) {
    const Vector c = data.point(i) - m.means[labels[i]];
    m.covariances[labels[i]].noalias() += c * c.transpose();
  }
  for (std::size_t j = 0; j < k; ++j) {
    if (counts[j] > 0) {
      m.covariances[j] /= static_cast<double>(counts[j]);
      regularize_covariance(m.covariances[j], scale);
    } else {
      m.covariances[j] = scale * Matrix::Identity(d, d);
    }
    m.weights[j] = static_cast<double>(counts[j]) / static_cast<double>(data.n());
  }
  return m;
}

std::vector<std::size_t> assign_general(const Dataset& data, const GeneralModel& model) {
  const MixtureScorer scorer(model);
  if (scorer.dim() != data.d()) throw std::invalid_argument("assign_general: dimension mismatch");
  std::vector<std::size_t> labels(data.n());
  for (std::size_t i = 0; i < data.n(); ++i) labels[i] = scorer.best(data.point(i)).first;
  return labels;
}

double ell_km(const Dataset& data, const GeneralModel& model) {
  const MixtureScorer scorer(model);
  if (scorer.dim() != data.d()) throw std::invalid_argument("ell_km: dimension mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < data.n(); ++i) total += scorer.best(data.point(i)).second;
  return total / static_cast<double>(data.n());
}

GeneralFit generalized_lloyd_fit(const Dataset& data, std::size_t k, const FitOptions& opts) {
  check_k(data, k);
  const double scale = data_scale(data);
  GeneralFit best;
  best.objective = kInf;
  for (std::size_t r = 0; r < std::max<std::size_t>(opts.restarts, 1); ++r) {
    Rng rng(opts.seed, 0x61d0000 + r);
    std::vector<Vector> seeds;
    for (std::size_t idx : kmeanspp_seeds(data, k, rng)) seeds.emplace_back(data.point(idx));
    GeneralFit fit;
    fit.model = moments_from_labels(data, nearest_center(data, seeds), seeds, scale);

    double prev = kInf;
    const std::size_t max_iter = std::max<std::size_t>(opts.max_iter, 1);
    for (std::size_t iter = 0;; ++iter) {
      const MixtureScorer scorer(fit.model);
      double total = 0.0;
      std::vector<std::size_t> labels(data.n());
      for (std::size_t i = 0; i < data.n(); ++i) {
        const auto [j, s] = scorer.best(data.point(i));
        labels[i] = j;
        total += s;
      }
      const double obj = total / static_cast<double>(data.n());
      fit.trace.push_back(obj);
      const bool same = labels == fit.labels;
      fit.labels = std::move(labels);
      fit.objective = obj;
      if (iter > 0 && (same || converged(prev, obj, opts.tol))) break;
      if (iter == max_iter) break;
      prev = obj;
      fit.model = moments_from_labels(data, fit.labels, fit.model.means, scale);
    }
    if (fit.objective < best.objective) best = std::move(fit);
  }
  return best;
}

GeneralModel generalized_lloyd(const Dataset& data, std::size_t k, const FitOptions& opts) {
  return generalized_lloyd_fit(data, k, opts).model;
}

}  // namespace confclust
