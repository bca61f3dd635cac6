#include "confclust/levelset.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace confclust {

double kth_neighbor_distance(const Dataset& reference, std::size_t k_nn, const PointRef& query,
                             std::size_t exclude) {
  if (reference.empty()) throw std::invalid_argument("knn: empty reference set");
  if (static_cast<std::size_t>(query.size()) != reference.d()) throw std::invalid_argument("knn: dimension mismatch");
  const std::size_t available = reference.n() - (exclude < reference.n() ? 1 : 0);
  if (k_nn == 0 || k_nn > available) throw std::invalid_argument("knn: k_nn must be in [1, reference size]");
  std::vector<double> dist;
  dist.reserve(reference.n());
  for (std::size_t i = 0; i < reference.n(); ++i)
    if (i != exclude) dist.push_back((reference.point(i) - query).norm());
  std::nth_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k_nn - 1), dist.end());
  return dist[k_nn - 1];
}

namespace {

double density_from_distance(std::size_t k_nn, std::size_t n, double dk) {
  if (dk == 0.0) return kInf;
  return static_cast<double>(k_nn) / (static_cast<double>(n) * dk);
}

}  // namespace

double knn_density(const Dataset& reference, std::size_t k_nn, const PointRef& query) {
  return density_from_distance(k_nn, reference.n(), kth_neighbor_distance(reference, k_nn, query));
}

KnnDensity fit_knn_density(const Dataset& reference, std::size_t k_nn) {
  KnnDensity out{reference, k_nn, {}};
  out.values.resize(reference.n());
  for (std::size_t i = 0; i < reference.n(); ++i)
    out.values[i] =
        density_from_distance(k_nn, reference.n(), kth_neighbor_distance(reference, k_nn, reference.point(i), i));
  return out;
}

double level_from_quantile(const KnnDensity& density, double q) {
  if (density.values.empty()) throw std::invalid_argument("level_from_quantile: no density values");
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("level_from_quantile: q must be in (0,1)");
  std::vector<double> v = density.values;
  std::sort(v.begin(), v.end());
  const double m = static_cast<double>(v.size());
  const auto rank = static_cast<std::size_t>(std::max(1.0, std::ceil(q * m - 1e-9)));
  return v[std::min(rank, v.size()) - 1];
}

LevelSetFit level_set_fit(const SplitPair& split, std::size_t k_nn, const LevelSpec& level, double alpha,
                          bool adaptive) {
  const KnnDensity density = fit_knn_density(split.fit_half, k_nn);
  LevelSetFit fit;
  LevelSetModel& m = fit.model;
  m.k_nn = k_nn;
  m.adaptive = adaptive;
  m.level = std::holds_alternative<double>(level) ? std::get<double>(level)
                                                   : level_from_quantile(density, std::get<LevelQuantile>(level).q);
  for (std::size_t i = 0; i < density.values.size(); ++i) {
    if (density.values[i] >= m.level) {
      m.kept.push_back(i);
      m.kept_points.emplace_back(split.fit_half.point(i));
      m.kept_densities.push_back(density.values[i]);
    }
  }
  if (m.kept.empty()) {
    std::ostringstream msg;
    msg << "level set is empty: no fitting point has density >= " << m.level;
    throw std::invalid_argument(msg.str());
  }
  Residual residual = adaptive ? Residual::nearest_point(m.kept_points, m.kept_densities)
                               : Residual::nearest_point(m.kept_points);
  fit.set = calibrate(std::move(residual), split.calib_half, alpha);
  m.radius = fit.set.threshold;
  return fit;
}

PredictionSet level_set_spheres(const SplitPair& split, std::size_t k_nn, const LevelSpec& level,
                                double alpha, bool adaptive) {
  return level_set_fit(split, k_nn, level, alpha, adaptive).set;
}

}  // namespace confclust
