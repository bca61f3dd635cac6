#include "confclust/maxmix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "confclust/gaussian.hpp"
#include "confclust/kmeans.hpp"
#include "confclust/rng.hpp"

namespace confclust {

namespace {

// log(pi_j phi_j(y)) for every component.
std::vector<double> weighted_log_densities(const MixtureScorer& scorer, const PointRef& y) {
  std::vector<double> out(scorer.k());
  for (std::size_t j = 0; j < scorer.k(); ++j) {
    const double lw = scorer.log_weight(j);
    out[j] = lw == -kInf ? -kInf : lw + scorer.component(j).log_density(y);
  }
  return out;
}

double log_sum_exp(const std::vector<double>& v) {
  const double top = *std::max_element(v.begin(), v.end());
  if (top == -kInf) return -kInf;
  double acc = 0.0;
  for (double x : v) acc += std::exp(x - top);
  return top + std::log(acc);
}

}  // namespace

double maxmix_unnorm(const GeneralModel& model, const PointRef& y) {
  const MixtureScorer scorer(model);
  if (scorer.dim() != static_cast<std::size_t>(y.size())) throw std::invalid_argument("maxmix_unnorm: dimension mismatch");
  const auto v = weighted_log_densities(scorer, y);
  return std::exp(*std::max_element(v.begin(), v.end()));
}

double mixture_density(const GeneralModel& model, const PointRef& y) {
  const MixtureScorer scorer(model);
  if (scorer.dim() != static_cast<std::size_t>(y.size())) throw std::invalid_argument("mixture_density: dimension mismatch");
  return std::exp(log_sum_exp(weighted_log_densities(scorer, y)));
}

double MaxMixDensity::operator()(const PointRef& y) const { return maxmix_unnorm(model, y) / z.value; }

NormalizerEstimate estimate_z(const GeneralModel& model, std::size_t n_samples, std::uint64_t seed) {
  if (n_samples == 0) throw std::invalid_argument("estimate_z: n_samples must be positive");
  const MixtureScorer scorer(model);
  NormalizerEstimate est;
  est.n_samples = n_samples;
  est.seed = seed;
  est.min_weight = kInf;
  est.max_weight = -kInf;
  Rng rng(seed, 0x2e7a);
  const auto d = static_cast<Eigen::Index>(scorer.dim());
  Vector z(d);
  // Welford running mean and sum of squared deviations.
  double mean = 0.0, m2 = 0.0;
  for (std::size_t s = 0; s < n_samples; ++s) {
    const std::size_t j = rng.categorical(model.weights);
    for (Eigen::Index i = 0; i < d; ++i) z[i] = rng.normal();
    const Vector y = scorer.component(j).transform(z);
    const auto v = weighted_log_densities(scorer, y);
    const double w = std::exp(*std::max_element(v.begin(), v.end()) - log_sum_exp(v));
    est.min_weight = std::min(est.min_weight, w);
    est.max_weight = std::max(est.max_weight, w);
    const double delta = w - mean;
    mean += delta / static_cast<double>(s + 1);
    m2 += delta * (w - mean);
  }
  const double n = static_cast<double>(n_samples);
  est.value = mean;
  const double var = n > 1.0 ? std::max(0.0, m2 / (n - 1.0)) : 0.0;
  est.std_error = std::sqrt(var / n);
  est.log_value = std::log(est.value);
  est.log_std_error = est.std_error / est.value;
  return est;
}

MaxMixDensity make_maxmix_density(const GeneralModel& model, std::size_t n_samples, std::uint64_t seed) {
  return MaxMixDensity{model, estimate_z(model, n_samples, seed)};
}

double ell(const Dataset& data, const GeneralModel& model, std::size_t z_samples, std::uint64_t seed) {
  return ell_km(data, model) + estimate_z(model, z_samples, seed).log_value;
}

}  // namespace confclust
