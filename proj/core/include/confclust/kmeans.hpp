#pragma once

#include <cstdint>
#include <vector>

#include "confclust/models.hpp"
#include "confclust/rng.hpp"

namespace confclust {

struct FitOptions {
  std::size_t restarts = 10;
  std::size_t max_iter = 200;
  double tol = 1e-8;  // relative objective decrease
  std::uint64_t seed = 0;
};

/// Result of one fitting call. `trace` holds the objective after every
/// assignment step of the winning restart; `labels` is its final assignment.
template <class Model>
struct Fit {
  Model model;
  std::vector<std::size_t> labels;
  std::vector<double> trace;
  double objective = 0.0;
};

using SphereFit = Fit<SphereModel>;
using GeneralFit = Fit<GeneralModel>;

/// k-means++ (D^2) seeding. Returns k row indices of `data`.
std::vector<std::size_t> kmeanspp_seeds(const Dataset& data, std::size_t k, Rng& rng);

/// Lloyd's algorithm with k-means++ seeding, best of opts.restarts runs.
/// An empty cluster is re-seeded at the point with the largest current residual.
SphereFit lloyd_fit(const Dataset& data, std::size_t k, const FitOptions& opts = {});
SphereModel lloyd(const Dataset& data, std::size_t k, const FitOptions& opts = {});

/// R(k) = (1/n) sum_i min_j ||Y_i - c_j||^2
double within_ss(const Dataset& data, const SphereModel& model);

/// Nearest-center labels, ties to the lowest index.
std::vector<std::size_t> nearest_center(const Dataset& data, const std::vector<Vector>& centers);

/// Generalized Lloyd iterations on the max-mixture surrogate l_kM: hard
/// assignment by the penalized Mahalanobis score, then weighted mean,
/// covariance (MLE normalization, ridge floor) and share updates.
GeneralFit generalized_lloyd_fit(const Dataset& data, std::size_t k, const FitOptions& opts = {});
GeneralModel generalized_lloyd(const Dataset& data, std::size_t k, const FitOptions& opts = {});

/// l_kM(theta) = (1/n) sum_i min_j [ 1/2 maha_j + 1/2 log det Sigma_j - log pi_j ]
double ell_km(const Dataset& data, const GeneralModel& model);

/// Hard assignment used by generalized Lloyd (argmin of the score, lowest index on ties).
std::vector<std::size_t> assign_general(const Dataset& data, const GeneralModel& model);

/// MLE mean/covariance/share of each labelled group; groups without points get
/// zero weight and keep the fallback mean with an isotropic covariance.
GeneralModel moments_from_labels(const Dataset& data, const std::vector<std::size_t>& labels,
                                 const std::vector<Vector>& fallback_means, double scale);

}  // namespace confclust
