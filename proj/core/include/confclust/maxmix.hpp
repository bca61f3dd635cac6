#pragma once

#include <cstdint>

#include "confclust/models.hpp"

namespace confclust {

/// Importance-sampling estimate of Z = integral of max_j pi_j phi_j, drawn from
/// the sum mixture sum_j pi_j phi_j. Every weight max/sum lies in [1/k, 1].
struct NormalizerEstimate {
  double value = 1.0;
  double std_error = 0.0;
  double log_value = 0.0;
  double log_std_error = 0.0;  // delta method: std_error / value
  double min_weight = 1.0;
  double max_weight = 1.0;
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
};

/// Max-mixture density p(y) = max_j pi_j phi(y; mu_j, Sigma_j) / Z.
struct MaxMixDensity {
  GeneralModel model;
  NormalizerEstimate z;

  double operator()(const PointRef& y) const;
};

/// max_j pi_j phi(y; mu_j, Sigma_j), evaluated in the log domain.
double maxmix_unnorm(const GeneralModel& model, const PointRef& y);

/// sum_j pi_j phi(y; mu_j, Sigma_j).
double mixture_density(const GeneralModel& model, const PointRef& y);

NormalizerEstimate estimate_z(const GeneralModel& model, std::size_t n_samples, std::uint64_t seed);

MaxMixDensity make_maxmix_density(const GeneralModel& model, std::size_t n_samples, std::uint64_t seed);

/// l(theta) = l_kM(theta) + log Z, with Z estimated by estimate_z.
double ell(const Dataset& data, const GeneralModel& model, std::size_t z_samples, std::uint64_t seed);

}  // namespace confclust
