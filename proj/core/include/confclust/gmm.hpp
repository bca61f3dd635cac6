#pragma once

#include "confclust/kmeans.hpp"

namespace confclust {

/// EM for a full-covariance Gaussian mixture. Each restart starts from a
/// single Lloyd run (centers, cluster covariances, shares); the restart with
/// the lowest final l_GM wins. `trace` records l_GM before every M-step.
GeneralFit em_fit_traced(const Dataset& data, std::size_t k, const FitOptions& opts = {});
GeneralModel em_fit(const Dataset& data, std::size_t k, const FitOptions& opts = {});

/// l_GM(theta) = -(1/n) sum_i log sum_j exp{-[1/2 maha_j + 1/2 log det Sigma_j - log pi_j]}
double ell_gm(const Dataset& data, const GeneralModel& model);

/// n x k posterior responsibilities (rows sum to one).
Matrix responsibilities(const Dataset& data, const GeneralModel& model);

}  // namespace confclust
