#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "confclust/pipeline.hpp"

namespace confclust {

struct VolumeCurve {
  std::vector<std::size_t> ks;
  std::vector<double> volumes;
  std::vector<double> std_errors;
  std::optional<Matrix> bootstrap;  // B x |ks| replicate volumes
};

/// Volume of the prediction set for each k. All ks share one split, one
/// fitting seed and one Monte Carlo stream (common random numbers).
VolumeCurve volume_curve(const Dataset& data, std::span<const std::size_t> ks, const PipelineConfig& config,
                         std::size_t mc_samples, std::uint64_t seed);

/// The split and the fitting / Monte Carlo seeds volume_curve derives from
/// `seed`, so a single fit can reproduce one point of a curve.
SplitPair curve_split(const Dataset& data, std::uint64_t seed);
std::uint64_t curve_fit_seed(std::uint64_t seed);
std::uint64_t curve_mc_seed(std::uint64_t seed);

/// Smallest k attaining the minimum volume.
std::size_t select_k_min_volume(const VolumeCurve& curve);

struct Interval {
  std::size_t t = 0;
  std::size_t k = 0;
  double lo = 0.0;
  double hi = 0.0;
};

struct TestDecision {
  std::size_t k_hat = 1;
  std::vector<Interval> intervals;
  std::vector<std::size_t> ks;
  std::vector<bool> rejected;  // aligned with ks
};

/// Scan k = K, ..., 1. For every t < k build the interval
///   (S_t - S_k) +- q / sqrt(n),
/// q the bootstrap (1 - alpha/(k-1)) quantile of sqrt(n)|S_t^b - S_k^b - (S_t - S_k)|,
/// and reject H0^k when every interval lies strictly above zero. k_hat is the
/// first rejected k in the scan, or 1. volumes[i] and boot.col(i) belong to k = i+1.
TestDecision bootstrap_decision(std::span<const double> volumes, const Matrix& boot, std::size_t n, double alpha);

struct BootstrapResult {
  VolumeCurve curve;
  TestDecision decision;
};

/// Volume curve over k = 1..K on the data and on B bootstrap resamples (n rows
/// drawn with replacement), followed by bootstrap_decision. Requires B >= 100.
BootstrapResult bootstrap_test_k(const Dataset& data, std::size_t K, double alpha, std::size_t B,
                                 const PipelineConfig& config, std::size_t mc_samples, std::uint64_t seed);

/// Union-bound level alpha / K_n for selecting among K_n values of k.
double corrected_alpha(double alpha, std::size_t k_n);

}  // namespace confclust
