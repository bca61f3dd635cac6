#include "confclust/selection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "confclust/geometry.hpp"
#include "confclust/rng.hpp"

namespace confclust {

namespace {
constexpr std::uint64_t kSplitTag = 0x5b117;
constexpr std::uint64_t kFitTag = 0xf17;
constexpr std::uint64_t kMcTag = 0x3c;
constexpr std::uint64_t kBootTag = 0xb007;
}  // namespace

SplitPair curve_split(const Dataset& data, std::uint64_t seed) {
  return split_half(data, derive_seed(seed, kSplitTag));
}
std::uint64_t curve_fit_seed(std::uint64_t seed) { return derive_seed(seed, kFitTag); }
std::uint64_t curve_mc_seed(std::uint64_t seed) { return derive_seed(seed, kMcTag); }

VolumeCurve volume_curve(const Dataset& data, std::span<const std::size_t> ks, const PipelineConfig& config,
                         std::size_t mc_samples, std::uint64_t seed) {
  if (ks.empty()) throw std::invalid_argument("volume_curve: no k values");
  const SplitPair split = curve_split(data, seed);
  PipelineConfig cfg = config;
  cfg.fit.seed = curve_fit_seed(seed);
  const std::uint64_t mc_seed = curve_mc_seed(seed);
  VolumeCurve curve;
  for (std::size_t k : ks) {
    cfg.k = k;
    const PipelineResult res = run_pipeline(split, cfg);
    const VolumeEstimate v = estimate_volume(res.set, mc_samples, mc_seed);
    curve.ks.push_back(k);
    curve.volumes.push_back(v.value);
    curve.std_errors.push_back(v.std_error);
  }
  return curve;
}

std::size_t select_k_min_volume(const VolumeCurve& curve) {
  if (curve.ks.empty()) throw std::invalid_argument("select_k_min_volume: empty curve");
  std::size_t best = 0;
  for (std::size_t i = 1; i < curve.ks.size(); ++i) {
    const double v = curve.volumes[i];
    const double b = curve.volumes[best];
    if (v < b || (v == b && curve.ks[i] < curve.ks[best])) best = i;
  }
  return curve.ks[best];
}

TestDecision bootstrap_decision(std::span<const double> volumes, const Matrix& boot, std::size_t n, double alpha) {
  const std::size_t K = volumes.size();
  if (K == 0) throw std::invalid_argument("bootstrap_decision: empty curve");
  if (static_cast<std::size_t>(boot.cols()) != K || boot.rows() == 0)
    throw std::invalid_argument("bootstrap_decision: bootstrap matrix shape mismatch");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("bootstrap_decision: alpha must be in (0,1)");
  const double root_n = std::sqrt(static_cast<double>(n));
  const auto B = static_cast<std::size_t>(boot.rows());

  TestDecision out;
  out.ks.resize(K);
  out.rejected.assign(K, false);
  for (std::size_t i = 0; i < K; ++i) out.ks[i] = i + 1;
  bool found = false;
  std::vector<double> stat(B);
  for (std::size_t k = K; k >= 2; --k) {
    const double level = 1.0 - alpha / static_cast<double>(k - 1);
    const auto rank = std::min<std::size_t>(
        B, static_cast<std::size_t>(std::max(1.0, std::ceil(level * static_cast<double>(B) - 1e-9))));
    bool all_positive = true;
    for (std::size_t t = 1; t < k; ++t) {
      const double diff = volumes[t - 1] - volumes[k - 1];
      for (std::size_t b = 0; b < B; ++b) {
        const double bd = boot(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(t - 1)) -
                          boot(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(k - 1));
        stat[b] = root_n * std::abs(bd - diff);
      }
      std::nth_element(stat.begin(), stat.begin() + static_cast<std::ptrdiff_t>(rank - 1), stat.end());
      const double q = stat[rank - 1];
      Interval iv{t, k, diff - q / root_n, diff + q / root_n};
      if (!(iv.lo > 0.0)) all_positive = false;
      out.intervals.push_back(iv);
    }
    out.rejected[k - 1] = all_positive;
    if (all_positive && !found) {
      out.k_hat = k;
      found = true;
    }
  }
  return out;
}

BootstrapResult bootstrap_test_k(const Dataset& data, std::size_t K, double alpha, std::size_t B,
                                 const PipelineConfig& config, std::size_t mc_samples, std::uint64_t seed) {
  if (B < 100) throw std::invalid_argument("bootstrap_test_k: need at least 100 bootstrap replicates");
  if (K == 0) throw std::invalid_argument("bootstrap_test_k: K must be >= 1");
  std::vector<std::size_t> ks(K);
  for (std::size_t i = 0; i < K; ++i) ks[i] = i + 1;

  BootstrapResult out;
  out.curve = volume_curve(data, ks, config, mc_samples, seed);
  Matrix boot(static_cast<Eigen::Index>(B), static_cast<Eigen::Index>(K));
  std::vector<std::size_t> rows(data.n());
  for (std::size_t b = 0; b < B; ++b) {
    Rng rng(seed, kBootTag + b);
    for (auto& r : rows) r = rng.index(data.n());
    const VolumeCurve c = volume_curve(data.subset(rows), ks, config, mc_samples, seed);
    for (std::size_t i = 0; i < K; ++i)
      boot(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(i)) = c.volumes[i];
  }
  out.decision = bootstrap_decision(out.curve.volumes, boot, data.n(), alpha);
  out.curve.bootstrap = std::move(boot);
  return out;
}

double corrected_alpha(double alpha, std::size_t k_n) {
  if (k_n == 0) throw std::invalid_argument("corrected_alpha: K_n must be >= 1");
  return alpha / static_cast<double>(k_n);
}

}  // namespace confclust
