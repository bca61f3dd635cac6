#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "confclust/conformal.hpp"

namespace confclust {

/// Monte Carlo estimate of the Lebesgue measure of a prediction set.
struct VolumeEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
  Box proposal_box;
};

inline constexpr int kOutside = -1;

/// Grouping of set components into connected clusters. component_of[j] is -1
/// for empty components; ids run 0..r-1 in order of each cluster's smallest
/// member index.
struct Clustering {
  std::size_t r = 0;
  std::vector<int> component_of;
  std::vector<int> point_labels;  // kOutside for points not in the set
};

enum class ConnectivityRule { geometric, sample_based };

/// y lies in the set (closed components).
bool membership(const PredictionSet& set, const PointRef& y);

/// Bounding box of all nonempty components, each side widened by 1%.
/// Returns an empty box (zero dimension) when every component is empty.
std::optional<Box> proposal_box(const PredictionSet& set);

/// Hit-ratio estimate with a uniform proposal on proposal_box(set):
/// value = vol(box) * hits / n, std_error from the binomial variance.
VolumeEstimate estimate_volume(const PredictionSet& set, std::size_t n_samples, std::uint64_t seed);

/// Whether two nonempty components share a point. Exact for balls. For
/// ellipsoids the dual test max_l min_y [l q_a(y) + (1-l) q_b(y)] <= 1 on the
/// normalized quadratic forms is used.
bool components_intersect(const Component& a, const Component& b);

/// Union-find over component adjacency. The geometric rule joins any two
/// intersecting components; the sample-based rule joins components that
/// contain a common sample point. When samples are supplied their labels are
/// filled in as well.
Clustering connected_components(const PredictionSet& set, const Dataset* samples, ConnectivityRule rule);

/// Label each point with the cluster of the containing component it is
/// (relatively) closest to, or kOutside.
std::vector<int> assign_points(const PredictionSet& set, const Clustering& clustering, const Dataset& data);

}  // namespace confclust
