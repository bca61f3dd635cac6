#include "confclust/geometry.hpp"

#include <cmath>
#include <stdexcept>

#include "confclust/rng.hpp"
#include "confclust/union_find.hpp"

namespace confclust {

bool membership(const PredictionSet& set, const PointRef& y) { return set.contains(y); }

std::optional<Box> proposal_box(const PredictionSet& set) {
  std::optional<Box> box;
  for (const auto& c : set.components) {
    if (c.empty) continue;
    const Box b = c.bounds();
    if (!b.lo.allFinite() || !b.hi.allFinite())
      throw std::domain_error("prediction set is unbounded (infinite threshold)");
    if (!box) {
      box = b;
    } else {
      box->lo = box->lo.cwiseMin(b.lo);
      box->hi = box->hi.cwiseMax(b.hi);
    }
  }
  if (box) {
    const Vector mid = 0.5 * (box->lo + box->hi);
    const Vector half = 0.5 * 1.01 * (box->hi - box->lo);
    box->lo = mid - half;
    box->hi = mid + half;
  }
  return box;
}

VolumeEstimate estimate_volume(const PredictionSet& set, std::size_t n_samples, std::uint64_t seed) {
  if (n_samples == 0) throw std::invalid_argument("estimate_volume: n_samples must be positive");
  VolumeEstimate est;
  est.n_samples = n_samples;
  est.seed = seed;
  const auto box = proposal_box(set);
  if (!box) return est;
  est.proposal_box = *box;
  const double vol = box->volume();
  if (!(vol > 0.0)) return est;

  Rng rng(seed, 0x701);
  const auto d = box->lo.size();
  Vector y(d);
  std::size_t hits = 0;
  for (std::size_t s = 0; s < n_samples; ++s) {
    for (Eigen::Index j = 0; j < d; ++j) y[j] = rng.uniform(box->lo[j], box->hi[j]);
    if (set.contains(y)) ++hits;
  }
  const double p = static_cast<double>(hits) / static_cast<double>(n_samples);
  est.value = vol * p;
  est.std_error = vol * std::sqrt(p * (1.0 - p) / static_cast<double>(n_samples));
  return est;
}

namespace {

// Quadratic form q(y) = (y - c)^T A (y - c) with q <= 1 describing the component.
Matrix normalized_form(const Component& c) {
  if (c.shape == Component::Shape::ball) {
    return Matrix::Identity(c.center.size(), c.center.size()) / c.r2;
  }
  return c.gaussian->covariance().inverse() / c.r2;
}

}  // namespace

bool components_intersect(const Component& a, const Component& b) {
  if (a.empty || b.empty) return false;
  if (a.shape == Component::Shape::ball && b.shape == Component::Shape::ball)
    return (a.center - b.center).norm() <= a.radius + b.radius;
  if ((a.center - b.center).norm() > a.enclosing_radius() + b.enclosing_radius()) return false;
  if (a.contains(b.center) || b.contains(a.center)) return true;
  if (a.r2 == 0.0 || b.r2 == 0.0) return false;  // a lone center, already checked

  const Matrix qa = normalized_form(a);
  const Matrix qb = normalized_form(b);
  // K(l) = min_y l q_a + (1-l) q_b - 1 is concave on [0,1]; the sets are
  // disjoint iff K(l) > 0 somewhere.
  auto dual = [&](double l) {
    const Matrix m = l * qa + (1.0 - l) * qb;
    const Vector rhs = l * (qa * a.center) + (1.0 - l) * (qb * b.center);
    const Vector y = m.llt().solve(rhs);
    const Vector da = y - a.center;
    const Vector db = y - b.center;
    return l * da.dot(qa * da) + (1.0 - l) * db.dot(qb * db) - 1.0;
  };
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 0.0, hi = 1.0;
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  double f1 = dual(x1), f2 = dual(x2);
  for (int it = 0; it < 80; ++it) {
    if (f1 > 0.0 || f2 > 0.0) return false;
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = dual(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = dual(x1);
    }
  }
  return !(f1 > 0.0 || f2 > 0.0);
}

namespace {

Clustering canonical(const PredictionSet& set, UnionFind& uf) {
  Clustering out;
  out.component_of.assign(set.components.size(), -1);
  std::vector<int> root_id(set.components.size(), -1);
  for (std::size_t j = 0; j < set.components.size(); ++j) {
    if (set.components[j].empty) continue;
    const std::size_t root = uf.find(j);
    if (root_id[root] < 0) root_id[root] = static_cast<int>(out.r++);
    out.component_of[j] = root_id[root];
  }
  return out;
}

}  // namespace

Clustering connected_components(const PredictionSet& set, const Dataset* samples, ConnectivityRule rule) {
  const std::size_t k = set.components.size();
  UnionFind uf(k);
  if (rule == ConnectivityRule::geometric) {
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = a + 1; b < k; ++b)
        if (components_intersect(set.components[a], set.components[b])) uf.unite(a, b);
  } else {
    if (samples == nullptr) throw std::invalid_argument("connected_components: sample-based rule needs samples");
    if (samples->d() != set.dim()) throw std::invalid_argument("connected_components: dimension mismatch");
    for (std::size_t i = 0; i < samples->n(); ++i) {
      const auto y = samples->point(i);
      std::size_t first = k;
      for (std::size_t j = 0; j < k; ++j) {
        if (!set.components[j].contains(y)) continue;
        if (first == k) first = j;
        else uf.unite(first, j);
      }
    }
  }
  Clustering out = canonical(set, uf);
  if (samples != nullptr) out.point_labels = assign_points(set, out, *samples);
  return out;
}

std::vector<int> assign_points(const PredictionSet& set, const Clustering& clustering, const Dataset& data) {
  if (data.d() != set.dim()) throw std::invalid_argument("assign_points: dimension mismatch");
  std::vector<int> labels(data.n(), kOutside);
  for (std::size_t i = 0; i < data.n(); ++i) {
    const auto y = data.point(i);
    double best = kInf;
    for (std::size_t j = 0; j < set.components.size(); ++j) {
      const auto& c = set.components[j];
      if (!c.contains(y)) continue;
      const double q = c.normalized_sq(y);
      if (labels[i] == kOutside || q < best) {
        best = q;
        labels[i] = clustering.component_of[j];
      }
    }
  }
  return labels;
}

}  // namespace confclust
