#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <limits>
#include <string>
#include <vector>

#include "domlearn/dataset.hpp"

namespace domlearn {

/// Symmetric non-negative matrix of pairwise object distances with a zero
/// diagonal. Only the Euclidean metric is implemented; metric_id exists so
/// callers can tell what they are holding.
struct DistanceMatrix {
  Eigen::MatrixXd values;
  std::string metric_id = "euclidean";

  Eigen::Index size() const { return values.rows(); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return values(i, j); }
};

inline DistanceMatrix pairwise_distances(const Eigen::MatrixXd& points) {
  const Eigen::Index n = points.rows();
  DistanceMatrix dm;
  dm.values = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double d = (points.row(i) - points.row(j)).norm();
      dm.values(i, j) = d;
      dm.values(j, i) = d;  // assign both halves so symmetry is exact
    }
  }
  return dm;
}

inline DistanceMatrix pairwise_distances(const LabeledDataset& data) {
  return pairwise_distances(data.points());
}

/// Largest pairwise distance; 0 for a single point.
inline double diameter(const Eigen::MatrixXd& points) {
  double best = 0.0;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < points.rows(); ++j) {
      best = std::max(best, (points.row(i) - points.row(j)).norm());
    }
  }
  return best;
}

/// Median of per-object nearest-neighbor distances. Returns 0 when fewer
/// than two objects exist.
inline double median_nearest_neighbor_distance(const Eigen::MatrixXd& points) {
  const Eigen::Index n = points.rows();
  if (n < 2) return 0.0;
  std::vector<double> nn(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      nn[static_cast<std::size_t>(i)] =
          std::min(nn[static_cast<std::size_t>(i)], (points.row(i) - points.row(j)).norm());
    }
  }
  std::sort(nn.begin(), nn.end());
  const std::size_t h = nn.size() / 2;
  return nn.size() % 2 == 1 ? nn[h] : 0.5 * (nn[h - 1] + nn[h]);
}

}  // namespace domlearn
