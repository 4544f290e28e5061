#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "domlearn/dataset.hpp"
#include "domlearn/distance.hpp"
#include "domlearn/rng.hpp"

namespace domlearn {

/// Minimax (Chebyshev) ball: the center minimizes the distance to the most
/// remote input point. Plays the role of the class center in all domain
/// rules, replacing the class mean.
struct EnclosingBall {
  Eigen::VectorXd center;
  double radius = 0.0;

  bool contains(const Eigen::VectorXd& x, double rel_tol = 1e-9) const {
    return (x - center).norm() <= radius * (1.0 + rel_tol) + rel_tol;
  }
};

namespace detail {

/// Unique smallest ball having every support point on its boundary.
/// The center is solved inside the affine hull of the support set:
/// c = p0 + sum_i lambda_i (p_i - p0) with equal distances to all points.
inline EnclosingBall ball_from_support(const std::vector<Eigen::VectorXd>& support,
                                       Eigen::Index dim) {
  EnclosingBall ball;
  if (support.empty()) {
    ball.center = Eigen::VectorXd::Zero(dim);
    ball.radius = -1.0;  // contains nothing
    return ball;
  }
  if (support.size() == 1) {
    ball.center = support[0];
    ball.radius = 0.0;
    return ball;
  }
  const Eigen::Index k = static_cast<Eigen::Index>(support.size()) - 1;
  Eigen::MatrixXd basis(dim, k);
  for (Eigen::Index i = 0; i < k; ++i) basis.col(i) = support[static_cast<std::size_t>(i) + 1] - support[0];
  Eigen::MatrixXd a = 2.0 * basis.transpose() * basis;
  Eigen::VectorXd b(k);
  for (Eigen::Index i = 0; i < k; ++i) b(i) = basis.col(i).squaredNorm();
  const Eigen::VectorXd lambda = a.fullPivLu().solve(b);
  ball.center = support[0] + basis * lambda;
  ball.radius = (ball.center - support[0]).norm();
  return ball;
}

inline EnclosingBall welzl_recurse(std::vector<Eigen::VectorXd>& pts, std::size_t n,
                                   std::vector<Eigen::VectorXd>& support, Eigen::Index dim) {
  if (n == 0 || static_cast<Eigen::Index>(support.size()) == dim + 1) {
    return ball_from_support(support, dim);
  }
  EnclosingBall ball = welzl_recurse(pts, n - 1, support, dim);
  const Eigen::VectorXd p = pts[n - 1];  // by value: the shift below overwrites the slot
  if (ball.radius >= 0.0 && (p - ball.center).norm() <= ball.radius * (1.0 + 1e-12)) {
    return ball;
  }
  support.push_back(p);
  ball = welzl_recurse(pts, n - 1, support, dim);
  support.pop_back();
  // Move-to-front keeps boundary-defining points early in later calls.
  for (std::size_t i = n - 1; i > 0; --i) pts[i] = pts[i - 1];
  pts[0] = p;
  return ball;
}

/// Frank-Wolfe style center updates: repeatedly pull the center towards the
/// farthest point with step 1/(k+1). Sublinear but dimension-agnostic.
inline EnclosingBall min_ball_iterative(const Eigen::MatrixXd& pts, double tol, int max_iters) {
  const Eigen::Index n = pts.rows();
  Eigen::VectorXd center = pts.colwise().mean().transpose();
  double prev_radius = std::numeric_limits<double>::infinity();
  int stalled = 0;
  for (int k = 1; k <= max_iters; ++k) {
    Eigen::Index far = 0;
    double far_d2 = -1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double d2 = (pts.row(i).transpose() - center).squaredNorm();
      if (d2 > far_d2) {
        far_d2 = d2;
        far = i;
      }
    }
    const double radius = std::sqrt(far_d2);
    if (prev_radius - radius < tol * std::max(radius, 1e-300)) {
      if (++stalled >= 64) break;
    } else {
      stalled = 0;
    }
    prev_radius = std::min(prev_radius, radius);
    center += (pts.row(far).transpose() - center) / static_cast<double>(k + 1);
  }
  EnclosingBall ball;
  ball.center = center;
  ball.radius = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    ball.radius = std::max(ball.radius, (pts.row(i).transpose() - center).norm());
  }
  return ball;
}

}  // namespace detail

struct MinBallOptions {
  double tolerance = 1e-9;
  int max_iters = 100000;
};

/// Smallest ball enclosing all rows of `points`. Exact randomized
/// incremental construction for m <= 3; iterative scheme above that.
inline EnclosingBall min_enclosing_ball(const Eigen::MatrixXd& points,
                                        MinBallOptions options = {}) {
  if (points.rows() < 1) throw std::invalid_argument("min_enclosing_ball: no points");
  const Eigen::Index dim = points.cols();

  // Exact duplicates carry no information and removing them makes the
  // result bitwise invariant to copies in the input.
  std::vector<Eigen::VectorXd> unique;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    bool seen = false;
    for (const auto& u : unique) {
      if (u == points.row(i).transpose()) {
        seen = true;
        break;
      }
    }
    if (!seen) unique.push_back(points.row(i).transpose());
  }

  if (unique.size() == 1) {
    return EnclosingBall{unique[0], 0.0};
  }
  if (dim > 3) {
    Eigen::MatrixXd upts(static_cast<Eigen::Index>(unique.size()), dim);
    for (std::size_t i = 0; i < unique.size(); ++i) upts.row(static_cast<Eigen::Index>(i)) = unique[i].transpose();
    return detail::min_ball_iterative(upts, options.tolerance, options.max_iters);
  }
  auto engine = make_engine(derive_seed(0x5eb2f1ull, "welzl", unique.size()));
  std::shuffle(unique.begin(), unique.end(), engine);
  std::vector<Eigen::VectorXd> support;
  return detail::welzl_recurse(unique, unique.size(), support, dim);
}

/// Best class center restricted to training objects: the index minimizing
/// the maximum distance to all members, with its minimax radius. Candidates
/// range over every object in the distance matrix, members only define the
/// coverage set. Ties break to the lowest index.
inline std::pair<Eigen::Index, double> data_restricted_center(
    const DistanceMatrix& dist, const std::vector<Eigen::Index>& member_indices) {
  if (member_indices.empty()) {
    throw std::invalid_argument("data_restricted_center: empty member set");
  }
  Eigen::Index best = -1;
  double best_radius = std::numeric_limits<double>::infinity();
  for (Eigen::Index c = 0; c < dist.size(); ++c) {
    double worst = 0.0;
    for (Eigen::Index m : member_indices) worst = std::max(worst, dist(c, m));
    if (worst < best_radius) {
      best_radius = worst;
      best = c;
    }
  }
  return {best, best_radius};
}

/// Squared range of feature `feature` over class `cls`: the domain stand-in
/// for the class variance.
inline double class_range_width(const LabeledDataset& data, int cls, Eigen::Index feature) {
  if (feature < 0 || feature >= data.dim()) throw std::out_of_range("class_range_width: feature");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    if (data.label(i) != cls) continue;
    lo = std::min(lo, data.points()(i, feature));
    hi = std::max(hi, data.points()(i, feature));
  }
  if (!(lo <= hi)) throw std::invalid_argument("class_range_width: empty class");
  return (hi - lo) * (hi - lo);
}

/// Affine map x -> transform * (x - shift).
struct WhiteningTransform {
  Eigen::VectorXd shift;
  Eigen::MatrixXd transform;

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const { return transform * (x - shift); }

  /// Metric matrix M = T^T T of the whitened space; (x-y)^T M (x-y) is the
  /// squared whitened distance.
  Eigen::MatrixXd metric() const { return transform.transpose() * transform; }
};

inline constexpr double kWhiteningRegularization = 1e-6;

/// Whitens the pooled data shifted by the per-class centers; the tractable
/// surrogate for the minimum-volume enclosing ellipsoid of the pooled
/// class-centered sample. Covariance is regularized by
/// lambda * trace(C)/m * I so rank-deficient samples stay invertible.
inline WhiteningTransform pooled_whitening(const LabeledDataset& data,
                                           const std::vector<Eigen::VectorXd>& centers) {
  if (static_cast<int>(centers.size()) != data.class_count()) {
    throw std::invalid_argument("pooled_whitening: one center per class required");
  }
  const Eigen::Index m = data.dim();
  Eigen::MatrixXd shifted(data.size(), m);
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    shifted.row(i) = data.points().row(i) - centers[static_cast<std::size_t>(data.label(i))].transpose();
  }
  const Eigen::VectorXd mean = shifted.colwise().mean().transpose();
  Eigen::MatrixXd centered = shifted.rowwise() - mean.transpose();
  Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(data.size());

  double floor = cov.trace() / static_cast<double>(m);
  if (!(floor > 0.0)) floor = 1.0;  // fully degenerate sample
  cov += kWhiteningRegularization * floor * Eigen::MatrixXd::Identity(m, m);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  if (eig.info() != Eigen::Success) {
    throw std::runtime_error("pooled_whitening: eigendecomposition failed");
  }
  const Eigen::VectorXd inv_sqrt = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().cwiseInverse();
  WhiteningTransform w;
  w.shift = mean;
  w.transform = eig.eigenvectors() * inv_sqrt.asDiagonal() * eig.eigenvectors().transpose();
  return w;
}

/// Hypersphere class domain: the minimax ball inflated by a slack delta, so
/// the border fits loosely around the training objects.
struct HypersphereDomain {
  EnclosingBall ball;
  double slack = 0.0;

  double boundary_radius() const { return ball.radius + slack; }
  bool contains(const Eigen::VectorXd& x) const {
    return (x - ball.center).norm() <= boundary_radius();
  }
  /// Distance from x to the domain border, positive inside.
  double border_distance(const Eigen::VectorXd& x) const {
    return boundary_radius() - (x - ball.center).norm();
  }
};

inline HypersphereDomain fit_hypersphere_domain(const Eigen::MatrixXd& points, double slack) {
  if (slack < 0.0) throw std::invalid_argument("fit_hypersphere_domain: negative slack");
  return HypersphereDomain{min_enclosing_ball(points), slack};
}

}  // namespace domlearn
