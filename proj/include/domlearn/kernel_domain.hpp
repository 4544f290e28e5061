#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "domlearn/dataset.hpp"
#include "domlearn/model.hpp"

namespace domlearn {

/// Non-parametric class domains: each class is the union of radius-h balls
/// around its prototypes. The width h is the leave-one-out value, i.e. the
/// largest within-class nearest-neighbor distance over the training set, so
/// every training object belongs to the domain of its class estimated
/// without it.
///
/// Classification uses the signed distance to each domain border
/// (nn_j(x) - h, negative inside) and picks the smallest. That single rule
/// covers rejects (smallest distance to any domain) and multiple acceptance
/// (deepest membership) alike.
class KernelDomainModel final : public DecisionModel {
 public:
  KernelDomainModel(std::vector<Eigen::MatrixXd> prototypes, double width)
      : prototypes_(std::move(prototypes)), width_(width) {
    if (prototypes_.size() < 2) throw std::invalid_argument("KernelDomainModel: need >= 2 classes");
    if (!(width_ >= 0.0)) throw std::invalid_argument("KernelDomainModel: negative width");
  }

  std::string kind() const override { return "kernel_domain"; }
  int class_count() const override { return static_cast<int>(prototypes_.size()); }
  Eigen::Index dim() const override { return prototypes_[0].cols(); }

  double width() const { return width_; }
  const std::vector<Eigen::MatrixXd>& prototypes() const { return prototypes_; }

  double nearest_prototype_distance(const Eigen::VectorXd& x, int cls) const {
    const Eigen::MatrixXd& protos = prototypes_[static_cast<std::size_t>(cls)];
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < protos.rows(); ++i) {
      best = std::min(best, (protos.row(i).transpose() - x).norm());
    }
    return best;
  }

  bool member_of(const Eigen::VectorXd& x, int cls) const {
    return nearest_prototype_distance(x, cls) <= width_;
  }

  /// Distance from x to the class domain, 0 inside.
  double domain_distance(const Eigen::VectorXd& x, int cls) const {
    return std::max(0.0, nearest_prototype_distance(x, cls) - width_);
  }

  double score(const Eigen::VectorXd& x) const override {
    check_input(x);
    if (class_count() != 2) throw std::logic_error("kernel_domain: signed score requires two classes");
    return nearest_prototype_distance(x, 1) - nearest_prototype_distance(x, 0);
  }

  int predict(const Eigen::VectorXd& x) const override {
    check_input(x);
    int best = 0;
    double best_signed = nearest_prototype_distance(x, 0) - width_;
    for (int j = 1; j < class_count(); ++j) {
      const double s = nearest_prototype_distance(x, j) - width_;
      if (s < best_signed) {
        best_signed = s;
        best = j;
      }
    }
    return best;
  }

  /// Exact Euclidean distance to the decision boundary (two-class).
  ///
  /// The region won by the other class is a union, over its prototypes b,
  /// of convex polyhedra C_b = {y : ||y-b|| <= ||y-a|| for all own
  /// prototypes a}; the boundary distance is the smallest distance to any
  /// C_b, found by cyclic Dykstra projection onto the bisector halfspaces.
  std::optional<double> analytic_boundary_distance(const Eigen::VectorXd& x) const override {
    check_input(x);
    if (class_count() != 2) return std::nullopt;
    const int own = predict(x);
    const Eigen::MatrixXd& own_protos = prototypes_[static_cast<std::size_t>(own)];
    const Eigen::MatrixXd& opp_protos = prototypes_[static_cast<std::size_t>(1 - own)];

    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index bi = 0; bi < opp_protos.rows(); ++bi) {
      const Eigen::VectorXd b = opp_protos.row(bi).transpose();
      best = std::min(best, distance_to_opponent_cell(x, b, own_protos));
    }
    return best;
  }

 private:
  /// Distance from x to {y : 2(a-b).y <= |a|^2-|b|^2 for all rows a}.
  static double distance_to_opponent_cell(const Eigen::VectorXd& x, const Eigen::VectorXd& b,
                                          const Eigen::MatrixXd& own_protos) {
    const Eigen::Index k = own_protos.rows();
    Eigen::MatrixXd normals(k, x.size());
    Eigen::VectorXd offsets(k);
    for (Eigen::Index i = 0; i < k; ++i) {
      const Eigen::VectorXd a = own_protos.row(i).transpose();
      normals.row(i) = 2.0 * (a - b).transpose();
      offsets(i) = a.squaredNorm() - b.squaredNorm();
    }
    // Dykstra's alternating projections onto the halfspaces.
    Eigen::VectorXd y = x;
    Eigen::MatrixXd corrections = Eigen::MatrixXd::Zero(k, x.size());
    for (int cycle = 0; cycle < 4000; ++cycle) {
      double moved = 0.0;
      for (Eigen::Index i = 0; i < k; ++i) {
        const Eigen::VectorXd z = y + corrections.row(i).transpose();
        Eigen::VectorXd projected = z;
        const double nn = normals.row(i).squaredNorm();
        if (nn > 0.0) {
          const double violation = normals.row(i).dot(z) - offsets(i);
          if (violation > 0.0) projected = z - (violation / nn) * normals.row(i).transpose();
        }
        corrections.row(i) = (z - projected).transpose();
        moved += (projected - y).norm();
        y = projected;
      }
      if (moved < 1e-13 * (1.0 + y.norm())) break;
    }
    return (y - x).norm();
  }

  std::vector<Eigen::MatrixXd> prototypes_;
  double width_;
};

/// Trains the kernel-domain classifier. Exact duplicate (point, label)
/// pairs are removed first; a duplicated object would otherwise collapse
/// its own nearest-neighbor distance to zero and shrink h. The
/// nearest-neighbor scan is within-class: domains are unions over each
/// class's own objects and must not leak the other class's geometry.
inline KernelDomainModel train_kernel_domain(const LabeledDataset& raw_data) {
  const LabeledDataset data = deduplicate(raw_data);
  std::vector<Eigen::MatrixXd> prototypes;
  double width = 0.0;
  for (int cls = 0; cls < data.class_count(); ++cls) {
    Eigen::MatrixXd protos = data.class_points(cls);
    if (protos.rows() < 2) {
      throw std::invalid_argument(
          "train_kernel_domain: class " + std::to_string(cls) +
          " has fewer than 2 distinct objects; leave-one-out width is undefined");
    }
    for (Eigen::Index i = 0; i < protos.rows(); ++i) {
      double nn = std::numeric_limits<double>::infinity();
      for (Eigen::Index l = 0; l < protos.rows(); ++l) {
        if (l == i) continue;
        nn = std::min(nn, (protos.row(i) - protos.row(l)).norm());
      }
      width = std::max(width, nn);
    }
    prototypes.push_back(std::move(protos));
  }
  return KernelDomainModel(std::move(prototypes), width);
}

}  // namespace domlearn
