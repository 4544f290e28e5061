#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "domlearn/dataset.hpp"
#include "domlearn/geometry.hpp"
#include "domlearn/model.hpp"

namespace domlearn {

/// Nearest Center Classifier: each class is represented by the center of
/// its minimax enclosing ball; objects go to the nearest center. Optimal
/// when class domains are hyperspheres of identical radius.
class NccModel final : public DecisionModel {
 public:
  explicit NccModel(std::vector<EnclosingBall> class_balls)
      : class_balls_(std::move(class_balls)) {
    if (class_balls_.size() < 2) throw std::invalid_argument("NccModel: need >= 2 class centers");
  }

  std::string kind() const override { return "ncc"; }
  int class_count() const override { return static_cast<int>(class_balls_.size()); }
  Eigen::Index dim() const override { return class_balls_[0].center.size(); }

  const std::vector<EnclosingBall>& class_balls() const { return class_balls_; }
  const Eigen::VectorXd& center(int cls) const {
    return class_balls_[static_cast<std::size_t>(cls)].center;
  }

  /// ||x - mu_2|| - ||x - mu_1||: positive when x is nearer the omega_1
  /// center. Two-class only.
  double score(const Eigen::VectorXd& x) const override {
    check_input(x);
    if (class_count() != 2) throw std::logic_error("ncc: signed score requires two classes");
    return (x - center(1)).norm() - (x - center(0)).norm();
  }

  int predict(const Eigen::VectorXd& x) const override {
    check_input(x);
    int best = 0;
    double best_d = (x - center(0)).norm();
    for (int j = 1; j < class_count(); ++j) {
      const double d = (x - center(j)).norm();
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    return best;
  }

  /// Distance to the perpendicular bisector of the two centers (the exact
  /// decision boundary). Two-class only; absent when the centers coincide.
  std::optional<double> analytic_boundary_distance(const Eigen::VectorXd& x) const override {
    check_input(x);
    if (class_count() != 2) return std::nullopt;
    const Eigen::VectorXd diff = center(1) - center(0);
    const double gap = diff.norm();
    if (!(gap > 1e-300)) return std::nullopt;
    const double d2_sq = (x - center(1)).squaredNorm();
    const double d1_sq = (x - center(0)).squaredNorm();
    return std::abs(d2_sq - d1_sq) / (2.0 * gap);
  }

 private:
  std::vector<EnclosingBall> class_balls_;
};

inline NccModel train_ncc(const LabeledDataset& data) {
  std::vector<EnclosingBall> balls;
  balls.reserve(static_cast<std::size_t>(data.class_count()));
  for (int cls = 0; cls < data.class_count(); ++cls) {
    if (data.class_size(cls) == 0) {
      throw std::invalid_argument("train_ncc: class " + std::to_string(cls) + " is empty");
    }
    balls.push_back(min_enclosing_ball(data.class_points(cls)));
  }
  return NccModel(std::move(balls));
}

}  // namespace domlearn
