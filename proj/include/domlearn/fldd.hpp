#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <utility>
#include <vector>

#include "domlearn/dataset.hpp"
#include "domlearn/geometry.hpp"
#include "domlearn/model.hpp"

namespace domlearn {

/// Fisher Linear Domain Discriminant: class means become minimax ball
/// centers and the covariance role is played by whitening the pooled
/// center-shifted data. The boundary is the locus of equal whitened distance
/// to the two centers, which reduces to a hyperplane.
class FlddModel final : public DecisionModel {
 public:
  FlddModel(Eigen::VectorXd normal, double offset, WhiteningTransform whitening,
            std::vector<Eigen::VectorXd> centers)
      : normal_(std::move(normal)),
        offset_(offset),
        whitening_(std::move(whitening)),
        centers_(std::move(centers)) {
    if (centers_.size() != 2) throw std::invalid_argument("FlddModel: exactly two centers");
  }

  std::string kind() const override { return "fldd"; }
  int class_count() const override { return 2; }
  Eigen::Index dim() const override { return normal_.size(); }

  const Eigen::VectorXd& normal() const { return normal_; }
  double offset() const { return offset_; }
  const WhiteningTransform& whitening() const { return whitening_; }
  const std::vector<Eigen::VectorXd>& centers() const { return centers_; }

  double score(const Eigen::VectorXd& x) const override {
    check_input(x);
    return normal_.dot(x) + offset_;
  }

  std::optional<double> analytic_boundary_distance(const Eigen::VectorXd& x) const override {
    check_input(x);
    return detail::hyperplane_distance(normal_, offset_, x);
  }

 private:
  Eigen::VectorXd normal_;
  double offset_;
  WhiteningTransform whitening_;
  std::vector<Eigen::VectorXd> centers_;
};

/// Trains the FLDD on a two-class dataset. With metric M = T^T T from the
/// pooled whitening, the equal-whitened-distance rule becomes
/// score(x) = (mu_1 - mu_2)^T M x + offset with the offset placing the
/// boundary through the whitened midpoint, so score >= 0 assigns omega_1.
inline FlddModel train_fldd(const LabeledDataset& data) {
  if (data.class_count() != 2) {
    throw std::invalid_argument("train_fldd: exactly two classes required");
  }
  std::vector<Eigen::VectorXd> centers;
  for (int cls = 0; cls < 2; ++cls) {
    if (data.class_size(cls) == 0) {
      throw std::invalid_argument("train_fldd: class " + std::to_string(cls) + " is empty");
    }
    centers.push_back(min_enclosing_ball(data.class_points(cls)).center);
  }
  WhiteningTransform whitening = pooled_whitening(data, centers);
  const Eigen::MatrixXd metric = whitening.metric();
  Eigen::VectorXd normal = metric * (centers[0] - centers[1]);
  const double offset = -0.5 * normal.dot(centers[0] + centers[1]);
  return FlddModel(std::move(normal), offset, std::move(whitening), std::move(centers));
}

}  // namespace domlearn
