#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

namespace domlearn {

/// Uniform contract over every trained classifier.
///
/// score(x) is a signed decision value: score >= 0 assigns class 0 (omega_1,
/// signed label +1), score < 0 assigns class 1. predict(x) agrees with that
/// sign for two-class models; multiclass kinds override it with their
/// arg-min rule. analytic_boundary_distance(x) is the exact Euclidean
/// distance from x to the decision boundary for kinds that can compute it,
/// and nullopt otherwise.
class DecisionModel {
 public:
  virtual ~DecisionModel() = default;

  virtual std::string kind() const = 0;
  virtual int class_count() const = 0;
  virtual Eigen::Index dim() const = 0;

  virtual double score(const Eigen::VectorXd& x) const = 0;

  virtual int predict(const Eigen::VectorXd& x) const { return score(x) >= 0.0 ? 0 : 1; }

  virtual std::optional<double> analytic_boundary_distance(const Eigen::VectorXd& x) const {
    (void)x;
    return std::nullopt;
  }

 protected:
  void check_input(const Eigen::VectorXd& x) const {
    if (x.size() != dim()) {
      throw std::invalid_argument(kind() + ": input has " + std::to_string(x.size()) +
                                  " components, model expects " + std::to_string(dim()));
    }
  }
};

namespace detail {

/// |w.x + b| / ||w||; nullopt when the normal is numerically zero.
inline std::optional<double> hyperplane_distance(const Eigen::VectorXd& w, double b,
                                                 const Eigen::VectorXd& x) {
  const double nw = w.norm();
  if (!(nw > 1e-300)) return std::nullopt;
  return std::abs(w.dot(x) + b) / nw;
}

}  // namespace detail

}  // namespace domlearn
