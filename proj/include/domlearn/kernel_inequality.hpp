#pragma once

#include <Eigen/Dense>
#include <optional>
#include <stdexcept>
#include <utility>

#include "domlearn/dataset.hpp"
#include "domlearn/kernels.hpp"
#include "domlearn/model.hpp"

namespace domlearn {

/// Discriminant found by solving the strict linear inequalities
/// y_i (alpha^T K(X, x_i) + alpha_0) > 0 with kernel-perceptron updates.
/// No margin or domain model is involved; the rule exists when the classes
/// are separable in the kernel space and training fails otherwise.
class KernelInequalityModel final : public DecisionModel {
 public:
  KernelInequalityModel(KernelKind kernel, Eigen::MatrixXd prototypes,
                        Eigen::VectorXd dual_weights, double bias)
      : kernel_(kernel),
        prototypes_(std::move(prototypes)),
        dual_weights_(std::move(dual_weights)),
        bias_(bias) {}

  std::string kind() const override { return "kernel_inequality"; }
  int class_count() const override { return 2; }
  Eigen::Index dim() const override { return prototypes_.cols(); }

  KernelKind kernel() const { return kernel_; }
  const Eigen::MatrixXd& prototypes() const { return prototypes_; }
  const Eigen::VectorXd& dual_weights() const { return dual_weights_; }
  double bias() const { return bias_; }

  double score(const Eigen::VectorXd& x) const override {
    check_input(x);
    return dual_weights_.dot(kernel_column(kernel_, prototypes_, x)) + bias_;
  }

 private:
  KernelKind kernel_;
  Eigen::MatrixXd prototypes_;
  Eigen::VectorXd dual_weights_;
  double bias_;
};

/// Runs kernel-perceptron epochs until every inequality is strict or the
/// epoch cap is reached. Non-separability is an expected outcome, so the
/// result is optional rather than an error.
inline std::optional<KernelInequalityModel> train_kernel_inequality(const LabeledDataset& data,
                                                                    KernelKind kernel,
                                                                    int max_epochs = 1000) {
  if (data.class_count() != 2) {
    throw std::invalid_argument("train_kernel_inequality: exactly two classes required");
  }
  if (max_epochs < 1) throw std::invalid_argument("train_kernel_inequality: max_epochs must be >= 1");
  const Eigen::Index n = data.size();
  const Eigen::MatrixXd gram = gram_matrix(kernel, data.points());
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) y(i) = data.signed_label(i);

  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
  double alpha0 = 0.0;
  for (int epoch = 0; epoch < max_epochs; ++epoch) {
    bool mistake = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double f = alpha.dot(gram.col(i)) + alpha0;
      if (y(i) * f <= 0.0) {
        alpha(i) += y(i);
        alpha0 += y(i);
        mistake = true;
      }
    }
    if (!mistake) {
      return KernelInequalityModel(kernel, data.points(), std::move(alpha), alpha0);
    }
  }
  return std::nullopt;
}

}  // namespace domlearn
