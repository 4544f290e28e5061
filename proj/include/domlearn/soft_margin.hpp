#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "domlearn/dataset.hpp"
#include "domlearn/model.hpp"
#include "domlearn/rng.hpp"

namespace domlearn {

/// Soft-margin linear SVM, minimizing ||w||^2 + penalty * sum of hinge
/// slacks. This is NOT a domain-based rule: the slack sum counts every
/// object, so duplicated objects pull the boundary. It exists here purely
/// as the contrast fixture for the duplicate-sensitivity tests.
class SoftMarginBaseline final : public DecisionModel {
 public:
  SoftMarginBaseline(Eigen::VectorXd weights, double bias, double slack_sum)
      : weights_(std::move(weights)), bias_(bias), slack_sum_(slack_sum) {}

  std::string kind() const override { return "soft_margin"; }
  int class_count() const override { return 2; }
  Eigen::Index dim() const override { return weights_.size(); }

  const Eigen::VectorXd& weights() const { return weights_; }
  double bias() const { return bias_; }
  double slack_sum() const { return slack_sum_; }

  double score(const Eigen::VectorXd& x) const override {
    check_input(x);
    return weights_.dot(x) + bias_;
  }

  std::optional<double> analytic_boundary_distance(const Eigen::VectorXd& x) const override {
    check_input(x);
    return detail::hyperplane_distance(weights_, bias_, x);
  }

 private:
  Eigen::VectorXd weights_;
  double bias_;
  double slack_sum_;
};

struct SoftMarginOptions {
  int restarts = 5;
  RngSeed seed = 0x736f6674ULL;
  int iters_per_phase = 80;
  double initial_step = 1.0;
  double final_step = 1e-9;
  double step_decay = 0.7;
};

inline SoftMarginBaseline train_soft_margin_baseline(const LabeledDataset& data, double penalty,
                                                     SoftMarginOptions options = {}) {
  if (data.class_count() != 2) {
    throw std::invalid_argument("train_soft_margin_baseline: exactly two classes required");
  }
  if (!(penalty > 0.0)) {
    throw std::invalid_argument("train_soft_margin_baseline: penalty must be > 0");
  }
  const Eigen::Index n = data.size();
  const Eigen::Index m = data.dim();
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) y(i) = data.signed_label(i);

  auto objective = [&](const Eigen::VectorXd& w, double b) {
    double slack = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      slack += std::max(0.0, 1.0 - y(i) * (data.points().row(i).dot(w) + b));
    }
    return w.squaredNorm() + penalty * slack;
  };

  auto engine = make_engine(derive_seed(options.seed, "soft-margin-restarts"));
  std::normal_distribution<double> gauss(0.0, 1.0);

  Eigen::VectorXd best_w = Eigen::VectorXd::Zero(m);
  double best_b = 0.0;
  double best_obj = objective(best_w, best_b);

  for (int restart = 0; restart < options.restarts; ++restart) {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(m);
    double b = 0.0;
    if (restart > 0) {
      for (Eigen::Index j = 0; j < m; ++j) w(j) = gauss(engine);
      b = gauss(engine);
    }
    Eigen::VectorXd local_w = w;
    double local_b = b;
    double local_obj = objective(w, b);

    for (double step = options.initial_step; step > options.final_step;
         step *= options.step_decay) {
      for (int it = 0; it < options.iters_per_phase; ++it) {
        Eigen::VectorXd gw = 2.0 * w;
        double gb = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
          if (y(i) * (data.points().row(i).dot(w) + b) < 1.0) {
            gw -= penalty * y(i) * data.points().row(i).transpose();
            gb -= penalty * y(i);
          }
        }
        const double gnorm = std::sqrt(gw.squaredNorm() + gb * gb);
        if (!(gnorm > 1e-300)) break;
        w -= (step / gnorm) * gw;
        b -= step / gnorm * gb;
        const double obj = objective(w, b);
        if (obj < local_obj) {
          local_obj = obj;
          local_w = w;
          local_b = b;
        }
      }
      w = local_w;
      b = local_b;
    }
    if (local_obj < best_obj) {
      best_obj = local_obj;
      best_w = local_w;
      best_b = local_b;
    }
  }

  double slack = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    slack += std::max(0.0, 1.0 - y(i) * (data.points().row(i).dot(best_w) + best_b));
  }
  return SoftMarginBaseline(std::move(best_w), best_b, slack);
}

}  // namespace domlearn
