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
#include "domlearn/rng.hpp"

namespace domlearn {

/// Linear network trained on the worst training object instead of the mean:
/// minimizes max_i (net(x_i) - y_i)^2. The sum-to-max swap is what makes the
/// rule depend on the class domains only.
class MaxErrorLinearModel final : public DecisionModel {
 public:
  MaxErrorLinearModel(Eigen::VectorXd weights, double bias, double worst_residual)
      : weights_(std::move(weights)), bias_(bias), worst_residual_(worst_residual) {}

  std::string kind() const override { return "max_error_linear"; }
  int class_count() const override { return 2; }
  Eigen::Index dim() const override { return weights_.size(); }

  const Eigen::VectorXd& weights() const { return weights_; }
  double bias() const { return bias_; }
  double worst_residual() const { return worst_residual_; }

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
  double worst_residual_;
};

struct MaxErrorOptions {
  int restarts = 10;
  RngSeed seed = 0x6d6178657272ULL;
  int iters_per_phase = 60;
  double initial_step = 1.0;
  double final_step = 1e-9;
  double step_decay = 0.65;
};

/// Subgradient descent on the pointwise maximum of squared residuals, with
/// annealed steps and restarts. The objective is convex (max of convex
/// quadratics), so restarts only guard against slow nonsmooth progress.
inline MaxErrorLinearModel train_max_error_linear(const LabeledDataset& data,
                                                  MaxErrorOptions options = {}) {
  if (data.class_count() != 2) {
    throw std::invalid_argument("train_max_error_linear: exactly two classes required");
  }
  const Eigen::Index n = data.size();
  const Eigen::Index m = data.dim();
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) y(i) = data.signed_label(i);

  auto objective = [&](const Eigen::VectorXd& w, double b) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double r = data.points().row(i).dot(w) + b - y(i);
      worst = std::max(worst, r * r);
    }
    return worst;
  };

  auto engine = make_engine(derive_seed(options.seed, "max-error-restarts"));
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
    double local_obj = objective(w, b);
    Eigen::VectorXd local_w = w;
    double local_b = b;

    for (double step = options.initial_step; step > options.final_step;
         step *= options.step_decay) {
      for (int it = 0; it < options.iters_per_phase; ++it) {
        double worst = -1.0;
        for (Eigen::Index i = 0; i < n; ++i) {
          const double r = data.points().row(i).dot(w) + b - y(i);
          worst = std::max(worst, r * r);
        }
        // Average 2r * (x_i, 1) over the near-active residuals.
        Eigen::VectorXd gw = Eigen::VectorXd::Zero(m);
        double gb = 0.0;
        long actives = 0;
        const double tol = 1e-9 * std::max(worst, 1e-12);
        for (Eigen::Index i = 0; i < n; ++i) {
          const double r = data.points().row(i).dot(w) + b - y(i);
          if (r * r >= worst - tol) {
            gw += 2.0 * r * data.points().row(i).transpose();
            gb += 2.0 * r;
            ++actives;
          }
        }
        if (actives == 0) break;
        gw /= static_cast<double>(actives);
        gb /= static_cast<double>(actives);
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
  return MaxErrorLinearModel(std::move(best_w), best_b, best_obj);
}

}  // namespace domlearn
