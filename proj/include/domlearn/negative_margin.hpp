#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "domlearn/dataset.hpp"
#include "domlearn/kernels.hpp"
#include "domlearn/model.hpp"
#include "domlearn/rng.hpp"

namespace domlearn {

/// Maximum-margin hyperplane in the kernel-induced space with no slack:
/// f maximizes the minimum signed training margin under ||w|| = 1. With
/// overlapping classes the optimum is negative (the furthest misclassified
/// object is as close to the boundary as possible), which keeps the
/// classifier a pure domain rule: only the margin-achieving objects matter.
class MarginModel final : public DecisionModel {
 public:
  MarginModel(KernelKind kernel, Eigen::MatrixXd prototypes, Eigen::VectorXd dual_weights,
              double bias, double margin, std::vector<Eigen::Index> support_indices)
      : kernel_(kernel),
        prototypes_(std::move(prototypes)),
        dual_weights_(std::move(dual_weights)),
        bias_(bias),
        margin_(margin),
        support_indices_(std::move(support_indices)) {
    if (dual_weights_.size() != prototypes_.rows()) {
      throw std::invalid_argument("MarginModel: one dual weight per training object");
    }
  }

  std::string kind() const override { return "negative_margin"; }
  int class_count() const override { return 2; }
  Eigen::Index dim() const override { return prototypes_.cols(); }

  KernelKind kernel() const { return kernel_; }
  const Eigen::MatrixXd& prototypes() const { return prototypes_; }
  const Eigen::VectorXd& dual_weights() const { return dual_weights_; }
  double bias() const { return bias_; }
  double margin() const { return margin_; }
  const std::vector<Eigen::Index>& support_indices() const { return support_indices_; }

  /// Signed distance in the kernel-induced space (||w|| = 1 there).
  double score(const Eigen::VectorXd& x) const override {
    check_input(x);
    return dual_weights_.dot(kernel_column(kernel_, prototypes_, x)) + bias_;
  }

  std::optional<double> analytic_boundary_distance(const Eigen::VectorXd& x) const override {
    check_input(x);
    if (kernel_ != KernelKind::linear) return std::nullopt;
    const Eigen::VectorXd w = prototypes_.transpose() * dual_weights_;
    return detail::hyperplane_distance(w, bias_, x);
  }

 private:
  KernelKind kernel_;
  Eigen::MatrixXd prototypes_;
  Eigen::VectorXd dual_weights_;
  double bias_;
  double margin_;
  std::vector<Eigen::Index> support_indices_;
};

struct NegativeMarginOptions {
  int restarts = 20;
  RngSeed seed = 0x6d617267696eULL;
  int iters_per_phase = 40;
  double initial_step = 0.5;
  double final_step = 1e-10;
  double step_decay = 0.65;
  double support_tolerance = 1e-6;
};

namespace detail {

/// For a fixed direction the optimal bias has a closed form, leaving the
/// margin value gamma = (min_pos s - max_neg s) / 2 with s the per-object
/// kernel-space projections.
struct MarginEval {
  double gamma = -std::numeric_limits<double>::infinity();
  double bias = 0.0;
  double min_pos = 0.0;
  double max_neg = 0.0;
};

inline MarginEval eval_margin_direction(const Eigen::VectorXd& s,
                                        const std::vector<Eigen::Index>& pos,
                                        const std::vector<Eigen::Index>& neg) {
  MarginEval e;
  e.min_pos = std::numeric_limits<double>::infinity();
  for (Eigen::Index i : pos) e.min_pos = std::min(e.min_pos, s(i));
  e.max_neg = -std::numeric_limits<double>::infinity();
  for (Eigen::Index j : neg) e.max_neg = std::max(e.max_neg, s(j));
  e.gamma = 0.5 * (e.min_pos - e.max_neg);
  e.bias = -0.5 * (e.min_pos + e.max_neg);
  return e;
}

/// Spectral reparametrization of the kernel space. With G = V L V^T and
/// coordinates c, the direction is beta = V L^{-1/2} c over the kept
/// spectrum, so ||w||^2 = |c|^2 holds exactly and the projections
/// s = G beta = V L^{1/2} c are free of null-space cancellation.
struct KernelBasis {
  Eigen::MatrixXd to_s;     // n x r: s = to_s * c
  Eigen::MatrixXd to_beta;  // n x r: beta = to_beta * c

  static KernelBasis build(const Eigen::MatrixXd& gram) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
    if (eig.info() != Eigen::Success) {
      throw std::runtime_error("negative margin: Gram eigendecomposition failed");
    }
    const Eigen::VectorXd& lambda = eig.eigenvalues();
    const double floor = lambda.maxCoeff() * 1e-13;
    std::vector<Eigen::Index> kept;
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
      if (lambda(i) > floor && lambda(i) > 0.0) kept.push_back(i);
    }
    if (kept.empty()) {
      throw std::invalid_argument("negative margin: kernel space is degenerate");
    }
    KernelBasis basis;
    basis.to_s.resize(gram.rows(), static_cast<Eigen::Index>(kept.size()));
    basis.to_beta.resize(gram.rows(), static_cast<Eigen::Index>(kept.size()));
    for (std::size_t k = 0; k < kept.size(); ++k) {
      const double root = std::sqrt(lambda(kept[k]));
      basis.to_s.col(static_cast<Eigen::Index>(k)) = eig.eigenvectors().col(kept[k]) * root;
      basis.to_beta.col(static_cast<Eigen::Index>(k)) = eig.eigenvectors().col(kept[k]) / root;
    }
    return basis;
  }

  Eigen::Index rank() const { return to_s.cols(); }
};

/// Equalization polish: for a guessed support set solve the equal-margin
/// KKT system y_i(sum_k mu_k K_ik + b) = sigma, sum_k mu_k = 0. The result
/// is only a candidate; the caller re-evaluates it exactly.
inline bool polish_candidate(const Eigen::MatrixXd& gram, const Eigen::VectorXd& y,
                             const std::vector<Eigen::Index>& active, double sigma,
                             Eigen::VectorXd& mu_out) {
  const Eigen::Index a = static_cast<Eigen::Index>(active.size());
  if (a < 2) return false;
  Eigen::MatrixXd sys(a + 1, a + 1);
  Eigen::VectorXd rhs(a + 1);
  for (Eigen::Index r = 0; r < a; ++r) {
    const Eigen::Index ir = active[static_cast<std::size_t>(r)];
    for (Eigen::Index c = 0; c < a; ++c) {
      const Eigen::Index ic = active[static_cast<std::size_t>(c)];
      sys(r, c) = y(ir) * y(ic) * gram(ir, ic);
    }
    sys(r, a) = y(ir);
    rhs(r) = sigma;
  }
  for (Eigen::Index c = 0; c < a; ++c) sys(a, c) = y(active[static_cast<std::size_t>(c)]);
  sys(a, a) = 0.0;
  rhs(a) = 0.0;
  // Ridge keeps the solve bounded when the active Gram block is singular.
  const double ridge = 1e-12 * std::max(1.0, sys.diagonal().cwiseAbs().maxCoeff());
  sys += ridge * Eigen::MatrixXd::Identity(a + 1, a + 1);
  const Eigen::VectorXd sol = sys.completeOrthogonalDecomposition().solve(rhs);
  if (!sol.allFinite()) return false;
  Eigen::VectorXd mu = Eigen::VectorXd::Zero(y.size());
  for (Eigen::Index r = 0; r < a; ++r) {
    const Eigen::Index ir = active[static_cast<std::size_t>(r)];
    mu(ir) = sol(r) * y(ir);
  }
  mu_out = std::move(mu);
  return true;
}

}  // namespace detail

/// Trains the negative-margin SVM by projected subgradient ascent on
/// min_i y_i f(x_i) over the unit sphere of the kernel space, with the bias
/// eliminated in closed form, annealed step sizes, random restarts and an
/// active-set equalization polish.
inline MarginModel train_negative_margin(const LabeledDataset& data, KernelKind kernel,
                                         NegativeMarginOptions options = {}) {
  if (data.class_count() != 2) {
    throw std::invalid_argument("train_negative_margin: exactly two classes required");
  }
  const Eigen::Index n = data.size();
  bool all_identical = true;
  for (Eigen::Index i = 1; i < n && all_identical; ++i) {
    all_identical = data.points().row(i) == data.points().row(0);
  }
  if (all_identical && n > 1) {
    throw std::invalid_argument("train_negative_margin: all training points are identical");
  }

  const Eigen::MatrixXd gram = gram_matrix(kernel, data.points());
  Eigen::VectorXd y(n);
  std::vector<Eigen::Index> pos, neg;
  for (Eigen::Index i = 0; i < n; ++i) {
    y(i) = data.signed_label(i);
    (data.label(i) == 0 ? pos : neg).push_back(i);
  }
  if (pos.empty() || neg.empty()) {
    throw std::invalid_argument("train_negative_margin: both classes must be non-empty");
  }

  const detail::KernelBasis basis = detail::KernelBasis::build(gram);
  const Eigen::Index rank = basis.rank();

  Eigen::VectorXd best_c;
  detail::MarginEval best_eval;

  auto consider = [&](Eigen::VectorXd c) {
    const double norm = c.norm();
    if (!(norm > 1e-300) || !c.allFinite()) return best_eval;
    c /= norm;
    const Eigen::VectorXd s = basis.to_s * c;
    const detail::MarginEval e = detail::eval_margin_direction(s, pos, neg);
    if (e.gamma > best_eval.gamma) {
      best_eval = e;
      best_c = c;
    }
    return e;
  };

  auto engine = make_engine(derive_seed(options.seed, "negative-margin-restarts"));
  std::normal_distribution<double> gauss(0.0, 1.0);

  for (int restart = 0; restart < options.restarts; ++restart) {
    Eigen::VectorXd c(rank);
    if (restart == 0) {
      c = basis.to_s.transpose() * y;  // class-difference direction warm start
      if (!(c.norm() > 1e-300)) c.setOnes();
    } else {
      for (Eigen::Index i = 0; i < rank; ++i) c(i) = gauss(engine);
    }
    c.normalize();

    Eigen::VectorXd local_best_c = c;
    double local_best_gamma = consider(c).gamma;

    for (double step = options.initial_step; step > options.final_step;
         step *= options.step_decay) {
      for (int it = 0; it < options.iters_per_phase; ++it) {
        const Eigen::VectorXd s = basis.to_s * c;
        const detail::MarginEval e = detail::eval_margin_direction(s, pos, neg);
        if (e.gamma > local_best_gamma) {
          local_best_gamma = e.gamma;
          local_best_c = c;
        }
        // Averaged subgradient over the near-active extremes.
        const double tol = 1e-9 * std::max(1e-12, std::abs(e.min_pos) + std::abs(e.max_neg));
        Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
        long pos_active = 0, neg_active = 0;
        for (Eigen::Index i : pos) {
          if (s(i) <= e.min_pos + tol) ++pos_active;
        }
        for (Eigen::Index j : neg) {
          if (s(j) >= e.max_neg - tol) ++neg_active;
        }
        for (Eigen::Index i : pos) {
          if (s(i) <= e.min_pos + tol) d(i) = 0.5 / static_cast<double>(pos_active);
        }
        for (Eigen::Index j : neg) {
          if (s(j) >= e.max_neg - tol) d(j) = -0.5 / static_cast<double>(neg_active);
        }
        Eigen::VectorXd g = basis.to_s.transpose() * d;
        const double gnorm = g.norm();
        if (!(gnorm > 1e-300)) break;
        c += (step / gnorm) * g;
        c.normalize();
      }
      c = local_best_c;
    }
    consider(local_best_c);

    // Threshold-window polish around the restart's incumbent.
    const Eigen::VectorXd s = basis.to_s * local_best_c;
    const detail::MarginEval e = detail::eval_margin_direction(s, pos, neg);
    const double spread = std::max(1e-12, std::abs(e.min_pos) + std::abs(e.max_neg));
    const double sigma = e.gamma >= 0.0 ? 1.0 : -1.0;
    for (double rel : {1e-2, 1e-4, 1e-6}) {
      std::vector<Eigen::Index> active;
      for (Eigen::Index i : pos) {
        if (s(i) <= e.min_pos + rel * spread) active.push_back(i);
      }
      for (Eigen::Index j : neg) {
        if (s(j) >= e.max_neg - rel * spread) active.push_back(j);
      }
      Eigen::VectorXd mu;
      if (detail::polish_candidate(gram, y, active, sigma, mu)) {
        consider(basis.to_s.transpose() * mu);
      }
    }
  }

  // Subset polish around the global incumbent: the optimum is supported by
  // a small margin-achieving set, so solve the equalization system for
  // every pair and triple drawn from the objects nearest the extremes.
  {
    const Eigen::VectorXd s = basis.to_s * best_c;
    const double sigma = best_eval.gamma >= 0.0 ? 1.0 : -1.0;
    auto pool = [&](const std::vector<Eigen::Index>& side, bool lowest) {
      std::vector<Eigen::Index> sorted = side;
      std::sort(sorted.begin(), sorted.end(), [&](Eigen::Index a, Eigen::Index b) {
        return lowest ? s(a) < s(b) : s(a) > s(b);
      });
      if (sorted.size() > 8) sorted.resize(8);
      return sorted;
    };
    const std::vector<Eigen::Index> pool_pos = pool(pos, true);
    const std::vector<Eigen::Index> pool_neg = pool(neg, false);
    auto try_set = [&](std::vector<Eigen::Index> active) {
      Eigen::VectorXd mu;
      if (detail::polish_candidate(gram, y, active, sigma, mu)) {
        consider(basis.to_s.transpose() * mu);
      }
    };
    for (Eigen::Index i : pool_pos) {
      for (Eigen::Index j : pool_neg) {
        try_set({i, j});
        for (Eigen::Index i2 : pool_pos) {
          if (i2 > i) try_set({i, i2, j});
        }
        for (Eigen::Index j2 : pool_neg) {
          if (j2 > j) try_set({i, j, j2});
        }
      }
    }
  }

  if (best_c.size() == 0) {
    throw std::runtime_error("train_negative_margin: optimizer failed to produce a direction");
  }

  // Final parameters: minimum-norm dual weights, margin recomputed through
  // the same path score() uses so the certificate is exact.
  Eigen::VectorXd beta = basis.to_beta * best_c;
  const Eigen::VectorXd s = gram * beta;
  double margin = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) {
    margin = std::min(margin, y(i) * (s(i) + best_eval.bias));
  }
  std::vector<Eigen::Index> support;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (y(i) * (s(i) + best_eval.bias) <= margin + options.support_tolerance) support.push_back(i);
  }
  return MarginModel(kernel, data.points(), std::move(beta), best_eval.bias, margin,
                     std::move(support));
}

}  // namespace domlearn
