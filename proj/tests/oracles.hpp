#pragma once

// Independent brute-force oracles used by the unit and acceptance tests.
// These deliberately avoid the library's own algorithms: balls come from
// exhaustive candidate enumeration, margins from combinatorial search or
// dense grids, distances from plain double loops.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "domlearn/model.hpp"

namespace oracles {

/// Distance along direction u (unit) from x to the first predicted-label
/// change, located by doubling + bisection; nullopt when no change occurs
/// within max_t.
inline std::optional<double> crossing_distance(const domlearn::DecisionModel& model,
                                               const Eigen::VectorXd& x, Eigen::VectorXd u,
                                               double max_t, double tol = 1e-9) {
  u.normalize();
  const int own = model.predict(x);
  double hi = tol;
  while (model.predict(x + hi * u) == own) {
    hi *= 2.0;
    if (hi > max_t) return std::nullopt;
  }
  double lo = hi * 0.5 <= tol ? 0.0 : hi * 0.5;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (model.predict(x + mid * u) == own ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// True boundary distance by dense 2-D grid search over predicted labels.
inline double grid_boundary_distance_2d(const domlearn::DecisionModel& model,
                                        const Eigen::Vector2d& x, double box_lo, double box_hi,
                                        int steps) {
  const int own = model.predict(x);
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= steps; ++i) {
    for (int j = 0; j <= steps; ++j) {
      Eigen::Vector2d y(box_lo + (box_hi - box_lo) * i / steps,
                        box_lo + (box_hi - box_lo) * j / steps);
      if (model.predict(y) != own) best = std::min(best, (y - x).norm());
    }
  }
  return best;
}

struct Ball {
  Eigen::Vector2d center;
  double radius = std::numeric_limits<double>::infinity();
};

inline bool covers(const Ball& ball, const std::vector<Eigen::Vector2d>& pts, double tol) {
  for (const auto& p : pts) {
    if ((p - ball.center).norm() > ball.radius + tol) return false;
  }
  return true;
}

/// Smallest enclosing circle by exhaustive enumeration of all pair-diameter
/// balls and triple circumcircles.
inline Ball min_ball_2d(const std::vector<Eigen::Vector2d>& pts) {
  Ball best;
  if (pts.size() == 1) return {pts[0], 0.0};
  const double tol = 1e-10;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      Ball b{0.5 * (pts[i] + pts[j]), 0.5 * (pts[i] - pts[j]).norm()};
      if (b.radius < best.radius && covers(b, pts, tol)) best = b;
    }
  }
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      for (std::size_t k = j + 1; k < pts.size(); ++k) {
        const Eigen::Vector2d a = pts[i], b = pts[j], c = pts[k];
        const double d = 2.0 * (a.x() * (b.y() - c.y()) + b.x() * (c.y() - a.y()) +
                                c.x() * (a.y() - b.y()));
        if (std::abs(d) < 1e-14) continue;  // collinear
        const double ux = (a.squaredNorm() * (b.y() - c.y()) + b.squaredNorm() * (c.y() - a.y()) +
                           c.squaredNorm() * (a.y() - b.y())) /
                          d;
        const double uy = (a.squaredNorm() * (c.x() - b.x()) + b.squaredNorm() * (a.x() - c.x()) +
                           c.squaredNorm() * (b.x() - a.x())) /
                          d;
        Ball cand{Eigen::Vector2d(ux, uy), (Eigen::Vector2d(ux, uy) - a).norm()};
        if (cand.radius < best.radius && covers(cand, pts, tol)) best = cand;
      }
    }
  }
  return best;
}

/// Minimum signed margin of the hyperplane (w, b) over a labeled set, with
/// w normalized to unit length.
inline double min_margin(const Eigen::MatrixXd& x, const std::vector<double>& y,
                         Eigen::VectorXd w, double b) {
  const double nw = w.norm();
  w /= nw;
  b /= nw;
  double worst = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    worst = std::min(worst, y[static_cast<std::size_t>(i)] * (x.row(i).dot(w) + b));
  }
  return worst;
}

/// Best achievable minimum margin for a unit-norm hyperplane, by exhaustive
/// search over the candidate normals defined by support pairs and triples:
/// the normal joining one point of each class, and the normal perpendicular
/// to an edge of one class's hull paired with any third point to fix the
/// offset. The offset is always re-optimized in closed form.
inline double max_margin_2d(const Eigen::MatrixXd& x, const std::vector<double>& y) {
  std::vector<Eigen::Index> pos, neg;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    (y[static_cast<std::size_t>(i)] > 0 ? pos : neg).push_back(i);
  }
  auto margin_for_normal = [&](const Eigen::Vector2d& w_raw) {
    const double nw = w_raw.norm();
    if (!(nw > 1e-14)) return -std::numeric_limits<double>::infinity();
    const Eigen::Vector2d w = w_raw / nw;
    double lo = std::numeric_limits<double>::infinity();   // min over positives of w.x
    double hi = -std::numeric_limits<double>::infinity();  // max over negatives of w.x
    for (Eigen::Index i : pos) lo = std::min(lo, w.dot(x.row(i).transpose()));
    for (Eigen::Index j : neg) hi = std::max(hi, w.dot(x.row(j).transpose()));
    return 0.5 * (lo - hi);
  };
  double best = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i : pos) {
    for (Eigen::Index j : neg) {
      const Eigen::Vector2d diff = x.row(i).transpose() - x.row(j).transpose();
      best = std::max(best, margin_for_normal(diff));
    }
  }
  auto edge_normals = [&](const std::vector<Eigen::Index>& cls) {
    for (std::size_t a = 0; a < cls.size(); ++a) {
      for (std::size_t b = a + 1; b < cls.size(); ++b) {
        const Eigen::Vector2d e = x.row(cls[b]).transpose() - x.row(cls[a]).transpose();
        const Eigen::Vector2d n(-e.y(), e.x());
        best = std::max(best, margin_for_normal(n));
        best = std::max(best, margin_for_normal(-n));
      }
    }
  };
  edge_normals(pos);
  edge_normals(neg);
  return best;
}

/// Dense (w, b) grid oracle for 1-D negative margins: w in {-1, +1}, b on a
/// fine grid spanning the data with local refinement.
inline double grid_margin_1d(const std::vector<double>& xs, const std::vector<double>& ys) {
  double lo = *std::min_element(xs.begin(), xs.end()) - 1.0;
  double hi = *std::max_element(xs.begin(), xs.end()) + 1.0;
  auto value = [&](double w, double b) {
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < xs.size(); ++i) {
      worst = std::min(worst, ys[i] * (w * xs[i] + b));
    }
    return worst;
  };
  double best = -std::numeric_limits<double>::infinity();
  for (double w : {-1.0, 1.0}) {
    double best_b = lo;
    for (int pass = 0; pass < 3; ++pass) {
      const int steps = 4000;
      double local_best = -std::numeric_limits<double>::infinity();
      double local_b = lo;
      for (int s = 0; s <= steps; ++s) {
        const double b = lo + (hi - lo) * s / steps;
        const double v = value(w, -w * b);  // boundary located at x = b
        if (v > local_best) {
          local_best = v;
          local_b = b;
        }
      }
      const double span = (hi - lo) / steps * 4.0;
      lo = local_b - span;
      hi = local_b + span;
      best_b = local_b;
      best = std::max(best, local_best);
    }
    (void)best_b;
    lo = *std::min_element(xs.begin(), xs.end()) - 1.0;
    hi = *std::max_element(xs.begin(), xs.end()) + 1.0;
  }
  return best;
}

/// Chebyshev grid oracle for the 1-D max-error fit: joint (w, b) grid with
/// refinement around the best cell.
inline double grid_max_error_1d(const std::vector<double>& xs, const std::vector<double>& ys) {
  auto objective = [&](double w, double b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double r = w * xs[i] + b - ys[i];
      worst = std::max(worst, r * r);
    }
    return worst;
  };
  double w_lo = -5.0, w_hi = 5.0, b_lo = -5.0, b_hi = 5.0;
  double best = std::numeric_limits<double>::infinity();
  for (int pass = 0; pass < 4; ++pass) {
    const int steps = 200;
    double bw = w_lo, bb = b_lo;
    for (int i = 0; i <= steps; ++i) {
      for (int j = 0; j <= steps; ++j) {
        const double w = w_lo + (w_hi - w_lo) * i / steps;
        const double b = b_lo + (b_hi - b_lo) * j / steps;
        const double v = objective(w, b);
        if (v < best) {
          best = v;
          bw = w;
          bb = b;
        }
      }
    }
    const double w_span = (w_hi - w_lo) / steps * 4.0;
    const double b_span = (b_hi - b_lo) / steps * 4.0;
    w_lo = bw - w_span;
    w_hi = bw + w_span;
    b_lo = bb - b_span;
    b_hi = bb + b_span;
  }
  return best;
}

}  // namespace oracles
