#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "domlearn/dataset.hpp"
#include "domlearn/rng.hpp"

namespace domlearn {

/// Default isotropic noise for the banana generator. Calibrated so that a
/// few percent of each class land on the wrong side of the best boundary
/// between the two arcs (slight class overlap).
inline constexpr double kDefaultBananaNoise = 0.9;
inline constexpr double kDefaultBananaArcRadius = 5.0;

/// Two interleaved half-circle arcs ("banana" classes) in 2-D.
///
/// Class 0 follows the upper half circle of radius r centered at the origin;
/// class 1 follows the lower half circle of radius r centered at (r, r/2).
/// Arc angles are sampled uniformly and isotropic Gaussian noise of scale
/// noise_scale is added. Rows 0..n-1 are class 0, rows n..2n-1 are class 1.
inline LabeledDataset generate_banana(int n_per_class, double noise_scale, RngSeed seed,
                                      double arc_radius = kDefaultBananaArcRadius) {
  if (n_per_class < 1) throw std::invalid_argument("generate_banana: n_per_class must be >= 1");
  if (!(noise_scale > 0.0)) throw std::invalid_argument("generate_banana: noise_scale must be > 0");
  if (!(arc_radius > 0.0)) throw std::invalid_argument("generate_banana: arc_radius must be > 0");

  const double r = arc_radius;
  auto engine = make_engine(derive_seed(seed, "banana"));
  std::uniform_real_distribution<double> angle(0.0, std::numbers::pi);
  std::normal_distribution<double> noise(0.0, noise_scale);

  Eigen::MatrixXd pts(2 * n_per_class, 2);
  std::vector<int> labels(static_cast<std::size_t>(2 * n_per_class));
  for (int i = 0; i < n_per_class; ++i) {
    const double t = angle(engine);
    pts(i, 0) = r * std::cos(t) + noise(engine);
    pts(i, 1) = r * std::sin(t) + noise(engine);
    labels[static_cast<std::size_t>(i)] = 0;
  }
  for (int i = 0; i < n_per_class; ++i) {
    const double t = angle(engine);
    const Eigen::Index row = n_per_class + i;
    pts(row, 0) = r - r * std::cos(t) + noise(engine);
    pts(row, 1) = r / 2.0 - r * std::sin(t) + noise(engine);
    labels[static_cast<std::size_t>(row)] = 1;
  }
  return LabeledDataset(std::move(pts), std::move(labels), 2);
}

/// Euclidean distance from `p` to the noise-free arc of the given banana
/// class. Used to measure how many generated points fall closer to the
/// other class's arc than to their own.
inline double banana_arc_distance(const Eigen::Vector2d& p, int cls,
                                  double arc_radius = kDefaultBananaArcRadius) {
  if (cls != 0 && cls != 1) throw std::invalid_argument("banana_arc_distance: class must be 0 or 1");
  const double r = arc_radius;
  // Arc 0: center (0,0), angles [0, pi]. Arc 1: center (r, r/2), angles [-pi, 0].
  const Eigen::Vector2d center = cls == 0 ? Eigen::Vector2d(0.0, 0.0) : Eigen::Vector2d(r, r / 2.0);
  const Eigen::Vector2d v = p - center;
  const double rho = v.norm();
  const bool on_arc_side = cls == 0 ? v.y() >= 0.0 : v.y() <= 0.0;
  if (rho > 0.0 && on_arc_side) return std::abs(rho - r);
  const Eigen::Vector2d end_a = center + Eigen::Vector2d(-r, 0.0);
  const Eigen::Vector2d end_b = center + Eigen::Vector2d(r, 0.0);
  return std::min((p - end_a).norm(), (p - end_b).norm());
}

/// Fraction of objects lying nearer to the other class's arc than to their
/// own (the overlap rate of the generator at a given noise level).
inline double banana_wrong_side_fraction(const LabeledDataset& data,
                                         double arc_radius = kDefaultBananaArcRadius) {
  Eigen::Index wrong = 0;
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    const Eigen::Vector2d p = data.point(i);
    const int own = data.label(i);
    if (banana_arc_distance(p, 1 - own, arc_radius) < banana_arc_distance(p, own, arc_radius)) {
      ++wrong;
    }
  }
  return static_cast<double>(wrong) / static_cast<double>(data.size());
}

}  // namespace domlearn
