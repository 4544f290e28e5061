#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "domlearn/csv.hpp"
#include "domlearn/dataset.hpp"
#include "domlearn/distance.hpp"
#include "domlearn/model.hpp"
#include "domlearn/rng.hpp"

namespace domlearn {

/// Parameters of the stochastic boundary-distance procedure.
///
/// Probes are Gaussian perturbations of the test objects with standard
/// deviation neighborhood_scale times the median within-test
/// nearest-neighbor distance. bisection_tolerance is a fraction of the test
/// set diameter.
struct ProbeConfig {
  int probes_per_test_object = 200;
  double neighborhood_scale = 2.0;
  int k_opposite = 5;
  int interpolation_count = 3;
  double bisection_tolerance = 1e-4;
  RngSeed seed = 0;

  void validate() const {
    if (probes_per_test_object < 1) throw std::invalid_argument("probe: probes_per_test_object must be >= 1");
    if (!(neighborhood_scale > 0.0)) throw std::invalid_argument("probe: neighborhood_scale must be > 0");
    if (k_opposite < 1) throw std::invalid_argument("probe: k_opposite must be >= 1");
    if (interpolation_count < 0) throw std::invalid_argument("probe: interpolation_count must be >= 0");
    if (!(bisection_tolerance > 0.0)) throw std::invalid_argument("probe: bisection_tolerance must be > 0");
    if (!(bisection_tolerance < neighborhood_scale)) {
      throw std::invalid_argument("probe: bisection_tolerance must be smaller than neighborhood_scale");
    }
  }
};

/// Worst-case evaluation result: per-object signed boundary distances
/// (positive when the model labels the object correctly), their minimum
/// e_S, and the signed-score criterion eta.
struct EvalReport {
  std::vector<double> signed_distances;
  std::vector<int> true_labels;
  std::vector<int> predicted_labels;
  std::vector<Eigen::VectorXd> boundary_points;
  std::vector<char> no_opposite_flag;    // 1 when no opposite-label probe was found
  double e_s = std::numeric_limits<double>::quiet_NaN();
  double eta = std::numeric_limits<double>::quiet_NaN();
  std::optional<double> d_max;
  bool incomplete = false;
};

/// eta(S|f) = min over test objects of the true-label-signed score: the
/// 'worst' object decides. Larger is better; the value is in the model's
/// own output scale.
inline double eta_criterion(const DecisionModel& model, const LabeledDataset& test) {
  if (test.size() < 1) throw std::invalid_argument("eta_criterion: empty test set");
  if (test.class_count() != 2 || model.class_count() != 2) {
    throw std::invalid_argument("eta_criterion: two-class model and test set required");
  }
  double eta = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < test.size(); ++i) {
    eta = std::min(eta, test.signed_label(i) * model.score(test.point(i)));
  }
  return eta;
}

/// d_max = max over reference objects of the distance to the nearest test
/// object. The reference sample stands in for "all x" of the domain; small
/// values mean the test set is domain-representative.
inline double representativeness_dmax(const LabeledDataset& reference, const LabeledDataset& test) {
  if (reference.size() < 1 || test.size() < 1) {
    throw std::invalid_argument("representativeness_dmax: empty input");
  }
  double worst = 0.0;
  for (Eigen::Index i = 0; i < reference.size(); ++i) {
    double nearest = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < test.size(); ++j) {
      nearest = std::min(nearest, (reference.points().row(i) - test.points().row(j)).norm());
    }
    worst = std::max(worst, nearest);
  }
  return worst;
}

namespace detail {

/// Indices of the k nearest rows of `points` (among those with the wanted
/// label flag) to the query.
inline std::vector<Eigen::Index> k_nearest_with_label(const Eigen::MatrixXd& points,
                                                      const std::vector<int>& labels,
                                                      const Eigen::VectorXd& query, int wanted,
                                                      bool match, int k) {
  std::vector<std::pair<double, Eigen::Index>> heap;  // max-heap of (dist, idx)
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    const bool is_match = labels[static_cast<std::size_t>(i)] == wanted;
    if (is_match != match) continue;
    const double d = (points.row(i).transpose() - query).norm();
    if (static_cast<int>(heap.size()) < k) {
      heap.emplace_back(d, i);
      std::push_heap(heap.begin(), heap.end());
    } else if (d < heap.front().first) {
      std::pop_heap(heap.begin(), heap.end());
      heap.back() = {d, i};
      std::push_heap(heap.begin(), heap.end());
    }
  }
  std::sort(heap.begin(), heap.end());
  std::vector<Eigen::Index> out;
  out.reserve(heap.size());
  for (const auto& [d, i] : heap) out.push_back(i);
  return out;
}

/// Bisects the segment from `inside` (model label = own) to `outside`
/// (different label) until the bracket is shorter than tol; returns the
/// bracket midpoint as the boundary estimate.
inline Eigen::VectorXd bisect_to_boundary(const DecisionModel& model, Eigen::VectorXd inside,
                                          Eigen::VectorXd outside, int own_label, double tol) {
  while ((outside - inside).norm() > tol) {
    const Eigen::VectorXd mid = 0.5 * (inside + outside);
    if (model.predict(mid) == own_label) {
      inside = mid;
    } else {
      outside = mid;
    }
  }
  return 0.5 * (inside + outside);
}

}  // namespace detail

/// Stochastic approximation of each test object's distance to the decision
/// boundary:
///   1. sample probes around the test objects,
///   2. label test objects and probes by the model,
///   3. per test object find the k nearest probes with a different label,
///   4. enrich candidates by interpolating between same-label neighbors and
///      the opposite-label probes,
///   5. bisect from the test object towards every candidate,
///   6. keep the nearest boundary point,
///   7. sign the distance by the correctness of the model's label,
///   8. e_S = minimum signed distance.
///
/// Deterministic given (model, test, config); probe streams are split per
/// test object, so the result does not depend on evaluation order.
inline EvalReport boundary_signed_distances(const DecisionModel& model, const LabeledDataset& test,
                                            const ProbeConfig& config) {
  config.validate();
  if (test.dim() != model.dim()) {
    throw std::invalid_argument("boundary_signed_distances: test dimension mismatch");
  }
  const Eigen::Index n = test.size();
  const Eigen::Index m = test.dim();

  double nn_scale = median_nearest_neighbor_distance(test.points());
  if (!(nn_scale > 0.0)) nn_scale = 1.0;  // single object or all-coincident test set
  const double sigma = config.neighborhood_scale * nn_scale;
  double diam = diameter(test.points());
  if (!(diam > 0.0)) diam = 1.0;
  const double tol = config.bisection_tolerance * diam;

  // Step 1: probe cloud R, config.probes_per_test_object per test object.
  const Eigen::Index r_total = n * config.probes_per_test_object;
  Eigen::MatrixXd probes(r_total, m);
  for (Eigen::Index i = 0; i < n; ++i) {
    auto engine = make_engine(derive_seed(config.seed, "probe-object", i));
    std::normal_distribution<double> gauss(0.0, sigma);
    for (int p = 0; p < config.probes_per_test_object; ++p) {
      for (Eigen::Index j = 0; j < m; ++j) {
        probes(i * config.probes_per_test_object + p, j) = test.points()(i, j) + gauss(engine);
      }
    }
  }

  // Step 2: model labels for S and R.
  std::vector<int> test_label(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) test_label[static_cast<std::size_t>(i)] = model.predict(test.point(i));
  std::vector<int> probe_label(static_cast<std::size_t>(r_total));
  for (Eigen::Index i = 0; i < r_total; ++i) {
    probe_label[static_cast<std::size_t>(i)] = model.predict(probes.row(i).transpose());
  }

  EvalReport report;
  report.signed_distances.resize(static_cast<std::size_t>(n));
  report.true_labels.resize(static_cast<std::size_t>(n));
  report.predicted_labels = test_label;
  report.boundary_points.assign(static_cast<std::size_t>(n), Eigen::VectorXd());
  report.no_opposite_flag.assign(static_cast<std::size_t>(n), 0);

  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::VectorXd xs = test.point(i);
    const int own = test_label[static_cast<std::size_t>(i)];
    report.true_labels[static_cast<std::size_t>(i)] = test.label(i);

    // Step 3: nearest opposite-label probes.
    const auto opposite =
        detail::k_nearest_with_label(probes, probe_label, xs, own, false, config.k_opposite);
    if (opposite.empty()) {
      report.no_opposite_flag[static_cast<std::size_t>(i)] = 1;
      report.signed_distances[static_cast<std::size_t>(i)] =
          std::numeric_limits<double>::infinity();
      report.incomplete = true;
      continue;
    }

    // Step 4: interpolate between same-label neighbors and opposite probes;
    // keep the interpolants the model labels as opposite.
    std::vector<Eigen::VectorXd> candidates;
    for (Eigen::Index oi : opposite) candidates.push_back(probes.row(oi).transpose());
    if (config.interpolation_count > 0) {
      const auto same =
          detail::k_nearest_with_label(probes, probe_label, xs, own, true, config.k_opposite);
      for (Eigen::Index si : same) {
        for (Eigen::Index oi : opposite) {
          for (int t = 1; t <= config.interpolation_count; ++t) {
            const double frac =
                static_cast<double>(t) / static_cast<double>(config.interpolation_count + 1);
            const Eigen::VectorXd c =
                (1.0 - frac) * probes.row(si).transpose() + frac * probes.row(oi).transpose();
            if (model.predict(c) != own) candidates.push_back(c);
          }
        }
      }
    }

    // Steps 5-6: bisect towards every candidate, keep the nearest hit.
    double best = std::numeric_limits<double>::infinity();
    Eigen::VectorXd best_point;
    for (const Eigen::VectorXd& c : candidates) {
      const Eigen::VectorXd hit = detail::bisect_to_boundary(model, xs, c, own, tol);
      const double d = (hit - xs).norm();
      if (d < best) {
        best = d;
        best_point = hit;
      }
    }

    // Step 7: sign by correctness of the model label.
    const double sign = own == test.label(i) ? 1.0 : -1.0;
    report.signed_distances[static_cast<std::size_t>(i)] = sign * best;
    report.boundary_points[static_cast<std::size_t>(i)] = best_point;
  }

  // Step 8: e_S over the objects that produced a boundary point.
  double e_s = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!report.no_opposite_flag[static_cast<std::size_t>(i)]) {
      e_s = std::min(e_s, report.signed_distances[static_cast<std::size_t>(i)]);
    }
  }
  report.e_s = std::isfinite(e_s) ? e_s : std::numeric_limits<double>::quiet_NaN();
  if (test.class_count() == 2 && model.class_count() == 2) {
    report.eta = eta_criterion(model, test);
  }
  return report;
}

/// One row per test object plus a trailing summary comment line.
inline void write_report_csv(const EvalReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_report_csv: cannot open " + path);
  const Eigen::Index m = [&report]() -> Eigen::Index {
    for (const auto& p : report.boundary_points) {
      if (p.size() > 0) return p.size();
    }
    return 0;
  }();
  out << "index,true_label,predicted_label,signed_distance,flag";
  for (Eigen::Index j = 0; j < m; ++j) out << ",b" << (j + 1);
  out << "\n";
  for (std::size_t i = 0; i < report.signed_distances.size(); ++i) {
    out << i << "," << report.true_labels[i] << "," << report.predicted_labels[i] << ","
        << detail::format_g17(report.signed_distances[i]) << ","
        << (report.no_opposite_flag[i] ? "no_opposite" : "ok");
    for (Eigen::Index j = 0; j < m; ++j) {
      out << ",";
      if (report.boundary_points[i].size() > 0) {
        out << detail::format_g17(report.boundary_points[i](j));
      }
    }
    out << "\n";
  }
  out << "# e_S=" << detail::format_g17(report.e_s) << ",eta=" << detail::format_g17(report.eta)
      << ",d_max=" << (report.d_max ? detail::format_g17(*report.d_max) : std::string("none"))
      << ",incomplete=" << (report.incomplete ? 1 : 0) << "\n";
  if (!out) throw std::runtime_error("write_report_csv: write failed for " + path);
}

}  // namespace domlearn
