#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <vector>

#include "domlearn/banana.hpp"
#include "domlearn/dataset.hpp"
#include "domlearn/evaluation.hpp"
#include "domlearn/max_error_linear.hpp"
#include "domlearn/ncc.hpp"

using namespace domlearn;

namespace {

LabeledDataset make(std::vector<std::vector<double>> rows, std::vector<int> labels) {
  Eigen::MatrixXd pts(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      pts(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return LabeledDataset(std::move(pts), std::move(labels));
}

/// Random two-class test set labeled by the hyperplane w.x + b, with
/// `mislabel` objects given the wrong true label on purpose.
LabeledDataset labeled_by_plane(const Eigen::Vector2d& w, double b, int n, unsigned seed,
                                int mislabel = 0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  Eigen::MatrixXd pts(n, 2);
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Eigen::Vector2d p(u(rng), u(rng));
    // Keep points away from the boundary so the analytic distance is sane.
    while (std::abs(w.dot(p) + b) < 0.3) p = Eigen::Vector2d(u(rng), u(rng));
    pts.row(i) = p.transpose();
    const int true_label = (w.dot(p) + b) >= 0 ? 0 : 1;
    labels[static_cast<std::size_t>(i)] = i < mislabel ? 1 - true_label : true_label;
  }
  return LabeledDataset(std::move(pts), std::move(labels), 2);
}

}  // namespace

TEST_CASE("eta criterion: worst signed score decides") {
  const MaxErrorLinearModel f(Eigen::VectorXd::Ones(1), 0.0, 0.0);  // f(x) = x
  const auto s1 = make({{2.0}, {0.5}, {-1.0}}, {0, 0, 1});
  CHECK(eta_criterion(f, s1) == Catch::Approx(0.5));

  const auto s2 = make({{2.0}, {0.5}, {-1.0}, {0.3}}, {0, 0, 1, 1});
  CHECK(eta_criterion(f, s2) == Catch::Approx(-0.3));

  // Scaling the score scales eta: the criterion is scale-sensitive.
  const MaxErrorLinearModel f3(Eigen::VectorXd::Constant(1, 3.0), 0.0, 0.0);
  CHECK(eta_criterion(f3, s2) == Catch::Approx(3.0 * -0.3));
}

TEST_CASE("eta criterion rejects non-two-class input") {
  const MaxErrorLinearModel f(Eigen::VectorXd::Ones(1), 0.0, 0.0);
  CHECK_THROWS_AS(eta_criterion(f, make({{1.0}, {2.0}, {3.0}}, {0, 1, 2})),
                  std::invalid_argument);
}

TEST_CASE("representativeness d_max") {
  const auto reference = make({{0.0}, {10.0}}, {0, 1});
  const auto s = make({{0.0}}, {0});
  CHECK(representativeness_dmax(reference, s) == Catch::Approx(10.0));
  CHECK(representativeness_dmax(reference, reference) == 0.0);
}

TEST_CASE("representativeness d_max matches the double-loop oracle") {
  const auto reference = generate_banana(30, 0.9, 11);
  const auto test = generate_banana(10, 0.9, 12);
  double expected = 0.0;
  for (Eigen::Index i = 0; i < reference.size(); ++i) {
    double nearest = 1e300;
    for (Eigen::Index j = 0; j < test.size(); ++j) {
      nearest = std::min(nearest, (reference.points().row(i) - test.points().row(j)).norm());
    }
    expected = std::max(expected, nearest);
  }
  CHECK(representativeness_dmax(reference, test) == Catch::Approx(expected).margin(1e-12));
}

TEST_CASE("probe config validation") {
  ProbeConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.probes_per_test_object = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = ProbeConfig{};
  cfg.k_opposite = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = ProbeConfig{};
  cfg.interpolation_count = -1;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = ProbeConfig{};
  cfg.bisection_tolerance = 3.0;  // larger than neighborhood_scale
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("boundary probing recovers analytic distances on a linear model") {
  const Eigen::Vector2d w = Eigen::Vector2d(1.0, 0.4).normalized();
  const double b = -0.3;
  const MaxErrorLinearModel model(w, b, 0.0);
  const auto test = labeled_by_plane(w, b, 60, 2024);
  ProbeConfig cfg;
  cfg.seed = 7;
  const auto report = boundary_signed_distances(model, test, cfg);

  const double diam = diameter(test.points());
  const double tol_abs = cfg.bisection_tolerance * diam;
  int within_5pct = 0;
  for (Eigen::Index i = 0; i < test.size(); ++i) {
    const double analytic = *model.analytic_boundary_distance(test.point(i));
    const double est = report.signed_distances[static_cast<std::size_t>(i)];
    CHECK(est > 0.0);  // all correctly labeled
    // A found boundary point can never be closer than the true distance.
    CHECK(std::abs(est) >= analytic - tol_abs);
    if (std::abs(est) <= analytic * 1.05) ++within_5pct;

    // Boundary certificate: the reported point sits on the boundary up to
    // the bisection tolerance (score is the exact distance here).
    const double residual =
        std::abs(model.score(report.boundary_points[static_cast<std::size_t>(i)]));
    CHECK(residual <= tol_abs);
  }
  CHECK(within_5pct >= static_cast<int>(0.95 * static_cast<double>(test.size())));
}

TEST_CASE("mislabeled objects get negative signed distances") {
  const Eigen::Vector2d w(0.0, 1.0);
  const MaxErrorLinearModel model(w, 0.0, 0.0);
  const auto test = labeled_by_plane(w, 0.0, 40, 55, 8);  // first 8 mislabeled
  ProbeConfig cfg;
  cfg.seed = 3;
  const auto report = boundary_signed_distances(model, test, cfg);
  for (int i = 0; i < 8; ++i) {
    CHECK(report.signed_distances[static_cast<std::size_t>(i)] < 0.0);
  }
  for (Eigen::Index i = 8; i < test.size(); ++i) {
    CHECK(report.signed_distances[static_cast<std::size_t>(i)] > 0.0);
  }
  // e_S is the exact minimum of the signed distances.
  double expected = std::numeric_limits<double>::infinity();
  for (double d : report.signed_distances) expected = std::min(expected, d);
  CHECK(report.e_s == expected);
  CHECK(report.e_s < 0.0);
}

TEST_CASE("probing is deterministic given the seed") {
  const auto data = generate_banana(20, 0.9, 800);
  const auto model = train_ncc(data);
  const auto test = generate_banana(25, 0.9, 801);
  ProbeConfig cfg;
  cfg.probes_per_test_object = 60;
  cfg.seed = 99;
  const auto a = boundary_signed_distances(model, test, cfg);
  const auto b = boundary_signed_distances(model, test, cfg);
  CHECK(a.signed_distances == b.signed_distances);
  CHECK(a.e_s == b.e_s);
  CHECK(a.eta == b.eta);

  ProbeConfig other = cfg;
  other.seed = 100;
  const auto c = boundary_signed_distances(model, test, other);
  CHECK(a.signed_distances != c.signed_distances);
}

TEST_CASE("probe budget growth never worsens the estimate (median over seeds)") {
  const Eigen::Vector2d w = Eigen::Vector2d(0.8, -0.6).normalized();
  const MaxErrorLinearModel model(w, 0.2, 0.0);
  const auto test = labeled_by_plane(w, 0.2, 20, 4096);

  std::vector<double> deltas;
  for (RngSeed seed = 1; seed <= 10; ++seed) {
    ProbeConfig small;
    small.probes_per_test_object = 60;
    small.seed = seed;
    ProbeConfig big = small;
    big.probes_per_test_object = 120;
    const auto r_small = boundary_signed_distances(model, test, small);
    const auto r_big = boundary_signed_distances(model, test, big);
    for (Eigen::Index i = 0; i < test.size(); ++i) {
      deltas.push_back(std::abs(r_big.signed_distances[static_cast<std::size_t>(i)]) -
                       std::abs(r_small.signed_distances[static_cast<std::size_t>(i)]));
    }
  }
  std::sort(deltas.begin(), deltas.end());
  const double median = deltas[deltas.size() / 2];
  CHECK(median <= 1e-9);
}

TEST_CASE("an everywhere-constant model flags every object") {
  const MaxErrorLinearModel constant(Eigen::Vector2d::Zero(), 1.0, 0.0);
  const auto test = generate_banana(10, 0.9, 5);
  ProbeConfig cfg;
  cfg.probes_per_test_object = 30;
  cfg.seed = 1;
  const auto report = boundary_signed_distances(constant, test, cfg);
  CHECK(report.incomplete);
  for (Eigen::Index i = 0; i < test.size(); ++i) {
    CHECK(report.no_opposite_flag[static_cast<std::size_t>(i)] == 1);
    CHECK(std::isinf(report.signed_distances[static_cast<std::size_t>(i)]));
  }
  CHECK(std::isnan(report.e_s));
}

TEST_CASE("report CSV has one row per object plus the summary line") {
  const auto data = generate_banana(12, 0.9, 31);
  const auto model = train_ncc(data);
  const auto test = generate_banana(8, 0.9, 32);
  ProbeConfig cfg;
  cfg.probes_per_test_object = 40;
  cfg.seed = 2;
  auto report = boundary_signed_distances(model, test, cfg);
  report.d_max = representativeness_dmax(data, test);

  const auto path = std::filesystem::temp_directory_path() / "domlearn_report.csv";
  write_report_csv(report, path.string());
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string line;
  std::getline(in, line);
  CHECK(line.rfind("index,true_label,predicted_label,signed_distance,flag", 0) == 0);
  int rows = 0;
  bool summary_seen = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      summary_seen = true;
      CHECK(line.find("e_S=") != std::string::npos);
      CHECK(line.find("d_max=") != std::string::npos);
    } else {
      ++rows;
    }
  }
  CHECK(rows == test.size());
  CHECK(summary_seen);
  std::filesystem::remove(path);
}
