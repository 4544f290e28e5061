#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <vector>

#include "domlearn/banana.hpp"
#include "domlearn/dataset.hpp"
#include "domlearn/kernel_inequality.hpp"
#include "domlearn/kernels.hpp"
#include "domlearn/max_error_linear.hpp"
#include "domlearn/negative_margin.hpp"
#include "domlearn/soft_margin.hpp"
#include "oracles.hpp"

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

LabeledDataset replicate_row(const LabeledDataset& data, Eigen::Index row, int copies) {
  Eigen::MatrixXd pts(data.size() + copies, data.dim());
  pts.topRows(data.size()) = data.points();
  std::vector<int> labels = data.labels();
  for (int c = 0; c < copies; ++c) {
    pts.row(data.size() + c) = data.points().row(row);
    labels.push_back(data.label(row));
  }
  return LabeledDataset(std::move(pts), std::move(labels), data.class_count());
}

/// Separable random 2-D instance: classes drawn in boxes a gap apart.
LabeledDataset random_separable_2d(unsigned seed, int per_class) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::uniform_real_distribution<double> angle(0.0, 3.14159);
  const double theta = angle(rng);
  const Eigen::Vector2d axis(std::cos(theta), std::sin(theta));
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int i = 0; i < per_class; ++i) {
    const Eigen::Vector2d p = Eigen::Vector2d(u(rng), u(rng)) + 3.0 * axis;
    rows.push_back({p.x(), p.y()});
    labels.push_back(0);
    const Eigen::Vector2d q = Eigen::Vector2d(u(rng), u(rng)) - 3.0 * axis;
    rows.push_back({q.x(), q.y()});
    labels.push_back(1);
  }
  return make(rows, labels);
}

std::vector<double> signed_labels(const LabeledDataset& data) {
  std::vector<double> ys;
  for (Eigen::Index i = 0; i < data.size(); ++i) ys.push_back(data.signed_label(i));
  return ys;
}

/// The duplicate-sensitivity fixture: separated classes along x with one
/// deep class-1 intruder inside class-0 territory.
LabeledDataset overlap_instance() {
  return make({{4.0, 0.3}, {4.5, -0.6}, {3.6, 0.9}, {4.2, -1.0}, {5.0, 0.5},
               {0.0, 0.4}, {-0.5, -0.7}, {0.6, 0.8}, {-0.2, -1.1}, {3.7, 0.1}},
              {0, 0, 0, 0, 0, 1, 1, 1, 1, 1});
}

}  // namespace

TEST_CASE("negative margin: symmetric separable pair in 1-D") {
  const auto data = make({{1.0}, {-1.0}}, {0, 1});
  const auto model = train_negative_margin(data, KernelKind::linear);
  CHECK(model.margin() == Catch::Approx(1.0).margin(1e-9));
  CHECK(model.score(Eigen::VectorXd::Zero(1)) == Catch::Approx(0.0).margin(1e-9));
  CHECK(model.predict(Eigen::VectorXd::Constant(1, 0.5)) == 0);
  CHECK(model.predict(Eigen::VectorXd::Constant(1, -0.5)) == 1);
}

TEST_CASE("negative margin: 1-D overlap has boundary 0 and margin -0.5") {
  const auto data = make({{-0.5}, {2.0}, {-2.0}, {0.5}}, {0, 0, 1, 1});
  const auto model = train_negative_margin(data, KernelKind::linear);
  CHECK(model.margin() == Catch::Approx(-0.5).margin(1e-6));
  CHECK(model.score(Eigen::VectorXd::Zero(1)) == Catch::Approx(0.0).margin(1e-6));

  const double oracle = oracles::grid_margin_1d({-0.5, 2.0, -2.0, 0.5}, {1, 1, -1, -1});
  CHECK(model.margin() == Catch::Approx(oracle).margin(1e-3));
}

TEST_CASE("negative margin matches the combinatorial oracle on separable 2-D instances") {
  for (unsigned seed = 0; seed < 12; ++seed) {
    const auto data = random_separable_2d(3000 + seed, 4);  // 8 points
    const auto model = train_negative_margin(data, KernelKind::linear);
    const double oracle = oracles::max_margin_2d(data.points(), signed_labels(data));
    INFO("seed " << seed);
    CHECK(model.margin() == Catch::Approx(oracle).margin(1e-6));
    CHECK(model.margin() > 0.0);
  }
}

TEST_CASE("negative margin matches the grid oracle on overlapping 1-D instances") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 12; ++trial) {
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    std::vector<double> xs;
    std::vector<double> ys;
    for (int i = 0; i < 8; ++i) {
      const double v = u(rng) + (i % 2 == 0 ? 0.8 : -0.8);
      rows.push_back({v});
      labels.push_back(i % 2);
      xs.push_back(v);
      ys.push_back(i % 2 == 0 ? 1.0 : -1.0);
    }
    const auto data = make(rows, labels);
    const auto model = train_negative_margin(data, KernelKind::linear);
    const double oracle = oracles::grid_margin_1d(xs, ys);
    INFO("trial " << trial);
    CHECK(model.margin() == Catch::Approx(oracle).margin(1e-3));
  }
}

TEST_CASE("negative margin certificate: reported margin is the exact minimum") {
  const auto data = generate_banana(20, 0.9, 41);
  for (KernelKind k : {KernelKind::linear, KernelKind::poly3}) {
    const auto model = train_negative_margin(data, k);
    double worst = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < data.size(); ++i) {
      worst = std::min(worst, data.signed_label(i) * model.score(data.point(i)));
    }
    CHECK(model.margin() == Catch::Approx(worst).margin(1e-9));

    // Unit norm in the kernel-induced space.
    const Eigen::MatrixXd gram = gram_matrix(k, data.points());
    CHECK(model.dual_weights().dot(gram * model.dual_weights()) == Catch::Approx(1.0).margin(1e-9));

    // Exactly the margin-achieving objects are flagged as support objects.
    for (Eigen::Index i = 0; i < data.size(); ++i) {
      const double gap = data.signed_label(i) * model.score(data.point(i)) - model.margin();
      const bool flagged = std::find(model.support_indices().begin(),
                                     model.support_indices().end(),
                                     i) != model.support_indices().end();
      CHECK(flagged == (gap <= 1e-6));
    }
    CHECK_FALSE(model.support_indices().empty());
  }
}

TEST_CASE("negative margin ignores duplicated objects") {
  const auto data = overlap_instance();
  const auto dup = replicate_row(data, 9, 10);  // the intruder, 10 extra copies
  for (KernelKind k : {KernelKind::linear, KernelKind::poly3}) {
    const auto a = train_negative_margin(data, k);
    const auto b = train_negative_margin(dup, k);
    CHECK(a.margin() == Catch::Approx(b.margin()).margin(1e-6));
    for (double x = -1.0; x <= 5.5; x += 0.65) {
      for (double y = -2.0; y <= 2.0; y += 0.4) {
        CHECK(a.predict(Eigen::Vector2d(x, y)) == b.predict(Eigen::Vector2d(x, y)));
      }
    }
  }
}

TEST_CASE("negative margin rejects degenerate input") {
  CHECK_THROWS_AS(train_negative_margin(make({{1.0}, {1.0}}, {0, 1}), KernelKind::linear),
                  std::invalid_argument);
  CHECK_THROWS_AS(train_negative_margin(make({{1.0}, {2.0}, {3.0}}, {0, 1, 2}), KernelKind::linear),
                  std::invalid_argument);
}

TEST_CASE("negative margin with poly3 separates the XOR pattern") {
  const auto data = make({{1, 1}, {-1, -1}, {1, -1}, {-1, 1}}, {0, 0, 1, 1});
  const auto model = train_negative_margin(data, KernelKind::poly3);
  CHECK(model.margin() > 0.0);
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    CHECK(model.predict(data.point(i)) == data.label(i));
  }
  CHECK_FALSE(model.analytic_boundary_distance(Eigen::Vector2d(0, 0)).has_value());
}

TEST_CASE("negative margin linear analytic distance is the hyperplane distance") {
  const auto data = random_separable_2d(77, 5);
  const auto model = train_negative_margin(data, KernelKind::linear);
  const Eigen::VectorXd w = model.prototypes().transpose() * model.dual_weights();
  CHECK(w.norm() == Catch::Approx(1.0).margin(1e-9));  // linear kernel: ||w|| = sqrt(b^T G b)
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (int t = 0; t < 10; ++t) {
    const Eigen::Vector2d x(u(rng), u(rng));
    const auto d = model.analytic_boundary_distance(x);
    REQUIRE(d.has_value());
    CHECK(*d == Catch::Approx(std::abs(model.score(x))).margin(1e-12));
  }
}

TEST_CASE("max error linear: exact interpolation of the symmetric pair") {
  const auto data = make({{1.0}, {-1.0}}, {0, 1});
  const auto model = train_max_error_linear(data);
  CHECK(model.worst_residual() <= 1e-6);
  CHECK(model.weights()(0) == Catch::Approx(1.0).margin(1e-3));
  CHECK(model.bias() == Catch::Approx(0.0).margin(1e-3));
}

TEST_CASE("max error linear equalizes residuals on the extremes (Chebyshev property)") {
  const auto data = make({{1.0}, {3.0}, {-1.0}, {-3.0}}, {0, 0, 1, 1});
  const auto model = train_max_error_linear(data);
  const double oracle = oracles::grid_max_error_1d({1, 3, -1, -3}, {1, 1, -1, -1});
  CHECK(model.worst_residual() == Catch::Approx(oracle).margin(1e-3));
  CHECK(model.worst_residual() == Catch::Approx(0.25).margin(1e-3));
  // Residuals on the two extreme points of one class are equal in magnitude.
  const double r1 = model.score(Eigen::VectorXd::Constant(1, 1.0)) - 1.0;
  const double r3 = model.score(Eigen::VectorXd::Constant(1, 3.0)) - 1.0;
  CHECK(std::abs(std::abs(r1) - std::abs(r3)) < 5e-2);
}

TEST_CASE("max error linear ignores duplicated objects") {
  const auto data = overlap_instance();
  const auto dup = replicate_row(data, 9, 10);
  const auto a = train_max_error_linear(data);
  const auto b = train_max_error_linear(dup);
  CHECK(a.worst_residual() == Catch::Approx(b.worst_residual()).margin(1e-6));
  for (double x = -1.0; x <= 5.5; x += 0.65) {
    for (double y = -2.0; y <= 2.0; y += 0.4) {
      CHECK(a.predict(Eigen::Vector2d(x, y)) == b.predict(Eigen::Vector2d(x, y)));
    }
  }
}

TEST_CASE("soft margin baseline separates a clean pair with zero slack") {
  const auto data = make({{2.0, 0.0}, {-2.0, 0.0}}, {0, 1});
  const auto model = train_soft_margin_baseline(data, 1.0);
  CHECK(model.slack_sum() <= 1e-4);
  CHECK(model.predict(Eigen::Vector2d(1.0, 0.0)) == 0);
  CHECK(model.predict(Eigen::Vector2d(-1.0, 0.0)) == 1);
}

TEST_CASE("soft margin baseline moves when a misclassified object is duplicated") {
  const auto data = overlap_instance();
  const auto base = train_soft_margin_baseline(data, 1.0);
  // The intruder (row 9) must be misclassified by the baseline.
  REQUIRE(base.predict(data.point(9)) != data.label(9));

  const auto dup = replicate_row(data, 9, 10);
  const auto moved = train_soft_margin_baseline(dup, 1.0);

  // Compare the normalized boundaries through signed distances on a grid.
  double max_shift = 0.0;
  for (double x = -1.0; x <= 5.5; x += 0.65) {
    for (double y = -2.0; y <= 2.0; y += 0.4) {
      const Eigen::Vector2d p(x, y);
      const double da = base.score(p) / base.weights().norm();
      const double db = moved.score(p) / moved.weights().norm();
      max_shift = std::max(max_shift, std::abs(da - db));
    }
  }
  CHECK(max_shift > 1e-3);
}

TEST_CASE("soft margin baseline validates its arguments") {
  CHECK_THROWS_AS(train_soft_margin_baseline(make({{1.0}, {-1.0}}, {0, 1}), 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(train_soft_margin_baseline(make({{1.0}, {2.0}, {3.0}}, {0, 1, 2}), 1.0),
                  std::invalid_argument);
}

TEST_CASE("kernel inequality: separable data converges with strict margins") {
  const auto data = random_separable_2d(123, 5);
  const auto model = train_kernel_inequality(data, KernelKind::linear);
  REQUIRE(model.has_value());
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    CHECK(data.signed_label(i) * model->score(data.point(i)) > 0.0);
  }
}

TEST_CASE("kernel inequality: XOR fails with the linear kernel, succeeds with poly3") {
  const auto xor_data = make({{1, 1}, {-1, -1}, {1, -1}, {-1, 1}}, {0, 0, 1, 1});
  CHECK_FALSE(train_kernel_inequality(xor_data, KernelKind::linear, 200).has_value());

  const auto model = train_kernel_inequality(xor_data, KernelKind::poly3, 2000);
  REQUIRE(model.has_value());
  for (Eigen::Index i = 0; i < xor_data.size(); ++i) {
    CHECK(xor_data.signed_label(i) * model->score(xor_data.point(i)) > 0.0);
  }
}

TEST_CASE("linear model contract: score, distance and the boundary tie rule") {
  const MaxErrorLinearModel model(Eigen::Vector2d(1.0, 0.0), 0.0, 0.0);
  const Eigen::Vector2d x(2.0, 3.0);
  CHECK(model.score(x) == 2.0);
  CHECK(*model.analytic_boundary_distance(x) == Catch::Approx(2.0));
  CHECK(model.predict(x) == 0);
  // Exactly on the boundary: assigned omega_1 by the weak inequality.
  CHECK(model.predict(Eigen::Vector2d(0.0, 7.0)) == 0);
  CHECK_THROWS_AS(model.score(Eigen::Vector3d(0, 0, 0)), std::invalid_argument);
}
