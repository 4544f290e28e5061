#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "domlearn/banana.hpp"
#include "domlearn/csv.hpp"
#include "domlearn/dataset.hpp"
#include "domlearn/evaluation.hpp"
#include "domlearn/fldd.hpp"
#include "domlearn/kernel_domain.hpp"
#include "domlearn/kernel_inequality.hpp"
#include "domlearn/max_error_linear.hpp"
#include "domlearn/model.hpp"
#include "domlearn/ncc.hpp"
#include "domlearn/negative_margin.hpp"
#include "domlearn/purity_tree.hpp"
#include "domlearn/rng.hpp"
#include "domlearn/soft_margin.hpp"

namespace domlearn {

/// One configured classifier of the experiment roster.
struct ClassifierSpec {
  std::string kind;
  KernelKind kernel = KernelKind::linear;      // negative_margin, kernel_inequality
  int max_depth = kDefaultPurityTreeMaxDepth;  // purity_tree
  double penalty = 1.0;                        // soft_margin
  int max_epochs = 1000;                       // kernel_inequality

  /// Stable identifier; seed streams and result keys hash this, so adding
  /// another classifier to the roster cannot disturb existing results.
  std::string id() const {
    if (kind == "negative_margin" || kind == "kernel_inequality") {
      return kind + "_" + to_string(kernel);
    }
    return kind;
  }

  std::string display_name() const {
    if (kind == "ncc") return "Nearest Center";
    if (kind == "fldd") return "Domain Fisher";
    if (kind == "purity_tree") return "Decision Tree";
    if (kind == "kernel_domain") return "Kernel Domain";
    if (kind == "max_error_linear") return "Max Error Linear";
    if (kind == "soft_margin") return "Soft Margin (baseline)";
    if (kind == "negative_margin") {
      return kernel == KernelKind::linear ? "Negative Margin SVM (linear)"
                                          : "Negative Margin SVM (poly3)";
    }
    if (kind == "kernel_inequality") {
      return "Kernel Inequality (" + to_string(kernel) + ")";
    }
    return kind;
  }
};

inline const std::vector<std::string>& known_classifier_kinds() {
  static const std::vector<std::string> kinds = {
      "ncc",           "fldd",
      "purity_tree",   "kernel_domain",
      "negative_margin", "max_error_linear",
      "soft_margin",   "kernel_inequality"};
  return kinds;
}

/// Trains the classifier described by `spec`. Stochastic trainers are
/// seeded from `seed` so the whole pipeline stays reproducible.
inline std::shared_ptr<DecisionModel> train_classifier(const ClassifierSpec& spec,
                                                       const LabeledDataset& data, RngSeed seed) {
  if (spec.kind == "ncc") return std::make_shared<NccModel>(train_ncc(data));
  if (spec.kind == "fldd") return std::make_shared<FlddModel>(train_fldd(data));
  if (spec.kind == "purity_tree") {
    return std::make_shared<PurityTreeModel>(train_purity_tree(data, spec.max_depth));
  }
  if (spec.kind == "kernel_domain") {
    return std::make_shared<KernelDomainModel>(train_kernel_domain(data));
  }
  if (spec.kind == "negative_margin") {
    NegativeMarginOptions opt;
    opt.seed = seed;
    return std::make_shared<MarginModel>(train_negative_margin(data, spec.kernel, opt));
  }
  if (spec.kind == "max_error_linear") {
    MaxErrorOptions opt;
    opt.seed = seed;
    return std::make_shared<MaxErrorLinearModel>(train_max_error_linear(data, opt));
  }
  if (spec.kind == "soft_margin") {
    SoftMarginOptions opt;
    opt.seed = seed;
    return std::make_shared<SoftMarginBaseline>(
        train_soft_margin_baseline(data, spec.penalty, opt));
  }
  if (spec.kind == "kernel_inequality") {
    auto model = train_kernel_inequality(data, spec.kernel, spec.max_epochs);
    if (!model) {
      throw std::runtime_error("kernel_inequality: classes not separable within epoch cap");
    }
    return std::make_shared<KernelInequalityModel>(std::move(*model));
  }
  throw std::invalid_argument("unknown classifier kind '" + spec.kind + "'");
}

struct BananaParams {
  double arc_radius = kDefaultBananaArcRadius;
  double noise_scale = kDefaultBananaNoise;
};

struct ExperimentConfig {
  std::vector<int> train_sizes_per_class;
  int test_size_per_class = 200;
  int repetitions = 10;
  std::vector<ClassifierSpec> classifiers;
  ProbeConfig probe;
  BananaParams data;
  RngSeed master_seed = 1;
  int threads = 0;  // 0 = hardware concurrency

  void validate() const {
    if (train_sizes_per_class.empty()) {
      throw std::invalid_argument("experiment: train_sizes_per_class must not be empty");
    }
    for (std::size_t i = 0; i < train_sizes_per_class.size(); ++i) {
      if (train_sizes_per_class[i] < 1) {
        throw std::invalid_argument("experiment: training sizes must be positive");
      }
      if (i > 0 && train_sizes_per_class[i] <= train_sizes_per_class[i - 1]) {
        throw std::invalid_argument("experiment: training sizes must be strictly ascending");
      }
    }
    if (test_size_per_class < 1) {
      throw std::invalid_argument("experiment: test_size_per_class must be >= 1");
    }
    if (repetitions < 1) throw std::invalid_argument("experiment: repetitions must be >= 1");
    if (classifiers.empty()) {
      throw std::invalid_argument("experiment: classifier list must not be empty");
    }
    const auto& kinds = known_classifier_kinds();
    for (const auto& c : classifiers) {
      if (std::find(kinds.begin(), kinds.end(), c.kind) == kinds.end()) {
        throw std::invalid_argument("experiment: unknown classifier kind '" + c.kind + "'");
      }
    }
    if (!(data.noise_scale > 0.0) || !(data.arc_radius > 0.0)) {
      throw std::invalid_argument("experiment: banana parameters must be positive");
    }
    probe.validate();
    if (threads < 0) throw std::invalid_argument("experiment: threads must be >= 0");
  }
};

/// The learning-curve protocol used throughout: banana data, the five
/// domain-based classifiers, sizes up to 50 per class, a fixed test set of
/// 200 per class, 10 repetitions.
inline ExperimentConfig default_experiment_config() {
  ExperimentConfig cfg;
  cfg.train_sizes_per_class = {2, 3, 5, 7, 10, 15, 20, 30, 50};
  cfg.test_size_per_class = 200;
  cfg.repetitions = 10;
  cfg.master_seed = 20240601;
  cfg.classifiers = {
      ClassifierSpec{.kind = "ncc"},
      ClassifierSpec{.kind = "fldd"},
      ClassifierSpec{.kind = "purity_tree"},
      ClassifierSpec{.kind = "negative_margin", .kernel = KernelKind::linear},
      ClassifierSpec{.kind = "negative_margin", .kernel = KernelKind::poly3},
  };
  return cfg;
}

/// Mean worst-case performance per (classifier, training size) cell with
/// the per-repetition values it was computed from.
struct CurveCell {
  std::string classifier_id;
  std::string display_name;
  int train_size = 0;
  std::vector<double> rep_values;  // e_S per repetition; NaN where the cell failed
  std::vector<std::string> rep_errors;
  double mean = std::numeric_limits<double>::quiet_NaN();
  double stddev = std::numeric_limits<double>::quiet_NaN();
  int failed_reps = 0;
};

struct LearningCurve {
  std::vector<int> sizes;
  std::vector<std::string> classifier_ids;
  std::vector<std::string> display_names;
  std::vector<CurveCell> cells;  // classifier-major, then size

  const CurveCell& cell(std::size_t classifier, std::size_t size_index) const {
    return cells[classifier * sizes.size() + size_index];
  }
};

namespace detail {

/// Mean over the finite entries, summed in repetition order so the stored
/// value is exactly recomputable from the stored per-repetition values.
inline void aggregate_cell(CurveCell& cell) {
  double sum = 0.0;
  long count = 0;
  for (double v : cell.rep_values) {
    if (std::isfinite(v)) {
      sum += v;
      ++count;
    }
  }
  cell.failed_reps = static_cast<int>(cell.rep_values.size()) - static_cast<int>(count);
  if (count == 0) return;
  cell.mean = sum / static_cast<double>(count);
  if (count >= 2) {
    double ss = 0.0;
    for (double v : cell.rep_values) {
      if (std::isfinite(v)) ss += (v - cell.mean) * (v - cell.mean);
    }
    cell.stddev = std::sqrt(ss / static_cast<double>(count - 1));
  }
}

}  // namespace detail

/// Runs the full protocol: one fixed test set, per-repetition nested
/// training subsets, every classifier trained on every size and evaluated
/// with the stochastic boundary-distance procedure. Cells run in parallel;
/// per-cell seed streams keep the result independent of scheduling. A
/// failing cell is recorded and never aborts the rest of the grid.
inline LearningCurve run_learning_curve(const ExperimentConfig& config) {
  config.validate();
  const auto& sizes = config.train_sizes_per_class;

  const LabeledDataset test =
      generate_banana(config.test_size_per_class, config.data.noise_scale,
                      derive_seed(config.master_seed, "test-set"), config.data.arc_radius);

  std::vector<std::vector<LabeledDataset>> subsets;  // [rep][size]
  subsets.reserve(static_cast<std::size_t>(config.repetitions));
  for (int rep = 0; rep < config.repetitions; ++rep) {
    const LabeledDataset pool =
        generate_banana(sizes.back(), config.data.noise_scale,
                        derive_seed(config.master_seed, "train-pool", rep), config.data.arc_radius);
    subsets.push_back(
        nested_training_subsets(pool, sizes, derive_seed(config.master_seed, "subsets", rep)));
  }

  LearningCurve curve;
  curve.sizes = sizes;
  for (const auto& c : config.classifiers) {
    curve.classifier_ids.push_back(c.id());
    curve.display_names.push_back(c.display_name());
  }
  curve.cells.resize(config.classifiers.size() * sizes.size());
  for (std::size_t ci = 0; ci < config.classifiers.size(); ++ci) {
    for (std::size_t si = 0; si < sizes.size(); ++si) {
      CurveCell& cell = curve.cells[ci * sizes.size() + si];
      cell.classifier_id = config.classifiers[ci].id();
      cell.display_name = config.classifiers[ci].display_name();
      cell.train_size = sizes[si];
      cell.rep_values.assign(static_cast<std::size_t>(config.repetitions),
                             std::numeric_limits<double>::quiet_NaN());
      cell.rep_errors.assign(static_cast<std::size_t>(config.repetitions), "");
    }
  }

  struct Task {
    std::size_t classifier;
    std::size_t size_index;
    int rep;
  };
  std::vector<Task> tasks;
  for (std::size_t ci = 0; ci < config.classifiers.size(); ++ci) {
    for (std::size_t si = 0; si < sizes.size(); ++si) {
      for (int rep = 0; rep < config.repetitions; ++rep) tasks.push_back({ci, si, rep});
    }
  }

  auto run_task = [&](const Task& task) {
    const ClassifierSpec& spec = config.classifiers[task.classifier];
    CurveCell& cell = curve.cells[task.classifier * sizes.size() + task.size_index];
    try {
      const LabeledDataset& train =
          subsets[static_cast<std::size_t>(task.rep)][task.size_index];
      const RngSeed train_seed = derive_seed_tagged(config.master_seed, "train", spec.id(),
                                                    task.rep, sizes[task.size_index]);
      const auto model = train_classifier(spec, train, train_seed);
      ProbeConfig probe = config.probe;
      probe.seed = derive_seed_tagged(config.master_seed, "probe", spec.id(), task.rep,
                                      sizes[task.size_index]);
      const EvalReport report = boundary_signed_distances(*model, test, probe);
      cell.rep_values[static_cast<std::size_t>(task.rep)] = report.e_s;
    } catch (const std::exception& e) {
      cell.rep_errors[static_cast<std::size_t>(task.rep)] = e.what();
    }
  };

  unsigned n_threads = config.threads > 0 ? static_cast<unsigned>(config.threads)
                                          : std::max(1u, std::thread::hardware_concurrency());
  n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(tasks.size()));
  if (n_threads <= 1) {
    for (const Task& t : tasks) run_task(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    workers.reserve(n_threads);
    for (unsigned w = 0; w < n_threads; ++w) {
      workers.emplace_back([&]() {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= tasks.size()) return;
          run_task(tasks[i]);
        }
      });
    }
    for (auto& t : workers) t.join();
  }

  for (auto& cell : curve.cells) detail::aggregate_cell(cell);
  return curve;
}

/// CSV twin of the learning-curve plot: one row per (classifier, size) with
/// the mean, spread and every per-repetition value.
inline void write_curve_csv(const LearningCurve& curve, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_curve_csv: cannot open " + path);
  const std::size_t reps = curve.cells.empty() ? 0 : curve.cells.front().rep_values.size();
  out << "classifier,display_name,train_size_per_class,mean_e_s,stddev_e_s,failed_reps";
  for (std::size_t r = 0; r < reps; ++r) out << ",rep_" << r;
  out << "\n";
  for (const auto& cell : curve.cells) {
    out << cell.classifier_id << "," << cell.display_name << "," << cell.train_size << ","
        << detail::format_g17(cell.mean) << "," << detail::format_g17(cell.stddev) << ","
        << cell.failed_reps;
    for (double v : cell.rep_values) out << "," << detail::format_g17(v);
    out << "\n";
  }
  if (!out) throw std::runtime_error("write_curve_csv: write failed for " + path);
}

inline void load_classifier_spec(const nlohmann::json& j, ClassifierSpec& spec) {
  spec.kind = j.at("kind").get<std::string>();
  if (j.contains("kernel")) spec.kernel = parse_kernel(j.at("kernel").get<std::string>());
  if (j.contains("max_depth")) spec.max_depth = j.at("max_depth").get<int>();
  if (j.contains("penalty")) spec.penalty = j.at("penalty").get<double>();
  if (j.contains("max_epochs")) spec.max_epochs = j.at("max_epochs").get<int>();
}

inline ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_experiment_config: cannot open " + path);
  nlohmann::json j;
  in >> j;
  ExperimentConfig cfg;
  cfg.train_sizes_per_class = j.at("train_sizes_per_class").get<std::vector<int>>();
  if (j.contains("test_size_per_class")) cfg.test_size_per_class = j.at("test_size_per_class").get<int>();
  if (j.contains("repetitions")) cfg.repetitions = j.at("repetitions").get<int>();
  if (j.contains("master_seed")) cfg.master_seed = j.at("master_seed").get<RngSeed>();
  if (j.contains("threads")) cfg.threads = j.at("threads").get<int>();
  if (j.contains("data")) {
    const auto& d = j.at("data");
    if (d.contains("arc_radius")) cfg.data.arc_radius = d.at("arc_radius").get<double>();
    if (d.contains("noise_scale")) cfg.data.noise_scale = d.at("noise_scale").get<double>();
  }
  if (j.contains("probe")) {
    const auto& p = j.at("probe");
    if (p.contains("probes_per_test_object")) cfg.probe.probes_per_test_object = p.at("probes_per_test_object").get<int>();
    if (p.contains("neighborhood_scale")) cfg.probe.neighborhood_scale = p.at("neighborhood_scale").get<double>();
    if (p.contains("k_opposite")) cfg.probe.k_opposite = p.at("k_opposite").get<int>();
    if (p.contains("interpolation_count")) cfg.probe.interpolation_count = p.at("interpolation_count").get<int>();
    if (p.contains("bisection_tolerance")) cfg.probe.bisection_tolerance = p.at("bisection_tolerance").get<double>();
  }
  for (const auto& cj : j.at("classifiers")) {
    ClassifierSpec spec;
    load_classifier_spec(cj, spec);
    cfg.classifiers.push_back(spec);
  }
  cfg.validate();
  return cfg;
}

}  // namespace domlearn
