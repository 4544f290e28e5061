// Command-line harness for the domain-based classification library:
//   generate   banana dataset -> CSV
//   train      CSV + classifier id -> model file
//   evaluate   model + test CSV -> worst-case evaluation report CSV
//   curve      config file -> learning-curve CSV + SVG plot
//
// Exit codes: 0 success, 1 usage error, 2 runtime failure.

#include <CLI11.hpp>

#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "domlearn/domlearn.hpp"

namespace {

struct GenerateArgs {
  int n_per_class = 50;
  double noise = domlearn::kDefaultBananaNoise;
  double arc_radius = domlearn::kDefaultBananaArcRadius;
  domlearn::RngSeed seed = 1;
  std::string out;
};

struct TrainArgs {
  std::string data;
  std::string classifier;
  std::string kernel = "linear";
  int max_depth = domlearn::kDefaultPurityTreeMaxDepth;
  double penalty = 1.0;
  int max_epochs = 1000;
  domlearn::RngSeed seed = 1;
  std::string out;
};

struct EvaluateArgs {
  std::string model;
  std::string test;
  std::string reference;
  std::string out;
  domlearn::ProbeConfig probe;
};

struct CurveArgs {
  std::string config;
  std::string out_csv = "curve.csv";
  std::string out_svg = "curve.svg";
  int threads = -1;  // -1 = keep config value
};

int run_generate(const GenerateArgs& args) {
  const auto data = domlearn::generate_banana(args.n_per_class, args.noise, args.seed, args.arc_radius);
  domlearn::save_csv(data, args.out);
  std::cout << "wrote " << data.size() << " objects (" << args.n_per_class << " per class) to "
            << args.out << "\n";
  return 0;
}

int run_train(const TrainArgs& args) {
  const auto data = domlearn::load_csv(args.data);
  domlearn::ClassifierSpec spec;
  spec.kind = args.classifier;
  spec.kernel = domlearn::parse_kernel(args.kernel);
  spec.max_depth = args.max_depth;
  spec.penalty = args.penalty;
  spec.max_epochs = args.max_epochs;
  const auto model = domlearn::train_classifier(spec, data, args.seed);
  domlearn::save_model(*model, args.out);
  std::cout << "trained " << model->kind() << " on " << data.size() << " objects, saved to "
            << args.out << "\n";
  return 0;
}

int run_evaluate(EvaluateArgs& args) {
  const auto model = domlearn::load_model(args.model);
  const auto test = domlearn::load_csv(args.test);
  auto report = domlearn::boundary_signed_distances(*model, test, args.probe);
  if (!args.reference.empty()) {
    const auto reference = domlearn::load_csv(args.reference);
    report.d_max = domlearn::representativeness_dmax(reference, test);
  }
  domlearn::write_report_csv(report, args.out);
  std::cout << "e_S = " << report.e_s << "\n";
  std::cout << "eta = " << report.eta << "\n";
  if (report.d_max) std::cout << "d_max = " << *report.d_max << "\n";
  if (report.incomplete) {
    std::cout << "warning: some objects found no opposite-label probe; see flags in " << args.out
              << "\n";
  }
  std::cout << "report written to " << args.out << "\n";
  return 0;
}

int run_curve(const CurveArgs& args) {
  domlearn::ExperimentConfig config = domlearn::load_experiment_config(args.config);
  if (args.threads >= 0) config.threads = args.threads;
  const auto curve = domlearn::run_learning_curve(config);
  domlearn::write_curve_csv(curve, args.out_csv);
  domlearn::emit_plot(curve, args.out_svg);
  int failed = 0;
  for (const auto& cell : curve.cells) failed += cell.failed_reps;
  std::cout << "curve written to " << args.out_csv << " and " << args.out_svg << "\n";
  if (failed > 0) std::cout << "warning: " << failed << " cell repetitions failed\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"domain-based classification: training and worst-case evaluation"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* cmd_gen = app.add_subcommand("generate", "generate a banana dataset CSV");
  cmd_gen->add_option("--n-per-class", gen.n_per_class, "objects per class")->check(CLI::PositiveNumber);
  cmd_gen->add_option("--noise", gen.noise, "Gaussian noise scale")->check(CLI::PositiveNumber);
  cmd_gen->add_option("--arc-radius", gen.arc_radius, "arc radius")->check(CLI::PositiveNumber);
  cmd_gen->add_option("--seed", gen.seed, "random seed");
  cmd_gen->add_option("--out", gen.out, "output CSV path")->required();

  TrainArgs train;
  auto* cmd_train = app.add_subcommand("train", "train a classifier on a dataset CSV");
  cmd_train->add_option("--data", train.data, "training CSV")->required();
  cmd_train
      ->add_option("--classifier", train.classifier,
                   "one of: ncc, fldd, purity_tree, kernel_domain, negative_margin, "
                   "max_error_linear, soft_margin, kernel_inequality")
      ->required();
  cmd_train->add_option("--kernel", train.kernel, "linear or poly3 (kernel classifiers)");
  cmd_train->add_option("--max-depth", train.max_depth, "purity tree depth cap")->check(CLI::PositiveNumber);
  cmd_train->add_option("--penalty", train.penalty, "soft-margin slack penalty")->check(CLI::PositiveNumber);
  cmd_train->add_option("--max-epochs", train.max_epochs, "kernel-inequality epoch cap")->check(CLI::PositiveNumber);
  cmd_train->add_option("--seed", train.seed, "seed for stochastic trainers");
  cmd_train->add_option("--out", train.out, "output model file")->required();

  EvaluateArgs eval;
  auto* cmd_eval = app.add_subcommand("evaluate", "worst-case evaluation of a model on a test CSV");
  cmd_eval->add_option("--model", eval.model, "model file")->required();
  cmd_eval->add_option("--test", eval.test, "test CSV")->required();
  cmd_eval->add_option("--reference", eval.reference, "reference CSV for the d_max representativeness check");
  cmd_eval->add_option("--out", eval.out, "output report CSV")->required();
  cmd_eval->add_option("--probes", eval.probe.probes_per_test_object, "probes per test object");
  cmd_eval->add_option("--neighborhood-scale", eval.probe.neighborhood_scale,
                       "probe scale as multiple of the median NN distance");
  cmd_eval->add_option("--k-opposite", eval.probe.k_opposite, "opposite-label probes per object");
  cmd_eval->add_option("--interpolation-count", eval.probe.interpolation_count,
                       "interpolated candidates per probe pair");
  cmd_eval->add_option("--bisection-tolerance", eval.probe.bisection_tolerance,
                       "boundary tolerance as fraction of the test-set diameter");
  cmd_eval->add_option("--seed", eval.probe.seed, "probe seed");

  CurveArgs curve;
  auto* cmd_curve = app.add_subcommand("curve", "run the learning-curve experiment from a config file");
  cmd_curve->add_option("--config", curve.config, "experiment config (JSON)")->required();
  cmd_curve->add_option("--out-csv", curve.out_csv, "output curve CSV");
  cmd_curve->add_option("--out-svg", curve.out_svg, "output SVG plot");
  cmd_curve->add_option("--threads", curve.threads, "worker threads (0 = all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (cmd_gen->parsed()) return run_generate(gen);
    if (cmd_train->parsed()) return run_train(train);
    if (cmd_eval->parsed()) return run_evaluate(eval);
    if (cmd_curve->parsed()) return run_curve(curve);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
