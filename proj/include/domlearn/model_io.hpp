#pragma once

#include <Eigen/Dense>
#include <fstream>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "domlearn/fldd.hpp"
#include "domlearn/kernel_domain.hpp"
#include "domlearn/kernel_inequality.hpp"
#include "domlearn/max_error_linear.hpp"
#include "domlearn/model.hpp"
#include "domlearn/ncc.hpp"
#include "domlearn/negative_margin.hpp"
#include "domlearn/purity_tree.hpp"
#include "domlearn/soft_margin.hpp"

namespace domlearn {
namespace detail {

inline nlohmann::json vector_to_json(const Eigen::VectorXd& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

inline Eigen::VectorXd vector_from_json(const nlohmann::json& arr) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i) v(static_cast<Eigen::Index>(i)) = arr[i].get<double>();
  return v;
}

/// Matrices are flattened row-major with explicit dimensions.
inline nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
  nlohmann::json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  nlohmann::json arr = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) arr.push_back(m(r, c));
  }
  j["data"] = arr;
  return j;
}

inline Eigen::MatrixXd matrix_from_json(const nlohmann::json& j) {
  const Eigen::Index rows = j.at("rows").get<Eigen::Index>();
  const Eigen::Index cols = j.at("cols").get<Eigen::Index>();
  const auto& arr = j.at("data");
  if (static_cast<Eigen::Index>(arr.size()) != rows * cols) {
    throw std::runtime_error("model file: matrix payload size mismatch");
  }
  Eigen::MatrixXd m(rows, cols);
  std::size_t k = 0;
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = arr[k++].get<double>();
  }
  return m;
}

}  // namespace detail

inline nlohmann::json model_to_json(const DecisionModel& model) {
  nlohmann::json j;
  j["kind"] = model.kind();
  j["class_count"] = model.class_count();
  if (const auto* ncc = dynamic_cast<const NccModel*>(&model)) {
    nlohmann::json balls = nlohmann::json::array();
    for (const auto& b : ncc->class_balls()) {
      balls.push_back({{"center", detail::vector_to_json(b.center)}, {"radius", b.radius}});
    }
    j["class_balls"] = balls;
  } else if (const auto* fldd = dynamic_cast<const FlddModel*>(&model)) {
    j["normal"] = detail::vector_to_json(fldd->normal());
    j["offset"] = fldd->offset();
    j["whitening_shift"] = detail::vector_to_json(fldd->whitening().shift);
    j["whitening_transform"] = detail::matrix_to_json(fldd->whitening().transform);
    j["centers"] = {detail::vector_to_json(fldd->centers()[0]),
                    detail::vector_to_json(fldd->centers()[1])};
  } else if (const auto* tree = dynamic_cast<const PurityTreeModel*>(&model)) {
    j["dim"] = tree->dim();
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& nd : tree->nodes()) {
      nodes.push_back({{"is_leaf", nd.is_leaf},
                       {"leaf_class", nd.leaf_class},
                       {"feature", nd.feature},
                       {"threshold", nd.threshold},
                       {"left", nd.left},
                       {"right", nd.right}});
    }
    j["nodes"] = nodes;
  } else if (const auto* kd = dynamic_cast<const KernelDomainModel*>(&model)) {
    j["width"] = kd->width();
    nlohmann::json protos = nlohmann::json::array();
    for (const auto& p : kd->prototypes()) protos.push_back(detail::matrix_to_json(p));
    j["prototypes"] = protos;
  } else if (const auto* nm = dynamic_cast<const MarginModel*>(&model)) {
    j["kernel"] = to_string(nm->kernel());
    j["prototypes"] = detail::matrix_to_json(nm->prototypes());
    j["dual_weights"] = detail::vector_to_json(nm->dual_weights());
    j["bias"] = nm->bias();
    j["margin"] = nm->margin();
    j["support_indices"] = nm->support_indices();
  } else if (const auto* mel = dynamic_cast<const MaxErrorLinearModel*>(&model)) {
    j["weights"] = detail::vector_to_json(mel->weights());
    j["bias"] = mel->bias();
    j["worst_residual"] = mel->worst_residual();
  } else if (const auto* sm = dynamic_cast<const SoftMarginBaseline*>(&model)) {
    j["weights"] = detail::vector_to_json(sm->weights());
    j["bias"] = sm->bias();
    j["slack_sum"] = sm->slack_sum();
  } else if (const auto* ki = dynamic_cast<const KernelInequalityModel*>(&model)) {
    j["kernel"] = to_string(ki->kernel());
    j["prototypes"] = detail::matrix_to_json(ki->prototypes());
    j["dual_weights"] = detail::vector_to_json(ki->dual_weights());
    j["bias"] = ki->bias();
  } else {
    throw std::logic_error("model_to_json: unknown model kind " + model.kind());
  }
  return j;
}

inline std::shared_ptr<DecisionModel> model_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "ncc") {
    std::vector<EnclosingBall> balls;
    for (const auto& bj : j.at("class_balls")) {
      balls.push_back(EnclosingBall{detail::vector_from_json(bj.at("center")),
                                    bj.at("radius").get<double>()});
    }
    return std::make_shared<NccModel>(std::move(balls));
  }
  if (kind == "fldd") {
    WhiteningTransform w;
    w.shift = detail::vector_from_json(j.at("whitening_shift"));
    w.transform = detail::matrix_from_json(j.at("whitening_transform"));
    std::vector<Eigen::VectorXd> centers{detail::vector_from_json(j.at("centers")[0]),
                                         detail::vector_from_json(j.at("centers")[1])};
    return std::make_shared<FlddModel>(detail::vector_from_json(j.at("normal")),
                                       j.at("offset").get<double>(), std::move(w),
                                       std::move(centers));
  }
  if (kind == "purity_tree") {
    std::vector<PurityTreeModel::Node> nodes;
    for (const auto& nj : j.at("nodes")) {
      PurityTreeModel::Node nd;
      nd.is_leaf = nj.at("is_leaf").get<bool>();
      nd.leaf_class = nj.at("leaf_class").get<int>();
      nd.feature = nj.at("feature").get<Eigen::Index>();
      nd.threshold = nj.at("threshold").get<double>();
      nd.left = nj.at("left").get<int>();
      nd.right = nj.at("right").get<int>();
      nodes.push_back(nd);
    }
    return std::make_shared<PurityTreeModel>(std::move(nodes), j.at("dim").get<Eigen::Index>(),
                                             j.at("class_count").get<int>());
  }
  if (kind == "kernel_domain") {
    std::vector<Eigen::MatrixXd> protos;
    for (const auto& pj : j.at("prototypes")) protos.push_back(detail::matrix_from_json(pj));
    return std::make_shared<KernelDomainModel>(std::move(protos), j.at("width").get<double>());
  }
  if (kind == "negative_margin") {
    return std::make_shared<MarginModel>(
        parse_kernel(j.at("kernel").get<std::string>()), detail::matrix_from_json(j.at("prototypes")),
        detail::vector_from_json(j.at("dual_weights")), j.at("bias").get<double>(),
        j.at("margin").get<double>(), j.at("support_indices").get<std::vector<Eigen::Index>>());
  }
  if (kind == "max_error_linear") {
    return std::make_shared<MaxErrorLinearModel>(detail::vector_from_json(j.at("weights")),
                                                 j.at("bias").get<double>(),
                                                 j.at("worst_residual").get<double>());
  }
  if (kind == "soft_margin") {
    return std::make_shared<SoftMarginBaseline>(detail::vector_from_json(j.at("weights")),
                                                j.at("bias").get<double>(),
                                                j.at("slack_sum").get<double>());
  }
  if (kind == "kernel_inequality") {
    return std::make_shared<KernelInequalityModel>(
        parse_kernel(j.at("kernel").get<std::string>()), detail::matrix_from_json(j.at("prototypes")),
        detail::vector_from_json(j.at("dual_weights")), j.at("bias").get<double>());
  }
  throw std::runtime_error("model file: unknown kind '" + kind + "'");
}

inline void save_model(const DecisionModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_model: cannot open " + path);
  out << model_to_json(model).dump(2) << "\n";
  if (!out) throw std::runtime_error("save_model: write failed for " + path);
}

inline std::shared_ptr<DecisionModel> load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_model: cannot open " + path);
  nlohmann::json j;
  in >> j;
  return model_from_json(j);
}

}  // namespace domlearn
