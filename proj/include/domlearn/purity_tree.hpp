#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "domlearn/dataset.hpp"
#include "domlearn/model.hpp"

namespace domlearn {

/// Binary decision tree grown with the purity rule: at every node the
/// feature/threshold pair is chosen that splits off the largest half
/// interval containing objects of a single class; that pure part becomes a
/// leaf and the remainder is split recursively.
class PurityTreeModel final : public DecisionModel {
 public:
  struct Node {
    bool is_leaf = true;
    int leaf_class = 0;
    Eigen::Index feature = 0;
    double threshold = 0.0;
    int left = -1;   // x[feature] <= threshold
    int right = -1;  // x[feature] >  threshold
  };

  PurityTreeModel(std::vector<Node> nodes, Eigen::Index dim, int class_count)
      : nodes_(std::move(nodes)), dim_(dim), class_count_(class_count) {
    if (nodes_.empty()) throw std::invalid_argument("PurityTreeModel: empty tree");
  }

  std::string kind() const override { return "purity_tree"; }
  int class_count() const override { return class_count_; }
  Eigen::Index dim() const override { return dim_; }
  const std::vector<Node>& nodes() const { return nodes_; }

  int predict(const Eigen::VectorXd& x) const override {
    check_input(x);
    int at = 0;
    while (!nodes_[static_cast<std::size_t>(at)].is_leaf) {
      const Node& nd = nodes_[static_cast<std::size_t>(at)];
      at = x(nd.feature) <= nd.threshold ? nd.left : nd.right;
    }
    return nodes_[static_cast<std::size_t>(at)].leaf_class;
  }

  /// Trees have no natural margin; the score is the bare sign of the
  /// predicted class.
  double score(const Eigen::VectorXd& x) const override {
    if (class_count_ != 2) throw std::logic_error("purity_tree: signed score requires two classes");
    return predict(x) == 0 ? 1.0 : -1.0;
  }

 private:
  std::vector<Node> nodes_;
  Eigen::Index dim_;
  int class_count_;
};

namespace detail {

struct PuritySplit {
  long count = 0;
  Eigen::Index feature = 0;
  double threshold = 0.0;
  bool pure_on_left = true;
};

inline int majority_class(const LabeledDataset& data, const std::vector<Eigen::Index>& rows,
                          int class_count) {
  std::vector<long> counts(static_cast<std::size_t>(class_count), 0);
  for (Eigen::Index r : rows) ++counts[static_cast<std::size_t>(data.label(r))];
  // Ties break to the lowest class index.
  return static_cast<int>(std::max_element(counts.begin(), counts.end()) - counts.begin());
}

/// Best purity split over all features and midpoint thresholds, or count 0
/// when no half interval is pure. Ties break to the lowest feature index,
/// then the lowest threshold, preferring the left side.
inline PuritySplit best_purity_split(const LabeledDataset& data,
                                     const std::vector<Eigen::Index>& rows) {
  PuritySplit best;
  const std::size_t n = rows.size();
  std::vector<std::pair<double, int>> column(n);  // (value, class)
  for (Eigen::Index f = 0; f < data.dim(); ++f) {
    for (std::size_t i = 0; i < n; ++i) {
      column[i] = {data.points()(rows[i], f), data.label(rows[i])};
    }
    std::sort(column.begin(), column.end());
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (column[i].first == column[i + 1].first) continue;
      const double threshold = 0.5 * (column[i].first + column[i + 1].first);
      const long left_n = static_cast<long>(i) + 1;
      const long right_n = static_cast<long>(n) - left_n;
      bool left_pure = true;
      for (std::size_t j = 1; j <= i; ++j) {
        if (column[j].second != column[0].second) {
          left_pure = false;
          break;
        }
      }
      bool right_pure = true;
      for (std::size_t j = i + 2; j < n; ++j) {
        if (column[j].second != column[i + 1].second) {
          right_pure = false;
          break;
        }
      }
      auto consider = [&](long count, bool on_left) {
        const bool better =
            count > best.count ||
            (count == best.count &&
             (f < best.feature ||
              (f == best.feature &&
               (threshold < best.threshold ||
                (threshold == best.threshold && on_left && !best.pure_on_left)))));
        if (better) best = PuritySplit{count, f, threshold, on_left};
      };
      if (left_pure) consider(left_n, true);
      if (right_pure) consider(right_n, false);
    }
  }
  return best;
}

inline int grow_purity_tree(const LabeledDataset& data, const std::vector<Eigen::Index>& rows,
                            int depth, int max_depth,
                            std::vector<PurityTreeModel::Node>& nodes) {
  const int id = static_cast<int>(nodes.size());
  nodes.emplace_back();

  bool pure = true;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (data.label(rows[i]) != data.label(rows[0])) {
      pure = false;
      break;
    }
  }
  if (pure || depth >= max_depth) {
    nodes[static_cast<std::size_t>(id)].is_leaf = true;
    nodes[static_cast<std::size_t>(id)].leaf_class =
        pure ? data.label(rows[0]) : majority_class(data, rows, data.class_count());
    return id;
  }

  const PuritySplit split = best_purity_split(data, rows);
  if (split.count == 0) {
    // No pure half interval exists (e.g. coincident points of both classes).
    nodes[static_cast<std::size_t>(id)].is_leaf = true;
    nodes[static_cast<std::size_t>(id)].leaf_class = majority_class(data, rows, data.class_count());
    return id;
  }

  std::vector<Eigen::Index> left_rows, right_rows;
  for (Eigen::Index r : rows) {
    (data.points()(r, split.feature) <= split.threshold ? left_rows : right_rows).push_back(r);
  }

  nodes[static_cast<std::size_t>(id)].is_leaf = false;
  nodes[static_cast<std::size_t>(id)].feature = split.feature;
  nodes[static_cast<std::size_t>(id)].threshold = split.threshold;
  const int left = grow_purity_tree(data, left_rows, depth + 1, max_depth, nodes);
  const int right = grow_purity_tree(data, right_rows, depth + 1, max_depth, nodes);
  nodes[static_cast<std::size_t>(id)].left = left;
  nodes[static_cast<std::size_t>(id)].right = right;
  return id;
}

}  // namespace detail

inline constexpr int kDefaultPurityTreeMaxDepth = 16;

/// Grows a purity tree on the deduplicated training set (copies of an
/// object must not change the tree).
inline PurityTreeModel train_purity_tree(const LabeledDataset& raw_data,
                                         int max_depth = kDefaultPurityTreeMaxDepth) {
  if (max_depth < 1) throw std::invalid_argument("train_purity_tree: max_depth must be >= 1");
  if (raw_data.class_count() != 2) {
    throw std::invalid_argument("train_purity_tree: exactly two classes required");
  }
  const LabeledDataset data = deduplicate(raw_data);
  std::vector<Eigen::Index> rows(static_cast<std::size_t>(data.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = static_cast<Eigen::Index>(i);
  std::vector<PurityTreeModel::Node> nodes;
  detail::grow_purity_tree(data, rows, 0, max_depth, nodes);
  return PurityTreeModel(std::move(nodes), data.dim(), data.class_count());
}

}  // namespace domlearn
