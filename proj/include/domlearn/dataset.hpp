#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "domlearn/rng.hpp"

namespace domlearn {

/// Immutable set of labeled objects. Each row of `points()` is one object in
/// R^m, labels are 0-based class indices. In two-class problems class 0 is
/// omega_1 with signed label +1 and class 1 is omega_2 with signed label -1.
///
/// Identical points with different labels are allowed; classes may overlap.
class LabeledDataset {
 public:
  LabeledDataset(Eigen::MatrixXd points, std::vector<int> labels)
      : LabeledDataset(std::move(points), std::move(labels), 0) {}

  LabeledDataset(Eigen::MatrixXd points, std::vector<int> labels, int class_count)
      : points_(std::move(points)), labels_(std::move(labels)) {
    if (points_.rows() < 1 || points_.cols() < 1) {
      throw std::invalid_argument("LabeledDataset: need at least one object and one feature");
    }
    if (static_cast<Eigen::Index>(labels_.size()) != points_.rows()) {
      throw std::invalid_argument("LabeledDataset: one label per object required");
    }
    int max_label = 0;
    for (int y : labels_) {
      if (y < 0) throw std::invalid_argument("LabeledDataset: negative class index");
      max_label = std::max(max_label, y);
    }
    class_count_ = class_count > 0 ? class_count : max_label + 1;
    if (max_label >= class_count_) {
      throw std::invalid_argument("LabeledDataset: label outside declared class range");
    }
  }

  Eigen::Index size() const { return points_.rows(); }
  Eigen::Index dim() const { return points_.cols(); }
  int class_count() const { return class_count_; }

  const Eigen::MatrixXd& points() const { return points_; }
  const std::vector<int>& labels() const { return labels_; }

  Eigen::VectorXd point(Eigen::Index i) const { return points_.row(i).transpose(); }
  int label(Eigen::Index i) const { return labels_[static_cast<std::size_t>(i)]; }

  /// Signed view used by the two-class decision rules: +1 for class 0, -1
  /// for class 1. Only meaningful when class_count() == 2.
  double signed_label(Eigen::Index i) const {
    if (class_count_ != 2) {
      throw std::logic_error("signed_label: dataset is not two-class");
    }
    return label(i) == 0 ? 1.0 : -1.0;
  }

  std::vector<Eigen::Index> indices_of_class(int cls) const {
    std::vector<Eigen::Index> out;
    for (Eigen::Index i = 0; i < size(); ++i) {
      if (label(i) == cls) out.push_back(i);
    }
    return out;
  }

  Eigen::Index class_size(int cls) const {
    return static_cast<Eigen::Index>(std::count(labels_.begin(), labels_.end(), cls));
  }

  /// Rows of class `cls`, one per member.
  Eigen::MatrixXd class_points(int cls) const {
    const auto idx = indices_of_class(cls);
    Eigen::MatrixXd out(static_cast<Eigen::Index>(idx.size()), dim());
    for (std::size_t r = 0; r < idx.size(); ++r) out.row(static_cast<Eigen::Index>(r)) = points_.row(idx[r]);
    return out;
  }

  /// New dataset from a row selection; class_count is preserved.
  LabeledDataset subset(const std::vector<Eigen::Index>& rows) const {
    if (rows.empty()) throw std::invalid_argument("subset: empty row selection");
    Eigen::MatrixXd pts(static_cast<Eigen::Index>(rows.size()), dim());
    std::vector<int> lbl(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r] < 0 || rows[r] >= size()) throw std::out_of_range("subset: row index");
      pts.row(static_cast<Eigen::Index>(r)) = points_.row(rows[r]);
      lbl[r] = label(rows[r]);
    }
    return LabeledDataset(std::move(pts), std::move(lbl), class_count_);
  }

 private:
  Eigen::MatrixXd points_;
  std::vector<int> labels_;
  int class_count_ = 0;
};

/// Collapses exact duplicate (point, label) pairs, keeping the first
/// occurrence. Identical points that carry different labels are all kept.
inline LabeledDataset deduplicate(const LabeledDataset& data) {
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    bool seen = false;
    for (Eigen::Index k : keep) {
      if (data.label(k) == data.label(i) && data.points().row(k) == data.points().row(i)) {
        seen = true;
        break;
      }
    }
    if (!seen) keep.push_back(i);
  }
  return data.subset(keep);
}

/// Draws one training subset per requested size such that each smaller set
/// is contained in every larger one and per-class counts are exact.
inline std::vector<LabeledDataset> nested_training_subsets(
    const LabeledDataset& data, const std::vector<int>& sizes_per_class, RngSeed seed) {
  if (sizes_per_class.empty()) {
    throw std::invalid_argument("nested_training_subsets: no sizes given");
  }
  for (std::size_t i = 0; i < sizes_per_class.size(); ++i) {
    if (sizes_per_class[i] < 1) {
      throw std::invalid_argument("nested_training_subsets: sizes must be positive");
    }
    if (i > 0 && sizes_per_class[i] <= sizes_per_class[i - 1]) {
      throw std::invalid_argument("nested_training_subsets: sizes must be strictly ascending");
    }
  }
  const int max_size = sizes_per_class.back();
  std::vector<std::vector<Eigen::Index>> shuffled(static_cast<std::size_t>(data.class_count()));
  for (int cls = 0; cls < data.class_count(); ++cls) {
    auto idx = data.indices_of_class(cls);
    if (static_cast<int>(idx.size()) < max_size) {
      throw std::invalid_argument("nested_training_subsets: size " + std::to_string(max_size) +
                                  " exceeds objects available in class " + std::to_string(cls));
    }
    auto engine = make_engine(derive_seed(seed, "nested-subset-class", cls));
    std::shuffle(idx.begin(), idx.end(), engine);
    shuffled[static_cast<std::size_t>(cls)] = std::move(idx);
  }
  std::vector<LabeledDataset> out;
  out.reserve(sizes_per_class.size());
  for (int s : sizes_per_class) {
    std::vector<Eigen::Index> rows;
    for (const auto& cls_idx : shuffled) {
      rows.insert(rows.end(), cls_idx.begin(), cls_idx.begin() + s);
    }
    std::sort(rows.begin(), rows.end());
    out.push_back(data.subset(rows));
  }
  return out;
}

}  // namespace domlearn
