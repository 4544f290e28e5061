#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace domlearn {

enum class KernelKind { linear, poly3 };

inline std::string to_string(KernelKind k) {
  return k == KernelKind::linear ? "linear" : "poly3";
}

inline KernelKind parse_kernel(const std::string& name) {
  if (name == "linear") return KernelKind::linear;
  if (name == "poly3") return KernelKind::poly3;
  throw std::invalid_argument("unknown kernel '" + name + "' (expected linear or poly3)");
}

inline double kernel_eval(KernelKind k, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const double dot = a.dot(b);
  if (k == KernelKind::linear) return dot;
  const double s = 1.0 + dot;
  return s * s * s;
}

/// Gram matrix K(i,j) = K(x_i, x_j) over the rows of X.
inline Eigen::MatrixXd gram_matrix(KernelKind k, const Eigen::MatrixXd& x) {
  Eigen::MatrixXd dots = x * x.transpose();
  if (k == KernelKind::linear) return dots;
  return (dots.array() + 1.0).cube().matrix();
}

/// Column vector K(X, p) of kernel values against every row of X.
inline Eigen::VectorXd kernel_column(KernelKind k, const Eigen::MatrixXd& x,
                                     const Eigen::VectorXd& p) {
  Eigen::VectorXd dots = x * p;
  if (k == KernelKind::linear) return dots;
  return (dots.array() + 1.0).cube().matrix();
}

}  // namespace domlearn
