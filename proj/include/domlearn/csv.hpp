#pragma once

#include <Eigen/Dense>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "domlearn/dataset.hpp"

namespace domlearn {
namespace detail {

/// Shortest text form that reproduces the double exactly (17 significant
/// digits round-trips any IEEE-754 double).
inline std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

}  // namespace detail

/// Writes the canonical dataset CSV: header "f1,...,fm,label", one object
/// per row, labels as integer class indices.
inline void save_csv(const LabeledDataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_csv: cannot open " + path + " for writing");
  for (Eigen::Index j = 0; j < data.dim(); ++j) out << "f" << (j + 1) << ",";
  out << "label\n";
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    for (Eigen::Index j = 0; j < data.dim(); ++j) {
      out << detail::format_g17(data.points()(i, j)) << ",";
    }
    out << data.label(i) << "\n";
  }
  if (!out) throw std::runtime_error("save_csv: write failed for " + path);
}

inline LabeledDataset load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("load_csv: empty file " + path);
  const auto header = detail::split_csv_line(line);
  if (header.size() < 2 || header.back() != "label") {
    throw std::runtime_error("load_csv: expected header f1,...,fm,label in " + path);
  }
  const std::size_t m = header.size() - 1;
  for (std::size_t j = 0; j < m; ++j) {
    if (header[j] != "f" + std::to_string(j + 1)) {
      throw std::runtime_error("load_csv: unexpected feature column '" + header[j] + "' in " + path);
    }
  }
  std::vector<double> values;
  std::vector<int> labels;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = detail::split_csv_line(line);
    if (fields.size() != m + 1) {
      throw std::runtime_error("load_csv: line " + std::to_string(line_no) + " has " +
                               std::to_string(fields.size()) + " fields, expected " +
                               std::to_string(m + 1));
    }
    try {
      for (std::size_t j = 0; j < m; ++j) values.push_back(std::stod(fields[j]));
      labels.push_back(std::stoi(fields[m]));
    } catch (const std::exception&) {
      throw std::runtime_error("load_csv: parse error on line " + std::to_string(line_no));
    }
  }
  if (labels.empty()) throw std::runtime_error("load_csv: no data rows in " + path);
  Eigen::MatrixXd pts(static_cast<Eigen::Index>(labels.size()), static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      pts(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = values[i * m + j];
    }
  }
  return LabeledDataset(std::move(pts), std::move(labels));
}

}  // namespace domlearn
