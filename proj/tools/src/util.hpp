#pragma once

#include "mpf/dataset.hpp"
#include "mpf/dataset_io.hpp"

#include <Eigen/Core>
#include <json.hpp>

#include <filesystem>
#include <string>

namespace mpf::cli {

inline bool is_csv(const std::filesystem::path& p) { return p.extension() == ".csv"; }

inline nlohmann::json matrix_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline nlohmann::json vector_json(const Eigen::VectorXd& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

inline void write_dataset(const std::filesystem::path& path, const BinaryDataset& data, Encoding encoding) {
  if (is_csv(path)) {
    write_dataset_csv(path, Dataset{data});
  } else {
    write_dataset_binary(path, data, encoding);
  }
}

}  // namespace mpf::cli
