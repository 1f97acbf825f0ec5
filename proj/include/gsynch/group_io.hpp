#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "group.hpp"

namespace gsynch {

using json = nlohmann::json;

/// Matrix as {"rows", "cols", "data": [[re, im], ...]} in row-major order.
inline json matrix_to_json(const CMatrix& m) {
  json data = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back({m(i, j).real(), m(i, j).imag()});
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

inline CMatrix matrix_entries_from_json(const json& data, Eigen::Index rows, Eigen::Index cols) {
  require(data.is_array() && data.size() == static_cast<std::size_t>(rows * cols), "matrix data has wrong length");
  CMatrix m(rows, cols);
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j, ++k) {
      const auto& e = data[k];
      if (e.is_array()) {
        require(e.size() == 2, "complex entry must be [re, im]");
        m(i, j) = {e[0].get<double>(), e[1].get<double>()};
      } else {
        m(i, j) = {e.get<double>(), 0.0};
      }
    }
  return m;
}

inline CMatrix matrix_from_json(const json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  return matrix_entries_from_json(j.at("data"), rows, cols);
}

/// Group file: {"order", "mul" (row-major, flat or nested), "labels"?,
/// "irreps": [{"dim", "type", "matrices": [[[re, im], ...] per element]}]}.
/// `dim` is the complex dimension of the stored matrices.
inline GroupWithIrreps group_from_json(const json& j) {
  try {
    const int order = j.at("order").get<int>();
    std::vector<int> mul;
    for (const auto& row : j.at("mul")) {
      if (row.is_array())
        for (const auto& v : row) mul.push_back(v.get<int>());
      else
        mul.push_back(row.get<int>());
    }
    std::vector<std::string> labels;
    if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
    GroupWithIrreps out;
    out.group = FiniteGroup::from_table(order, std::move(mul), std::move(labels));
    out.name = j.value("name", std::string("custom"));
    std::vector<Irrep> irreps;
    for (const auto& ij : j.at("irreps")) {
      const int d = ij.at("dim").get<int>();
      const RepType type = rep_type_from_string(ij.at("type").get<std::string>());
      const auto& mats_json = ij.at("matrices");
      require(mats_json.size() == static_cast<std::size_t>(order), "irrep needs one matrix per element");
      std::vector<CMatrix> mats;
      for (const auto& mj : mats_json) mats.push_back(matrix_entries_from_json(mj, d, d));
      irreps.push_back(Irrep::make(out.group, std::move(mats), type, ij.value("label", std::string())));
    }
    out.full = make_full_list(out.group, std::move(irreps));
    return out;
  } catch (const json::exception& e) {
    fail(ErrorKind::invalid_parameter, std::string("malformed group file: ") + e.what());
  }
}

inline json group_to_json(const GroupWithIrreps& g) {
  json irreps = json::array();
  for (const auto& r : g.full) {
    json mats = json::array();
    for (const auto& m : r.matrices()) mats.push_back(matrix_to_json(m).at("data"));
    irreps.push_back({{"dim", r.complex_dim()}, {"type", to_string(r.type())}, {"label", r.label()}, {"matrices", mats}});
  }
  return {{"name", g.name},
          {"order", g.group.order()},
          {"mul", g.group.table()},
          {"labels", g.group.labels()},
          {"irreps", irreps}};
}

inline GroupWithIrreps load_group_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::invalid_parameter, "cannot open group file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    fail(ErrorKind::invalid_parameter, "group file " + path + " is not valid JSON: " + e.what());
  }
  return group_from_json(j);
}

/// Catalog name or path to a group file.
inline GroupWithIrreps resolve_group(const std::string& name_or_path) {
  if (name_or_path.size() > 5 && name_or_path.substr(name_or_path.size() - 5) == ".json") return load_group_file(name_or_path);
  return build_catalog(name_or_path);
}

}  // namespace gsynch
