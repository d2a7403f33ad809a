#include "softecm/categorical.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "softecm/errors.hpp"

namespace softecm {

std::size_t CategoricalSchema::dimension() const {
  std::size_t d = 0;
  for (const auto& a : attributes) d += a.levels.size();
  return d;
}

std::size_t CategoricalSchema::offset(std::size_t attribute) const {
  std::size_t d = 0;
  for (std::size_t a = 0; a < attribute; ++a) d += attributes.at(a).levels.size();
  return d;
}

CategoricalSchema CategoricalSchema::infer(const std::vector<std::vector<std::string>>& rows,
                                           const std::vector<std::string>& names) {
  if (rows.empty()) throw DataFormatError("cannot infer a schema from an empty table");
  const std::size_t width = rows.front().size();
  std::vector<std::set<std::string>> levels(width);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != width) {
      throw DataFormatError("ragged categorical row: expected " + std::to_string(width) + " cells, got " +
                                std::to_string(rows[i].size()),
                            i + 1);
    }
    for (std::size_t a = 0; a < width; ++a) levels[a].insert(rows[i][a]);
  }
  CategoricalSchema schema;
  for (std::size_t a = 0; a < width; ++a) {
    CategoricalAttribute attr;
    attr.name = a < names.size() ? names[a] : "a" + std::to_string(a + 1);
    attr.levels.assign(levels[a].begin(), levels[a].end());
    schema.attributes.push_back(std::move(attr));
  }
  return schema;
}

nlohmann::json CategoricalSchema::to_json() const {
  nlohmann::json attrs = nlohmann::json::array();
  for (const auto& a : attributes) attrs.push_back({{"name", a.name}, {"levels", a.levels}});
  return {{"attributes", attrs}};
}

CategoricalSchema CategoricalSchema::from_json(const nlohmann::json& j) {
  CategoricalSchema schema;
  try {
    for (const auto& a : j.at("attributes")) {
      CategoricalAttribute attr;
      attr.name = a.value("name", "a" + std::to_string(schema.attributes.size() + 1));
      attr.levels = a.at("levels").get<std::vector<std::string>>();
      if (attr.levels.empty()) throw DataFormatError("attribute '" + attr.name + "' has no levels");
      schema.attributes.push_back(std::move(attr));
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataFormatError(std::string("bad categorical schema: ") + e.what());
  }
  return schema;
}

std::vector<Object> encode_categorical(const CategoricalTable& rows, const CategoricalSchema& schema) {
  const auto dim = static_cast<Eigen::Index>(schema.dimension());
  std::vector<Object> out;
  out.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != schema.attributes.size()) {
      throw DataFormatError("row has " + std::to_string(rows[i].size()) + " cells, schema has " +
                                std::to_string(schema.attributes.size()) + " attributes",
                            i + 1);
    }
    Object obj = Object::Zero(1, dim);
    std::size_t base = 0;
    for (std::size_t a = 0; a < rows[i].size(); ++a) {
      const auto& levels = schema.attributes[a].levels;
      auto it = std::find(levels.begin(), levels.end(), rows[i][a]);
      if (it == levels.end()) {
        throw DataFormatError("unknown level '" + rows[i][a] + "' for attribute '" +
                                  schema.attributes[a].name + "'",
                              i + 1, a + 1);
      }
      obj(0, static_cast<Eigen::Index>(base + static_cast<std::size_t>(it - levels.begin()))) = 1.0;
      base += levels.size();
    }
    out.push_back(std::move(obj));
  }
  return out;
}

CategoricalTable decode_categorical(const std::vector<Object>& objects, const CategoricalSchema& schema) {
  const auto dim = static_cast<Eigen::Index>(schema.dimension());
  CategoricalTable out;
  out.reserve(objects.size());
  for (const auto& obj : objects) {
    if (obj.rows() != 1 || obj.cols() != dim) throw std::invalid_argument("object does not match schema");
    std::vector<std::string> row;
    Eigen::Index base = 0;
    for (const auto& attr : schema.attributes) {
      Eigen::Index best = 0;
      for (Eigen::Index l = 1; l < static_cast<Eigen::Index>(attr.levels.size()); ++l) {
        if (obj(0, base + l) > obj(0, base + best)) best = l;
      }
      row.push_back(attr.levels[static_cast<std::size_t>(best)]);
      base += static_cast<Eigen::Index>(attr.levels.size());
    }
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace softecm
