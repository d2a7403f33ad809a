#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "softecm/semimetric.hpp"

namespace softecm {

struct CategoricalAttribute {
  std::string name;
  std::vector<std::string> levels;
};

/// Per-attribute level lists; the one-hot layout is attributes in order, each
/// followed by its level block.
struct CategoricalSchema {
  std::vector<CategoricalAttribute> attributes;

  std::size_t dimension() const;
  /// Offset of the first coordinate of attribute a.
  std::size_t offset(std::size_t attribute) const;

  /// Levels sorted lexicographically per column.
  static CategoricalSchema infer(const std::vector<std::vector<std::string>>& rows,
                                 const std::vector<std::string>& names = {});

  nlohmann::json to_json() const;
  static CategoricalSchema from_json(const nlohmann::json& j);
};

using CategoricalTable = std::vector<std::vector<std::string>>;

/// One single-row Object per table row. Unknown levels raise DataFormatError
/// naming the 1-based row and column.
std::vector<Object> encode_categorical(const CategoricalTable& rows, const CategoricalSchema& schema);

/// Inverse of encode_categorical: the level with the largest weight per block.
CategoricalTable decode_categorical(const std::vector<Object>& objects, const CategoricalSchema& schema);

}  // namespace softecm
