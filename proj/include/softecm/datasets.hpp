#pragma once
// Datasets and synthetic generators.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "softecm/categorical.hpp"
#include "softecm/semimetric.hpp"

namespace softecm {

enum class DataKind { Numeric, Categorical, TimeSeries };

std::string to_string(DataKind kind);

struct Dataset {
  DataKind kind = DataKind::Numeric;
  std::vector<Object> objects;
  std::optional<std::vector<int>> labels;
  std::vector<std::string> names;        // optional object ids
  std::vector<std::string> class_names;  // optional, indexed by label
  std::optional<CategoricalSchema> schema;

  std::size_t size() const noexcept { return objects.size(); }
  /// Throws std::invalid_argument when labels/names/shapes are inconsistent.
  void validate() const;
  /// n x p matrix of a numeric (single-row object) dataset.
  Eigen::MatrixXd as_matrix() const;
  /// Column-wise z-score of numeric data; constant columns are only centered.
  void standardize();
};

/// Twelve 2-D points: two mirrored 5-point diamonds (objects 1-5 and 7-11),
/// a bridge point 6 between them, and a far outlier 12.
/// Labels: 0 = left (1-6), 1 = right (7-11), 2 = outlier.
Dataset gen_diamond();

/// Cylinder-Bell-Funnel. With noise = false the amplitude jitter and the
/// additive noise are both zero, leaving the bare plateau/ramp shapes.
Dataset gen_cbf(int per_class, int length, std::uint64_t seed, bool noise = true);

/// Bell, funnel, and bell+funnel (M-shaped) classes. The mixture puts a bell
/// in the first half of the series and a funnel in the second half.
Dataset gen_bell_funnel_mix(int per_class, int length, std::uint64_t seed, bool noise = true);

struct BlobOptions {
  int clusters = 2;
  int per_class = 20;
  int dim = 2;
  double separation = 10.0;  // distance between consecutive centers
  double spread = 1.0;       // per-coordinate std dev
  std::uint64_t seed = 0;
};

/// Isotropic Gaussian blobs. Centers sit on a circle (on a line for 1-D or
/// two clusters) with neighbouring centers `separation` apart.
Dataset gen_blobs(const BlobOptions& options);

struct CategoricalBlobOptions {
  int clusters = 3;
  int per_class = 20;
  int attributes = 8;
  int levels = 4;
  double flip_probability = 0.1;  // chance an attribute deviates from its class mode
  std::uint64_t seed = 0;
};

/// Categorical records around one random modal record per class, one-hot encoded.
Dataset gen_categorical_blobs(const CategoricalBlobOptions& options);

}  // namespace softecm
