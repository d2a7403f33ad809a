#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

namespace softecm {

/// Fraction of object pairs on which two labelings agree (both together or
/// both apart). Requires equal lengths and n >= 2.
double rand_index(std::span<const int> a, std::span<const int> b);

/// Best accuracy over injective cluster -> class maps, found by optimal
/// assignment on the confusion matrix.
double matched_accuracy(std::span<const int> predicted, std::span<const int> truth);

/// Maximum-weight assignment on a square matrix; returns col[row].
std::vector<int> max_weight_assignment(const Eigen::MatrixXd& weights);

}  // namespace softecm
