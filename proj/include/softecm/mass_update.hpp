#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "softecm/focal.hpp"

namespace softecm {

/// Closed-form credal partition minimizing the weighted inertia for fixed
/// prototypes. `distances` is n x |family|; column 0 (empty set) is ignored.
/// Distances are clamped to kDistanceFloor; indices of rows where that
/// happened go to *clamped_rows. Evaluated in the log domain so small beta
/// and near-zero distances do not overflow.
Eigen::MatrixXd evidential_masses(const Eigen::MatrixXd& distances, const FocalFamily& family, double alpha,
                                  double beta, double delta, std::vector<std::size_t>* clamped_rows = nullptr);

/// k distinct indices out of [0, n), uniformly under the seed.
std::vector<std::size_t> sample_distinct(std::size_t n, std::size_t k, std::uint64_t seed);

}  // namespace softecm
