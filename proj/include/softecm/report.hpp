#pragma once
// JSON views of configurations and fit results.

#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "softecm/ecm.hpp"
#include "softecm/soft_ecm.hpp"

namespace softecm {

nlohmann::ordered_json to_json(const SoftEcmConfig& cfg);
nlohmann::ordered_json to_json(const EcmConfig& cfg);

/// Indices and hard labels shared by both algorithms. Adds rand_index and
/// accuracy when true labels are given.
nlohmann::ordered_json partition_summary(const CredalPartition& partition,
                                         const std::optional<std::vector<int>>& truth);

nlohmann::ordered_json fit_summary(const FitResult& result, const std::optional<std::vector<int>>& truth);
nlohmann::ordered_json fit_summary(const EcmResult& result, const EcmConfig& cfg,
                                   const std::optional<std::vector<int>>& truth);

/// Prototype per non-empty focal set, keyed by its label; each value is a
/// list of frames (rows).
nlohmann::ordered_json prototypes_json(const PrototypeSet& prototypes);
nlohmann::ordered_json prototypes_json(const Eigen::MatrixXd& centroids, const FocalFamily& family);

}  // namespace softecm
