#include "softecm/report.hpp"

#include "softecm/evaluation.hpp"

namespace softecm {

using nlohmann::ordered_json;

ordered_json to_json(const SoftEcmConfig& cfg) {
  ordered_json j;
  j["clusters"] = cfg.clusters;
  j["alpha"] = cfg.alpha;
  j["beta"] = cfg.beta;
  j["delta"] = cfg.delta;
  j["lambda"] = cfg.lambda;
  j["max_card"] = cfg.max_card;
  j["include_omega"] = cfg.include_omega;
  j["metric"] = cfg.metric.to_string();
  j["epsilon"] = cfg.epsilon;
  j["xi"] = cfg.xi;
  j["rho"] = cfg.rho;
  j["max_outer"] = cfg.max_outer;
  j["max_inner"] = cfg.max_inner;
  j["seed"] = cfg.seed;
  j["prototype_length"] = cfg.prototype_length;
  return j;
}

ordered_json to_json(const EcmConfig& cfg) {
  ordered_json j;
  j["clusters"] = cfg.clusters;
  j["alpha"] = cfg.alpha;
  j["beta"] = cfg.beta;
  j["delta"] = cfg.delta;
  j["max_card"] = cfg.max_card;
  j["include_omega"] = cfg.include_omega;
  j["metric"] = "euclidean";
  j["epsilon"] = cfg.epsilon;
  j["max_outer"] = cfg.max_iter;
  j["seed"] = cfg.seed;
  return j;
}

ordered_json partition_summary(const CredalPartition& partition, const std::optional<std::vector<int>>& truth) {
  ordered_json j;
  j["n_objects"] = partition.num_objects();
  j["focal_sets"] = partition.family().labels();
  const auto hard = hard_assign(partition);
  if (partition.num_clusters() >= 2 && partition.num_objects() > 0) {
    j["normalized_specificity"] = normalized_specificity(partition);
  }
  std::vector<int> one_based;
  for (int h : hard) one_based.push_back(h + 1);
  j["hard_labels"] = one_based;
  std::vector<std::string> argmax;
  for (auto k : argmax_focal(partition)) argmax.push_back(partition.family()[k].label());
  j["argmax_focal_sets"] = argmax;
  const auto betp = pignistic(partition);
  j["pignistic_fallback_rows"] = betp.degenerate_rows;
  if (truth) {
    if (truth->size() >= 2) j["rand_index"] = rand_index(hard, *truth);
    j["accuracy"] = matched_accuracy(hard, *truth);
  }
  return j;
}

ordered_json fit_summary(const FitResult& result, const std::optional<std::vector<int>>& truth) {
  ordered_json j;
  j["algorithm"] = "softecm";
  j["config"] = to_json(result.config);
  j["converged"] = result.converged;
  j["outer_iterations"] = result.outer_iterations;
  j["inner_iterations"] = result.inner_iterations;
  j["stalled_inner_loops"] = result.stalled_inner_loops;
  j["objective_trace"] = result.objective_trace;
  j["final_objective"] = result.objective_trace.empty() ? 0.0 : result.objective_trace.back();
  j["clamped_rows"] = result.clamped_rows;
  j.update(partition_summary(result.partition, truth));
  return j;
}

ordered_json fit_summary(const EcmResult& result, const EcmConfig& cfg, const std::optional<std::vector<int>>& truth) {
  ordered_json j;
  j["algorithm"] = "ecm";
  j["config"] = to_json(cfg);
  j["converged"] = result.converged;
  j["outer_iterations"] = result.iterations;
  j["singular_fallback"] = result.singular_fallback;
  j["objective_trace"] = result.objective_trace;
  j["final_objective"] = result.objective_trace.empty() ? 0.0 : result.objective_trace.back();
  j.update(partition_summary(result.partition, truth));
  return j;
}

namespace {

ordered_json frames(const Eigen::MatrixXd& x) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index t = 0; t < x.rows(); ++t) {
    std::vector<double> row(static_cast<std::size_t>(x.cols()));
    for (Eigen::Index k = 0; k < x.cols(); ++k) row[static_cast<std::size_t>(k)] = x(t, k);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

ordered_json prototypes_json(const PrototypeSet& prototypes) {
  ordered_json j;
  for (std::size_t k = 1; k < prototypes.size(); ++k) j[prototypes.family[k].label()] = frames(prototypes[k]);
  return j;
}

ordered_json prototypes_json(const Eigen::MatrixXd& centroids, const FocalFamily& family) {
  const Eigen::MatrixXd all = meta_centroids(centroids, family);
  ordered_json j;
  for (std::size_t k = 1; k < family.size(); ++k) {
    j[family[k].label()] = frames(all.row(static_cast<Eigen::Index>(k)));
  }
  return j;
}

}  // namespace softecm
