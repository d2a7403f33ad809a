#pragma once
// Classic Evidential C-Means on numeric data: squared Euclidean distances to
// meta-cluster centroids defined as isobarycenters of singleton centroids,
// with closed-form alternating updates.

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "softecm/focal.hpp"

namespace softecm {

struct EcmConfig {
  int clusters = 2;
  double alpha = 1.0;
  double beta = 2.0;
  double delta = 10.0;
  double epsilon = 1e-3;
  int max_iter = 100;
  std::uint64_t seed = 0;
  int max_card = 2;
  bool include_omega = false;

  void validate() const;
  FocalFamily family() const;
};

struct EcmResult {
  CredalPartition partition;
  Eigen::MatrixXd centroids;  // c x p
  std::vector<double> objective_trace;
  int iterations = 0;
  bool converged = false;
  bool singular_fallback = false;  // at least one gradient step replaced the linear solve
};

/// Mean of the singleton centroids in `set`. Throws on the empty set.
Eigen::RowVectorXd meta_centroid(const Eigen::MatrixXd& centroids, const FocalSet& set);

/// |family| x p; row 0 (empty set) is left at zero.
Eigen::MatrixXd meta_centroids(const Eigen::MatrixXd& centroids, const FocalFamily& family);

/// Intra-cluster inertia J_ECM for data (n x p) and singleton centroids (c x p).
double ecm_objective(const CredalPartition& partition, const Eigen::MatrixXd& centroids,
                     const Eigen::MatrixXd& data, const EcmConfig& cfg);

CredalPartition ecm_update_masses(const Eigen::MatrixXd& data, const Eigen::MatrixXd& centroids,
                                  const EcmConfig& cfg);

/// Solves the normal equations H V = B of J_ECM in V. When H is rank
/// deficient, falls back to one non-increasing gradient step and sets *singular.
Eigen::MatrixXd ecm_update_centroids(const CredalPartition& partition, const Eigen::MatrixXd& data,
                                     const Eigen::MatrixXd& centroids, const EcmConfig& cfg, bool* singular);

/// Initial centroids: c distinct data rows drawn with cfg.seed.
Eigen::MatrixXd ecm_initial_centroids(const Eigen::MatrixXd& data, const EcmConfig& cfg);

EcmResult ecm_fit(const Eigen::MatrixXd& data, const EcmConfig& cfg);
EcmResult ecm_fit(const Eigen::MatrixXd& data, const EcmConfig& cfg, Eigen::MatrixXd initial_centroids);

}  // namespace softecm
