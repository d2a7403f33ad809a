#include "softecm/ecm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "softecm/mass_update.hpp"
#include "softecm/semimetric.hpp"

namespace softecm {

void EcmConfig::validate() const {
  if (clusters < 1) throw std::invalid_argument("clusters must be >= 1");
  if (!(alpha >= 0.0)) throw std::invalid_argument("alpha must be >= 0");
  if (!(beta > 1.0)) throw std::invalid_argument("beta must be > 1");
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be > 0");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  if (max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
  if (max_card < 1 || max_card > clusters) throw std::invalid_argument("max_card must be in [1, clusters]");
}

FocalFamily EcmConfig::family() const { return enumerate_family(clusters, max_card, include_omega); }

Eigen::RowVectorXd meta_centroid(const Eigen::MatrixXd& centroids, const FocalSet& set) {
  if (set.is_empty()) throw std::invalid_argument("meta_centroid of the empty set");
  if (set.universe_size() != centroids.rows()) {
    throw std::invalid_argument("focal set universe does not match centroid count");
  }
  Eigen::RowVectorXd out = Eigen::RowVectorXd::Zero(centroids.cols());
  for (int k : set.members()) out += centroids.row(k);
  return out / set.cardinality();
}

Eigen::MatrixXd meta_centroids(const Eigen::MatrixXd& centroids, const FocalFamily& family) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(family.size()), centroids.cols());
  for (std::size_t k = 1; k < family.size(); ++k) {
    out.row(static_cast<Eigen::Index>(k)) = meta_centroid(centroids, family[k]);
  }
  return out;
}

namespace {

void check_shapes(const Eigen::MatrixXd& data, const Eigen::MatrixXd& centroids, const EcmConfig& cfg) {
  if (centroids.rows() != cfg.clusters) {
    throw std::invalid_argument("expected " + std::to_string(cfg.clusters) + " centroids, got " +
                                std::to_string(centroids.rows()));
  }
  if (data.cols() != centroids.cols()) {
    throw std::invalid_argument("data dimension " + std::to_string(data.cols()) +
                                " does not match centroid dimension " + std::to_string(centroids.cols()));
  }
}

Eigen::MatrixXd squared_distances(const Eigen::MatrixXd& data, const Eigen::MatrixXd& focal_centroids) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(data.rows(), focal_centroids.rows());
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    for (Eigen::Index k = 1; k < focal_centroids.rows(); ++k) {
      d(i, k) = (data.row(i) - focal_centroids.row(k)).squaredNorm();
    }
  }
  return d;
}

}  // namespace

double ecm_objective(const CredalPartition& partition, const Eigen::MatrixXd& centroids,
                     const Eigen::MatrixXd& data, const EcmConfig& cfg) {
  check_shapes(data, centroids, cfg);
  if (static_cast<Eigen::Index>(partition.num_objects()) != data.rows()) {
    throw std::invalid_argument("partition and data disagree on the number of objects");
  }
  const auto& family = partition.family();
  if (family.universe_size() != cfg.clusters) throw std::invalid_argument("partition has the wrong cluster count");
  const Eigen::MatrixXd bars = meta_centroids(centroids, family);
  const Eigen::MatrixXd d2 = squared_distances(data, bars);
  const auto& m = partition.masses();
  double j = 0.0;
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    for (Eigen::Index k = 1; k < m.cols(); ++k) {
      const double card = family[static_cast<std::size_t>(k)].cardinality();
      j += std::pow(card, cfg.alpha) * std::pow(m(i, k), cfg.beta) * d2(i, k);
    }
    j += cfg.delta * cfg.delta * std::pow(m(i, 0), cfg.beta);
  }
  return j;
}

CredalPartition ecm_update_masses(const Eigen::MatrixXd& data, const Eigen::MatrixXd& centroids,
                                  const EcmConfig& cfg) {
  check_shapes(data, centroids, cfg);
  FocalFamily family = cfg.family();
  const Eigen::MatrixXd d2 = squared_distances(data, meta_centroids(centroids, family));
  Eigen::MatrixXd masses = evidential_masses(d2, family, cfg.alpha, cfg.beta, cfg.delta);
  return CredalPartition(std::move(family), std::move(masses));
}

Eigen::MatrixXd ecm_update_centroids(const CredalPartition& partition, const Eigen::MatrixXd& data,
                                     const Eigen::MatrixXd& centroids, const EcmConfig& cfg, bool* singular) {
  check_shapes(data, centroids, cfg);
  const auto& family = partition.family();
  const auto& m = partition.masses();
  const int c = cfg.clusters;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(c, c);
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(c, data.cols());
  for (std::size_t k = 1; k < family.size(); ++k) {
    const auto members = family[k].members();
    const double card = static_cast<double>(members.size());
    double weight_sum = 0.0;
    Eigen::RowVectorXd weighted_x = Eigen::RowVectorXd::Zero(data.cols());
    for (Eigen::Index i = 0; i < data.rows(); ++i) {
      const double w = std::pow(m(i, static_cast<Eigen::Index>(k)), cfg.beta);
      weight_sum += w;
      weighted_x += w * data.row(i);
    }
    for (int l : members) {
      b.row(l) += std::pow(card, cfg.alpha - 1.0) * weighted_x;
      for (int q : members) h(l, q) += std::pow(card, cfg.alpha - 2.0) * weight_sum;
    }
  }

  Eigen::FullPivLU<Eigen::MatrixXd> lu(h);
  lu.setThreshold(1e-12);
  if (lu.rank() == c) {
    Eigen::MatrixXd solved = lu.solve(b);
    if (solved.allFinite()) return solved;
  }

  if (singular) *singular = true;
  // grad_V J = 2 (H V - B); step size from the largest row sum of H, halved on increase.
  const Eigen::MatrixXd grad = 2.0 * (h * centroids - b);
  const double scale = h.cwiseAbs().rowwise().sum().maxCoeff();
  if (!(scale > 0.0) || grad.squaredNorm() == 0.0) return centroids;
  const double start = ecm_objective(partition, centroids, data, cfg);
  double step = 0.5 / scale;
  for (int halving = 0; halving <= 20; ++halving, step *= 0.5) {
    Eigen::MatrixXd candidate = centroids - step * grad;
    if (ecm_objective(partition, candidate, data, cfg) <= start) return candidate;
  }
  return centroids;
}

Eigen::MatrixXd ecm_initial_centroids(const Eigen::MatrixXd& data, const EcmConfig& cfg) {
  const auto picks = sample_distinct(static_cast<std::size_t>(data.rows()), static_cast<std::size_t>(cfg.clusters), cfg.seed);
  Eigen::MatrixXd v(cfg.clusters, data.cols());
  for (int k = 0; k < cfg.clusters; ++k) v.row(k) = data.row(static_cast<Eigen::Index>(picks[static_cast<std::size_t>(k)]));
  return v;
}

EcmResult ecm_fit(const Eigen::MatrixXd& data, const EcmConfig& cfg) {
  cfg.validate();
  if (data.rows() < cfg.clusters) {
    throw std::invalid_argument("ecm_fit: need at least as many objects as clusters");
  }
  return ecm_fit(data, cfg, ecm_initial_centroids(data, cfg));
}

EcmResult ecm_fit(const Eigen::MatrixXd& data, const EcmConfig& cfg, Eigen::MatrixXd initial_centroids) {
  cfg.validate();
  if (data.rows() < cfg.clusters) {
    throw std::invalid_argument("ecm_fit: need at least as many objects as clusters");
  }
  check_shapes(data, initial_centroids, cfg);

  EcmResult result;
  result.centroids = std::move(initial_centroids);
  Eigen::MatrixXd previous;
  for (int t = 0; t < cfg.max_iter; ++t) {
    CredalPartition partition = ecm_update_masses(data, result.centroids, cfg);
    bool singular = false;
    result.centroids = ecm_update_centroids(partition, data, result.centroids, cfg, &singular);
    result.singular_fallback = result.singular_fallback || singular;
    result.objective_trace.push_back(ecm_objective(partition, result.centroids, data, cfg));
    result.iterations = t + 1;
    const bool settled = previous.size() != 0 && (partition.masses() - previous).norm() < cfg.epsilon;
    previous = partition.masses();
    result.partition = std::move(partition);
    if (settled) {
      result.converged = true;
      break;
    }
  }
  return result;
}

}  // namespace softecm
