#include "softecm/soft_ecm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "softecm/errors.hpp"
#include "softecm/mass_update.hpp"
#include "softecm/parallel.hpp"

namespace softecm {

void SoftEcmConfig::validate() const {
  if (clusters < 1) throw std::invalid_argument("clusters must be >= 1");
  if (!(alpha >= 0.0)) throw std::invalid_argument("alpha must be >= 0");
  if (!(beta > 1.0)) throw std::invalid_argument("beta must be > 1");
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be > 0");
  if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be >= 0");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  if (!(xi > 0.0)) throw std::invalid_argument("xi must be > 0");
  if (!(rho > 0.0)) throw std::invalid_argument("rho must be > 0");
  if (max_outer < 1) throw std::invalid_argument("max_outer must be >= 1");
  if (max_inner < 1) throw std::invalid_argument("max_inner must be >= 1");
  if (max_card < 1 || max_card > clusters) throw std::invalid_argument("max_card must be in [1, clusters]");
  if (prototype_length < 0) throw std::invalid_argument("prototype_length must be >= 0");
}

FocalFamily SoftEcmConfig::family() const { return enumerate_family(clusters, max_card, include_omega); }

const Object& PrototypeSet::at(const FocalSet& set) const {
  const auto k = family.index_of(set);
  if (!k || *k == 0) throw std::invalid_argument("no prototype for focal set " + set.label());
  return values[*k];
}

double PrototypeSet::distance_to(const PrototypeSet& other) const {
  if (other.values.size() != values.size()) throw std::invalid_argument("prototype sets differ in size");
  double total = 0.0;
  for (std::size_t k = 1; k < values.size(); ++k) total += (values[k] - other.values[k]).squaredNorm();
  return std::sqrt(total);
}

bool PrototypeSet::all_finite() const {
  return std::all_of(values.begin(), values.end(), [](const Object& v) { return v.allFinite(); });
}

void check_dataset(std::span<const Object> data, const SemiMetric& metric) {
  if (data.empty()) throw std::invalid_argument("empty dataset");
  const auto& first = data.front();
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto& x = data[i];
    if (x.size() == 0) throw std::invalid_argument("object " + std::to_string(i + 1) + " is empty");
    if (x.cols() != first.cols()) {
      throw std::invalid_argument("object " + std::to_string(i + 1) + " has " + std::to_string(x.cols()) +
                                  " channels, expected " + std::to_string(first.cols()));
    }
    if (!metric.allows_length_mismatch() && x.rows() != first.rows()) {
      throw std::invalid_argument("object " + std::to_string(i + 1) + " has length " + std::to_string(x.rows()) +
                                  ", expected " + std::to_string(first.rows()) + " for metric " +
                                  metric.to_string());
    }
    if (!x.allFinite()) throw std::invalid_argument("object " + std::to_string(i + 1) + " has non-finite values");
  }
}

namespace {

int thread_count(const SoftEcmConfig& cfg) { return cfg.threads > 0 ? cfg.threads : default_thread_count(); }

struct Evaluation {
  double data_term = 0.0;
  double empty_term = 0.0;
  double penalty = 0.0;  // unweighted by lambda
  PrototypeSet gradient;

  double objective(double lambda) const { return data_term + empty_term + lambda * penalty; }
};

void check_inputs(const CredalPartition& partition, const PrototypeSet& prototypes, std::span<const Object> data) {
  if (partition.num_objects() != data.size()) {
    throw std::invalid_argument("partition has " + std::to_string(partition.num_objects()) + " rows for " +
                                std::to_string(data.size()) + " objects");
  }
  if (!(partition.family() == prototypes.family) || prototypes.values.size() != prototypes.family.size()) {
    throw std::invalid_argument("partition and prototypes use different focal families");
  }
}

Evaluation evaluate(const CredalPartition& partition, const PrototypeSet& prototypes, std::span<const Object> data,
                    const SoftEcmConfig& cfg, bool with_penalty, bool with_grad) {
  check_inputs(partition, prototypes, data);
  const auto& family = prototypes.family;
  const std::size_t n = data.size();
  const std::size_t f = family.size();
  const auto& m = partition.masses();

  Eigen::MatrixXd weights = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(f));
  for (std::size_t k = 1; k < f; ++k) {
    const double scale = std::pow(static_cast<double>(family[k].cardinality()), cfg.alpha);
    for (std::size_t i = 0; i < n; ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      const auto kk = static_cast<Eigen::Index>(k);
      weights(ii, kk) = scale * std::pow(m(ii, kk), cfg.beta);
    }
  }

  // Per-(object, focal set) results, reduced below in a fixed order.
  std::vector<double> dist(n * f, 0.0);
  std::vector<Object> grads(with_grad ? n * f : 0);
  parallel_for(n * (f - 1), thread_count(cfg), [&](std::size_t item) {
    const std::size_t i = item / (f - 1);
    const std::size_t k = 1 + item % (f - 1);
    const double w = weights(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
    if (w == 0.0) return;
    if (with_grad) {
      Object g;
      dist[i * f + k] = cfg.metric.distance_and_grad(data[i], prototypes[k], &g);
      grads[i * f + k] = w * g;
    } else {
      dist[i * f + k] = cfg.metric.distance(data[i], prototypes[k]);
    }
  });

  Evaluation out;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 1; k < f; ++k) {
      out.data_term += weights(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) * dist[i * f + k];
    }
    out.empty_term += cfg.delta * cfg.delta * std::pow(m(static_cast<Eigen::Index>(i), 0), cfg.beta);
  }

  if (with_grad) {
    out.gradient.family = family;
    out.gradient.values.resize(f);
    for (std::size_t k = 1; k < f; ++k) {
      Object acc = Object::Zero(prototypes[k].rows(), prototypes[k].cols());
      for (std::size_t i = 0; i < n; ++i) {
        if (grads[i * f + k].size() != 0) acc += grads[i * f + k];
      }
      out.gradient[k] = std::move(acc);
    }
  }

  if (with_penalty) {
    for (std::size_t k = 1; k < f; ++k) {
      if (family[k].cardinality() < 2) continue;
      for (int member : family[k].members()) {
        const std::size_t s = family.singleton_index(member);
        if (with_grad) {
          Object g_single;
          Object g_meta;
          out.penalty += cfg.metric.distance_and_grads(prototypes[s], prototypes[k], &g_single, &g_meta);
          out.gradient[k] += cfg.lambda * g_meta;
          out.gradient[s] += cfg.lambda * g_single;
        } else {
          out.penalty += cfg.metric.distance(prototypes[s], prototypes[k]);
        }
      }
    }
  }
  return out;
}

}  // namespace

double soft_objective(const CredalPartition& partition, const PrototypeSet& prototypes,
                      std::span<const Object> data, const SoftEcmConfig& cfg) {
  return evaluate(partition, prototypes, data, cfg, true, false).objective(cfg.lambda);
}

double soft_objective_data_term(const CredalPartition& partition, const PrototypeSet& prototypes,
                                std::span<const Object> data, const SoftEcmConfig& cfg) {
  const auto e = evaluate(partition, prototypes, data, cfg, false, false);
  return e.data_term + e.empty_term;
}

MassUpdate update_masses(std::span<const Object> data, const PrototypeSet& prototypes, const SoftEcmConfig& cfg) {
  const auto& family = prototypes.family;
  const std::size_t n = data.size();
  const std::size_t f = family.size();
  if (prototypes.values.size() != f) throw std::invalid_argument("prototype set does not match its family");
  Eigen::MatrixXd dist = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(f));
  parallel_for(n * (f - 1), thread_count(cfg), [&](std::size_t item) {
    const std::size_t i = item / (f - 1);
    const std::size_t k = 1 + item % (f - 1);
    dist(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = cfg.metric.distance(data[i], prototypes[k]);
  });
  MassUpdate out;
  Eigen::MatrixXd masses = evidential_masses(dist, family, cfg.alpha, cfg.beta, cfg.delta, &out.clamped_rows);
  out.partition = CredalPartition(family, std::move(masses));
  return out;
}

PrototypeSet prototype_gradient(const CredalPartition& partition, const PrototypeSet& prototypes,
                                std::span<const Object> data, const SoftEcmConfig& cfg) {
  return evaluate(partition, prototypes, data, cfg, cfg.lambda != 0.0, true).gradient;
}

PrototypeUpdate update_prototypes(const CredalPartition& partition, const PrototypeSet& prototypes,
                                  std::span<const Object> data, const SoftEcmConfig& cfg) {
  constexpr int kMaxHalvings = 20;
  const bool with_penalty = cfg.lambda != 0.0;
  PrototypeUpdate out;
  out.prototypes = prototypes;
  Evaluation current = evaluate(partition, out.prototypes, data, cfg, with_penalty, true);
  if (!std::isfinite(current.objective(cfg.lambda))) throw NumericalFailure("objective is not finite");
  double step = cfg.rho;

  for (int it = 0; it < cfg.max_inner; ++it) {
    for (std::size_t k = 1; k < current.gradient.size(); ++k) {
      if (!current.gradient[k].allFinite()) {
        throw NumericalFailure("non-finite gradient for prototype " + prototypes.family[k].label());
      }
    }
    bool accepted = false;
    PrototypeSet candidate = out.prototypes;
    Evaluation next;
    for (int halving = 0; halving <= kMaxHalvings; ++halving) {
      for (std::size_t k = 1; k < candidate.size(); ++k) {
        candidate[k] = out.prototypes[k] - step * current.gradient[k];
      }
      next = evaluate(partition, candidate, data, cfg, with_penalty, true);
      if (next.objective(cfg.lambda) <= current.objective(cfg.lambda)) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      out.stalled = true;
      break;
    }
    const double change = candidate.distance_to(out.prototypes);
    out.prototypes = std::move(candidate);
    current = std::move(next);
    out.iterations = it + 1;
    if (change < cfg.xi) break;
  }
  out.objective = current.objective(cfg.lambda);
  return out;
}

Object resample(const Object& series, Eigen::Index frames) {
  if (frames < 1) throw std::invalid_argument("resample to zero frames");
  if (series.rows() == frames) return series;
  if (series.rows() == 0) throw std::invalid_argument("resample of an empty series");
  Object out(frames, series.cols());
  const double last = static_cast<double>(series.rows() - 1);
  for (Eigen::Index t = 0; t < frames; ++t) {
    const double pos = frames == 1 ? 0.0 : last * static_cast<double>(t) / static_cast<double>(frames - 1);
    const auto lo = static_cast<Eigen::Index>(std::floor(pos));
    const Eigen::Index hi = std::min(lo + 1, series.rows() - 1);
    const double frac = pos - static_cast<double>(lo);
    out.row(t) = (1.0 - frac) * series.row(lo) + frac * series.row(hi);
  }
  return out;
}

PrototypeSet initial_prototypes(std::span<const Object> data, const SoftEcmConfig& cfg) {
  cfg.validate();
  check_dataset(data, cfg.metric);
  if (data.size() < static_cast<std::size_t>(cfg.clusters)) {
    throw std::invalid_argument("need at least as many objects (" + std::to_string(data.size()) + ") as clusters (" +
                                std::to_string(cfg.clusters) + ")");
  }
  Eigen::Index frames = data.front().rows();
  if (cfg.metric.allows_length_mismatch()) {
    if (cfg.prototype_length > 0) {
      frames = cfg.prototype_length;
    } else {
      for (const auto& x : data) frames = std::max(frames, x.rows());
    }
  }

  PrototypeSet v;
  v.family = cfg.family();
  v.values.resize(v.family.size());
  const auto picks = sample_distinct(data.size(), static_cast<std::size_t>(cfg.clusters), cfg.seed);
  for (int k = 0; k < cfg.clusters; ++k) {
    v[v.family.singleton_index(k)] = resample(data[picks[static_cast<std::size_t>(k)]], frames);
  }
  for (std::size_t k = 1 + static_cast<std::size_t>(cfg.clusters); k < v.size(); ++k) {
    Object mean = Object::Zero(frames, data.front().cols());
    const auto members = v.family[k].members();
    for (int member : members) mean += v[v.family.singleton_index(member)];
    v[k] = mean / static_cast<double>(members.size());
  }
  return v;
}

FitResult fit(std::span<const Object> data, const SoftEcmConfig& cfg) {
  return fit(data, cfg, initial_prototypes(data, cfg));
}

FitResult fit(std::span<const Object> data, const SoftEcmConfig& cfg, PrototypeSet initial) {
  cfg.validate();
  check_dataset(data, cfg.metric);
  if (data.size() < static_cast<std::size_t>(cfg.clusters)) {
    throw std::invalid_argument("need at least as many objects as clusters");
  }
  if (!(initial.family == cfg.family()) || initial.values.size() != initial.family.size()) {
    throw std::invalid_argument("initial prototypes do not match the configured focal family");
  }
  for (std::size_t k = 1; k < initial.size(); ++k) cfg.metric.check_compatible(data.front(), initial[k]);

  FitResult result;
  result.config = cfg;
  result.prototypes = std::move(initial);
  Eigen::MatrixXd previous;
  for (int t = 0; t < cfg.max_outer; ++t) {
    MassUpdate masses = update_masses(data, result.prototypes, cfg);
    PrototypeUpdate step = update_prototypes(masses.partition, result.prototypes, data, cfg);
    result.prototypes = std::move(step.prototypes);
    result.objective_trace.push_back(step.objective);
    result.inner_iterations += step.iterations;
    if (step.stalled) ++result.stalled_inner_loops;
    result.outer_iterations = t + 1;
    const bool settled =
        previous.size() != 0 && (masses.partition.masses() - previous).norm() < cfg.epsilon;
    previous = masses.partition.masses();
    result.partition = std::move(masses.partition);
    result.clamped_rows = std::move(masses.clamped_rows);
    if (settled) {
      result.converged = true;
      break;
    }
  }
  return result;
}

}  // namespace softecm
