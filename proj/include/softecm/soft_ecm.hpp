#pragma once
// Soft-ECM: evidential clustering with any differentiable semi-metric.
//
// Every non-empty focal set A owns a free prototype v_A. The objective is
//
//   J(M, V) = sum_i sum_{A != {}} |A|^alpha m_i(A)^beta d(x_i, v_A)
//           + sum_i delta^2 m_i({})^beta
//           + lambda sum_{|A| > 1} sum_{k in A} d(v_{k}, v_A)
//
// and is minimized by alternating a closed-form mass update with gradient
// descent over all prototypes jointly. The lambda term keeps meta-cluster
// prototypes consistent with the barycenter of their singletons.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "softecm/focal.hpp"
#include "softecm/semimetric.hpp"

namespace softecm {

struct SoftEcmConfig {
  int clusters = 2;
  double alpha = 1.0;
  double beta = 2.0;
  double delta = 10.0;
  double lambda = 1.0;
  int max_card = 2;
  bool include_omega = false;
  SemiMetric metric;
  double epsilon = 1e-3;  // outer stop on ||M_t - M_{t-1}||_F
  double xi = 1e-4;       // inner stop on ||V_{s+1} - V_s||_F
  double rho = 0.05;      // learning rate
  int max_outer = 100;
  int max_inner = 200;
  std::uint64_t seed = 0;
  int prototype_length = 0;  // soft-DTW prototype frames; 0 = longest series in the data
  int threads = 0;           // 0 = default_thread_count()

  void validate() const;
  FocalFamily family() const;
};

/// One prototype per focal set, indexed like the family. values[0] belongs to
/// the empty set and stays empty.
struct PrototypeSet {
  FocalFamily family;
  std::vector<Object> values;

  std::size_t size() const noexcept { return values.size(); }
  const Object& operator[](std::size_t k) const { return values[k]; }
  Object& operator[](std::size_t k) { return values[k]; }
  const Object& at(const FocalSet& set) const;

  /// Frobenius norm over all prototypes of (*this - other).
  double distance_to(const PrototypeSet& other) const;
  bool all_finite() const;
};

struct FitResult {
  CredalPartition partition;
  PrototypeSet prototypes;
  std::vector<double> objective_trace;
  int outer_iterations = 0;
  int inner_iterations = 0;  // summed over outer iterations
  int stalled_inner_loops = 0;
  bool converged = false;
  std::vector<std::size_t> clamped_rows;  // from the last mass update
  SoftEcmConfig config;
};

struct MassUpdate {
  CredalPartition partition;
  std::vector<std::size_t> clamped_rows;
};

struct PrototypeUpdate {
  PrototypeSet prototypes;
  double objective = 0.0;
  int iterations = 0;
  bool stalled = false;  // 20 halvings could not decrease J; last accepted V kept
};

/// Throws std::invalid_argument unless the objects can be clustered with the metric.
void check_dataset(std::span<const Object> data, const SemiMetric& metric);

double soft_objective(const CredalPartition& partition, const PrototypeSet& prototypes,
                      std::span<const Object> data, const SoftEcmConfig& cfg);

/// Penalty-free part of the objective (lambda term dropped).
double soft_objective_data_term(const CredalPartition& partition, const PrototypeSet& prototypes,
                                std::span<const Object> data, const SoftEcmConfig& cfg);

MassUpdate update_masses(std::span<const Object> data, const PrototypeSet& prototypes, const SoftEcmConfig& cfg);

/// Gradient of soft_objective in every prototype (index 0 stays empty).
PrototypeSet prototype_gradient(const CredalPartition& partition, const PrototypeSet& prototypes,
                                std::span<const Object> data, const SoftEcmConfig& cfg);

/// Fixed-step descent with step halving. Throws NumericalFailure on a
/// non-finite objective or gradient.
PrototypeUpdate update_prototypes(const CredalPartition& partition, const PrototypeSet& prototypes,
                                  std::span<const Object> data, const SoftEcmConfig& cfg);

/// Singletons are c distinct data objects drawn with cfg.seed; meta-cluster
/// prototypes start at the mean of their singletons.
PrototypeSet initial_prototypes(std::span<const Object> data, const SoftEcmConfig& cfg);

FitResult fit(std::span<const Object> data, const SoftEcmConfig& cfg);
FitResult fit(std::span<const Object> data, const SoftEcmConfig& cfg, PrototypeSet initial);

/// Resamples a series to `frames` rows by linear interpolation.
Object resample(const Object& series, Eigen::Index frames);

// --- hyperparameter sweep -------------------------------------------------

struct SweepCell {
  double beta = 0.0;
  double lambda = 0.0;
  std::vector<double> nstar;  // one per successful run
  std::vector<std::string> errors;
  double mean_nstar = 0.0;
  double std_nstar = 0.0;

  bool ok() const noexcept { return !nstar.empty(); }
};

struct SweepResult {
  std::vector<SweepCell> cells;  // beta-major order
  std::optional<std::size_t> best;
};

std::vector<double> default_beta_grid();    // 1.1, 1.2, ..., 2.0
std::vector<double> default_lambda_grid();  // 1, 2, ..., 10

/// Runs fit runs_per_cell times per (beta, lambda) cell. Run r of cell k uses
/// seed cfg.seed + k * runs_per_cell + r. The best cell minimizes mean N*,
/// ties going to the smaller lambda, then the smaller beta.
SweepResult sweep(std::span<const Object> data, const SoftEcmConfig& cfg, const std::vector<double>& beta_grid,
                  const std::vector<double>& lambda_grid, int runs_per_cell);

}  // namespace softecm
