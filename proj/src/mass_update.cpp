#include "softecm/mass_update.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "softecm/semimetric.hpp"

namespace softecm {

Eigen::MatrixXd evidential_masses(const Eigen::MatrixXd& distances, const FocalFamily& family, double alpha,
                                  double beta, double delta, std::vector<std::size_t>* clamped_rows) {
  const auto n = distances.rows();
  const auto f = static_cast<Eigen::Index>(family.size());
  if (distances.cols() != f) throw std::invalid_argument("distance matrix does not match focal family");
  const double inv = 1.0 / (beta - 1.0);
  const double log_empty = -2.0 * inv * std::log(delta);

  std::vector<double> log_cardinality(family.size(), 0.0);
  for (std::size_t k = 1; k < family.size(); ++k) {
    log_cardinality[k] = -alpha * inv * std::log(static_cast<double>(family[k].cardinality()));
  }

  Eigen::MatrixXd masses(n, f);
  Eigen::VectorXd logs(f);
  for (Eigen::Index i = 0; i < n; ++i) {
    bool clamped = false;
    logs(0) = log_empty;
    for (Eigen::Index k = 1; k < f; ++k) {
      const double raw = distances(i, k);
      if (!(raw > kDistanceFloor)) clamped = true;
      logs(k) = log_cardinality[static_cast<std::size_t>(k)] - inv * std::log(clamp_distance(raw));
    }
    const double top = logs.maxCoeff();
    double total = 0.0;
    for (Eigen::Index k = 0; k < f; ++k) {
      masses(i, k) = std::exp(logs(k) - top);
      total += masses(i, k);
    }
    masses.row(i) /= total;
    if (clamped && clamped_rows) clamped_rows->push_back(static_cast<std::size_t>(i));
  }
  return masses;
}

std::vector<std::size_t> sample_distinct(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k > n) throw std::invalid_argument("cannot draw " + std::to_string(k) + " distinct items from " + std::to_string(n));
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> pool(n);
  for (std::size_t i = 0; i < n; ++i) pool[i] = i;
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  pool.resize(k);
  return pool;
}

}  // namespace softecm
