#pragma once
// Independent reference computations used as test oracles. Deliberately naive.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include <Eigen/Core>

namespace oracle {

using Mat = Eigen::MatrixXd;

inline double frame_cost(const Mat& x, Eigen::Index i, const Mat& y, Eigen::Index j) {
  return (x.row(i) - y.row(j)).squaredNorm();
}

// Classic DTW by dynamic programming with hard min.
inline double dtw(const Mat& x, const Mat& y) {
  const auto n = x.rows();
  const auto m = y.rows();
  const double inf = std::numeric_limits<double>::infinity();
  Mat r = Mat::Constant(n + 1, m + 1, inf);
  r(0, 0) = 0.0;
  for (Eigen::Index i = 1; i <= n; ++i) {
    for (Eigen::Index j = 1; j <= m; ++j) {
      r(i, j) = frame_cost(x, i - 1, y, j - 1) + std::min({r(i - 1, j - 1), r(i - 1, j), r(i, j - 1)});
    }
  }
  return r(n, m);
}

// Every monotone warping path from (0,0) to (n-1,m-1), as path costs.
inline void path_costs(const Mat& x, const Mat& y, Eigen::Index i, Eigen::Index j, double acc,
                       std::vector<double>& out) {
  acc += frame_cost(x, i, y, j);
  if (i == x.rows() - 1 && j == y.rows() - 1) {
    out.push_back(acc);
    return;
  }
  if (i + 1 < x.rows()) path_costs(x, y, i + 1, j, acc, out);
  if (j + 1 < y.rows()) path_costs(x, y, i, j + 1, acc, out);
  if (i + 1 < x.rows() && j + 1 < y.rows()) path_costs(x, y, i + 1, j + 1, acc, out);
}

// Soft-DTW as -gamma log sum over all alignments of exp(-cost / gamma).
inline double soft_dtw_enumerated(const Mat& x, const Mat& y, double gamma) {
  std::vector<double> costs;
  path_costs(x, y, 0, 0, 0.0, costs);
  const double lo = *std::min_element(costs.begin(), costs.end());
  double sum = 0.0;
  for (double c : costs) sum += std::exp(-(c - lo) / gamma);
  return lo - gamma * std::log(sum);
}

// Uniform draw on the probability simplex.
inline Eigen::RowVectorXd simplex_row(std::mt19937_64& rng, Eigen::Index size) {
  std::exponential_distribution<double> e(1.0);
  Eigen::RowVectorXd row(size);
  for (Eigen::Index k = 0; k < size; ++k) row(k) = e(rng);
  return row / row.sum();
}

inline Mat random_masses(std::mt19937_64& rng, Eigen::Index n, Eigen::Index f) {
  Mat m(n, f);
  for (Eigen::Index i = 0; i < n; ++i) m.row(i) = simplex_row(rng, f);
  return m;
}

// Rand index by looking at every pair.
inline double rand_index_pairs(const std::vector<int>& a, const std::vector<int>& b) {
  long agree = 0;
  long total = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      agree += ((a[i] == a[j]) == (b[i] == b[j])) ? 1 : 0;
      ++total;
    }
  }
  return static_cast<double>(agree) / static_cast<double>(total);
}

// Best accuracy over all injective cluster -> class maps, by permutation search.
inline double accuracy_brute_force(const std::vector<int>& pred, const std::vector<int>& truth) {
  const std::set<int> cluster_set(pred.begin(), pred.end());
  const std::set<int> class_set(truth.begin(), truth.end());
  const std::vector<int> clusters(cluster_set.begin(), cluster_set.end());
  std::vector<int> classes(class_set.begin(), class_set.end());
  // Pad with ids no object carries so surplus clusters map to "no class".
  int unused = std::numeric_limits<int>::min();
  while (classes.size() < clusters.size()) classes.push_back(unused++);
  std::vector<std::size_t> perm(classes.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::size_t best = 0;
  do {
    std::map<int, int> mapping;
    for (std::size_t c = 0; c < clusters.size(); ++c) mapping[clusters[c]] = classes[perm[c]];
    std::size_t correct = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) correct += mapping[pred[i]] == truth[i] ? 1 : 0;
    best = std::max(best, correct);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<double>(best) / static_cast<double>(pred.size());
}

// Central finite-difference gradient of f at x (any shape).
inline Mat fd_gradient(const std::function<double(const Mat&)>& f, const Mat& x, double h = 1e-5) {
  Mat g(x.rows(), x.cols());
  Mat probe = x;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    const double keep = probe(k);
    probe(k) = keep + h;
    const double up = f(probe);
    probe(k) = keep - h;
    const double down = f(probe);
    probe(k) = keep;
    g(k) = (up - down) / (2.0 * h);
  }
  return g;
}

inline double relative_error(const Mat& a, const Mat& b) {
  const double scale = std::max({a.norm(), b.norm(), 1e-8});
  return (a - b).norm() / scale;
}

}  // namespace oracle
