#include "softecm/evaluation.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>

namespace softecm {

namespace {

// Maps arbitrary labels to 0..K-1 in order of first appearance.
std::vector<int> compact(std::span<const int> labels, int* count) {
  std::map<int, int> ids;
  std::vector<int> out;
  out.reserve(labels.size());
  for (int l : labels) {
    auto [it, inserted] = ids.emplace(l, static_cast<int>(ids.size()));
    out.push_back(it->second);
  }
  *count = static_cast<int>(ids.size());
  return out;
}

void check_lengths(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("label vectors differ in length: " + std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()));
  }
}

}  // namespace

double rand_index(std::span<const int> a, std::span<const int> b) {
  check_lengths(a, b);
  if (a.size() < 2) throw std::invalid_argument("rand index needs at least 2 objects");
  int ka = 0;
  int kb = 0;
  const auto ca = compact(a, &ka);
  const auto cb = compact(b, &kb);
  Eigen::MatrixXd table = Eigen::MatrixXd::Zero(ka, kb);
  for (std::size_t i = 0; i < a.size(); ++i) table(ca[i], cb[i]) += 1.0;

  auto pairs = [](double x) { return x * (x - 1.0) / 2.0; };
  double together_both = 0.0;
  for (Eigen::Index r = 0; r < table.rows(); ++r) {
    for (Eigen::Index c = 0; c < table.cols(); ++c) together_both += pairs(table(r, c));
  }
  double together_a = 0.0;
  for (Eigen::Index r = 0; r < table.rows(); ++r) together_a += pairs(table.row(r).sum());
  double together_b = 0.0;
  for (Eigen::Index c = 0; c < table.cols(); ++c) together_b += pairs(table.col(c).sum());
  const double total = pairs(static_cast<double>(a.size()));
  const double apart_both = total - together_a - together_b + together_both;
  return (together_both + apart_both) / total;
}

std::vector<int> max_weight_assignment(const Eigen::MatrixXd& weights) {
  // Hungarian algorithm (potentials form) on costs = max - weight.
  const auto n = static_cast<int>(weights.rows());
  if (weights.cols() != n) throw std::invalid_argument("assignment matrix must be square");
  if (n == 0) return {};
  const double top = weights.maxCoeff();
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<double> v(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<int> match(static_cast<std::size_t>(n) + 1, 0);  // match[col] = row, 1-based
  std::vector<int> way(static_cast<std::size_t>(n) + 1, 0);
  auto cost = [&](int r, int c) { return top - weights(r - 1, c - 1); };

  for (int row = 1; row <= n; ++row) {
    match[0] = row;
    int col0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(n) + 1, inf);
    std::vector<bool> used(static_cast<std::size_t>(n) + 1, false);
    do {
      used[static_cast<std::size_t>(col0)] = true;
      const int r0 = match[static_cast<std::size_t>(col0)];
      double delta = inf;
      int col1 = 0;
      for (int c = 1; c <= n; ++c) {
        const auto cu = static_cast<std::size_t>(c);
        if (used[cu]) continue;
        const double reduced = cost(r0, c) - u[static_cast<std::size_t>(r0)] - v[cu];
        if (reduced < minv[cu]) {
          minv[cu] = reduced;
          way[cu] = col0;
        }
        if (minv[cu] < delta) {
          delta = minv[cu];
          col1 = c;
        }
      }
      for (int c = 0; c <= n; ++c) {
        const auto cu = static_cast<std::size_t>(c);
        if (used[cu]) {
          u[static_cast<std::size_t>(match[cu])] += delta;
          v[cu] -= delta;
        } else {
          minv[cu] -= delta;
        }
      }
      col0 = col1;
    } while (match[static_cast<std::size_t>(col0)] != 0);
    do {
      const int col1 = way[static_cast<std::size_t>(col0)];
      match[static_cast<std::size_t>(col0)] = match[static_cast<std::size_t>(col1)];
      col0 = col1;
    } while (col0 != 0);
  }

  std::vector<int> assignment(static_cast<std::size_t>(n), -1);
  for (int c = 1; c <= n; ++c) assignment[static_cast<std::size_t>(match[static_cast<std::size_t>(c)] - 1)] = c - 1;
  return assignment;
}

double matched_accuracy(std::span<const int> predicted, std::span<const int> truth) {
  check_lengths(predicted, truth);
  if (predicted.empty()) return 1.0;
  int kp = 0;
  int kt = 0;
  const auto cp = compact(predicted, &kp);
  const auto ct = compact(truth, &kt);
  const int k = std::max(kp, kt);
  Eigen::MatrixXd confusion = Eigen::MatrixXd::Zero(k, k);  // zero padding for unequal counts
  for (std::size_t i = 0; i < cp.size(); ++i) confusion(cp[i], ct[i]) += 1.0;
  const auto assignment = max_weight_assignment(confusion);
  double correct = 0.0;
  for (int r = 0; r < k; ++r) correct += confusion(r, assignment[static_cast<std::size_t>(r)]);
  return correct / static_cast<double>(predicted.size());
}

}  // namespace softecm
