#include "softecm/semimetric.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace softecm {

double clamp_distance(double d) noexcept { return std::max(d, kDistanceFloor); }

SemiMetric SemiMetric::soft_dtw(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument("soft-DTW gamma must be a positive finite number");
  }
  return SemiMetric(MetricKind::SoftDtw, gamma);
}

SemiMetric SemiMetric::parse(std::string_view text) {
  if (text == "euclidean" || text == "sqeuclidean") return sq_euclidean();
  if (text == "hamming") return onehot_hamming();
  if (text == "softdtw") return soft_dtw();
  constexpr std::string_view prefix = "softdtw:";
  if (text.starts_with(prefix)) {
    const std::string value(text.substr(prefix.size()));
    std::size_t used = 0;
    double gamma = 0.0;
    try {
      gamma = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != value.size()) {
      throw std::invalid_argument("bad soft-DTW gamma '" + value + "'");
    }
    return soft_dtw(gamma);
  }
  throw std::invalid_argument("unknown metric '" + std::string(text) +
                              "' (expected euclidean, hamming or softdtw:<gamma>)");
}

std::string SemiMetric::to_string() const {
  switch (kind_) {
    case MetricKind::SqEuclidean:
      return "euclidean";
    case MetricKind::OneHotHamming:
      return "hamming";
    case MetricKind::SoftDtw: {
      std::ostringstream out;
      out.precision(17);
      out << "softdtw:" << gamma_;
      return out.str();
    }
  }
  return "unknown";
}

void SemiMetric::check_compatible(const Object& x, const Object& v) const {
  if (x.size() == 0 || v.size() == 0) throw std::invalid_argument("empty object");
  if (kind_ == MetricKind::SoftDtw) {
    if (x.cols() != v.cols()) {
      throw std::invalid_argument("soft-DTW channel mismatch: " + std::to_string(x.cols()) + " vs " +
                                  std::to_string(v.cols()));
    }
    return;
  }
  if (x.rows() != v.rows() || x.cols() != v.cols()) {
    throw std::invalid_argument("shape mismatch: " + std::to_string(x.rows()) + "x" +
                                std::to_string(x.cols()) + " vs " + std::to_string(v.rows()) + "x" +
                                std::to_string(v.cols()));
  }
}

double SemiMetric::distance(const Object& x, const Object& v) const {
  return distance_and_grad(x, v, nullptr);
}

Object SemiMetric::grad_v(const Object& x, const Object& v) const {
  Object grad;
  distance_and_grad(x, v, &grad);
  return grad;
}

double SemiMetric::distance_and_grad(const Object& x, const Object& v, Object* grad) const {
  return distance_and_grads(x, v, nullptr, grad);
}

double SemiMetric::distance_and_grads(const Object& x, const Object& v, Object* grad_x, Object* grad_v) const {
  check_compatible(x, v);
  switch (kind_) {
    case MetricKind::SqEuclidean:
      if (grad_v) *grad_v = 2.0 * (v - x);
      if (grad_x) *grad_x = 2.0 * (x - v);
      return (x - v).squaredNorm();
    case MetricKind::OneHotHamming:
      if (grad_v) *grad_v = v - x;
      if (grad_x) *grad_x = x - v;
      return 0.5 * (x - v).squaredNorm();
    case MetricKind::SoftDtw:
      return softecm::soft_dtw(x, v, gamma_, grad_v, grad_x);
  }
  throw std::logic_error("unhandled metric kind");
}

namespace {

struct SoftDtwWorkspace {
  std::vector<double> cost;    // n x m
  std::vector<double> r;       // (n+1) x (m+1)
  std::vector<double> w_diag;  // n x m, weight of cell on its diagonal predecessor
  std::vector<double> w_up;    // n x m, on (i-1, j)
  std::vector<double> w_left;  // n x m, on (i, j-1)
  std::vector<double> e;       // n x m expected alignment
};

SoftDtwWorkspace& workspace() {
  thread_local SoftDtwWorkspace ws;
  return ws;
}

}  // namespace

double soft_dtw(const Object& x, const Object& y, double gamma, Object* grad_y, Object* grad_x) {
  if (x.cols() != y.cols()) throw std::invalid_argument("soft-DTW channel mismatch");
  if (x.rows() == 0 || y.rows() == 0) throw std::invalid_argument("soft-DTW of an empty series");
  if (!(gamma > 0.0)) throw std::invalid_argument("soft-DTW gamma must be positive");

  const auto n = static_cast<std::size_t>(x.rows());
  const auto m = static_cast<std::size_t>(y.rows());
  const auto q = x.cols();
  constexpr double inf = std::numeric_limits<double>::infinity();
  const bool want_grad = grad_y != nullptr || grad_x != nullptr;

  auto& ws = workspace();
  ws.cost.resize(n * m);
  ws.r.assign((n + 1) * (m + 1), inf);
  if (want_grad) {
    ws.w_diag.resize(n * m);
    ws.w_up.resize(n * m);
    ws.w_left.resize(n * m);
  }

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      double c = 0.0;
      for (Eigen::Index k = 0; k < q; ++k) {
        const double diff = x(static_cast<Eigen::Index>(i), k) - y(static_cast<Eigen::Index>(j), k);
        c += diff * diff;
      }
      ws.cost[i * m + j] = c;
    }
  }

  const std::size_t stride = m + 1;
  double* r = ws.r.data();
  r[0] = 0.0;
  const double inv_gamma = 1.0 / gamma;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const double diag = r[(i - 1) * stride + (j - 1)];
      const double up = r[(i - 1) * stride + j];
      const double left = r[i * stride + (j - 1)];
      const double lo = std::min(diag, std::min(up, left));
      // Terms below 1e-18 of the minimum vanish in the sum anyway.
      auto weight = [&](double v) {
        const double z = (lo - v) * inv_gamma;
        return z == 0.0 ? 1.0 : (z < -42.0 ? 0.0 : std::exp(z));
      };
      const double e_diag = weight(diag);
      const double e_up = weight(up);
      const double e_left = weight(left);
      const double total = e_diag + e_up + e_left;
      const std::size_t cell = (i - 1) * m + (j - 1);
      r[i * stride + j] = ws.cost[cell] + lo - gamma * std::log(total);
      if (want_grad) {
        const double inv_total = 1.0 / total;
        ws.w_diag[cell] = e_diag * inv_total;
        ws.w_up[cell] = e_up * inv_total;
        ws.w_left[cell] = e_left * inv_total;
      }
    }
  }
  const double value = r[n * stride + m];
  if (!want_grad) return value;

  // E(i,j) = d R(n,m) / d cost(i,j), accumulated from successor cells.
  ws.e.assign(n * m, 0.0);
  double* e = ws.e.data();
  e[n * m - 1] = 1.0;
  for (std::size_t ii = n; ii-- > 0;) {
    for (std::size_t jj = m; jj-- > 0;) {
      const std::size_t cell = ii * m + jj;
      if (ii == n - 1 && jj == m - 1) continue;
      double acc = 0.0;
      if (ii + 1 < n) {
        acc += e[cell + m] * ws.w_up[cell + m];
        if (jj + 1 < m) acc += e[cell + m + 1] * ws.w_diag[cell + m + 1];
      }
      if (jj + 1 < m) acc += e[cell + 1] * ws.w_left[cell + 1];
      e[cell] = acc;
    }
  }

  // d cost(i,j) / d y_j = 2 (y_j - x_i); d cost(i,j) / d x_i = 2 (x_i - y_j).
  if (grad_y) {
    grad_y->setZero(y.rows(), y.cols());
    for (std::size_t j = 0; j < m; ++j) {
      double weight = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double w = e[i * m + j];
        if (w == 0.0) continue;
        weight += w;
        for (Eigen::Index k = 0; k < q; ++k) {
          (*grad_y)(static_cast<Eigen::Index>(j), k) -= 2.0 * w * x(static_cast<Eigen::Index>(i), k);
        }
      }
      for (Eigen::Index k = 0; k < q; ++k) {
        (*grad_y)(static_cast<Eigen::Index>(j), k) += 2.0 * weight * y(static_cast<Eigen::Index>(j), k);
      }
    }
  }
  if (grad_x) {
    grad_x->setZero(x.rows(), x.cols());
    for (std::size_t i = 0; i < n; ++i) {
      double weight = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        const double w = e[i * m + j];
        if (w == 0.0) continue;
        weight += w;
        for (Eigen::Index k = 0; k < q; ++k) {
          (*grad_x)(static_cast<Eigen::Index>(i), k) -= 2.0 * w * y(static_cast<Eigen::Index>(j), k);
        }
      }
      for (Eigen::Index k = 0; k < q; ++k) {
        (*grad_x)(static_cast<Eigen::Index>(i), k) += 2.0 * weight * x(static_cast<Eigen::Index>(i), k);
      }
    }
  }
  return value;
}

}  // namespace softecm
