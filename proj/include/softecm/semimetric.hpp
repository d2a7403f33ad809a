#pragma once
// Differentiable semi-metrics d(x, v) between a data object x and a prototype v.
//
// Every object is a dense matrix: rows are frames (time steps), columns are
// channels. Plain feature vectors and one-hot records are single-row matrices.

#include <string>
#include <string_view>

#include <Eigen/Core>

namespace softecm {

using Object = Eigen::MatrixXd;

enum class MetricKind { SqEuclidean, OneHotHamming, SoftDtw };

inline constexpr double kDistanceFloor = 1e-12;
inline constexpr double kDefaultSoftDtwGamma = 1.0;

/// max(d, 1e-12). Soft-DTW can go slightly negative; the mass update needs d > 0.
double clamp_distance(double d) noexcept;

class SemiMetric {
 public:
  SemiMetric() = default;

  static SemiMetric sq_euclidean() { return SemiMetric(MetricKind::SqEuclidean, 0.0); }
  static SemiMetric onehot_hamming() { return SemiMetric(MetricKind::OneHotHamming, 0.0); }
  static SemiMetric soft_dtw(double gamma = kDefaultSoftDtwGamma);

  /// "euclidean", "hamming", "softdtw" or "softdtw:<gamma>".
  static SemiMetric parse(std::string_view text);
  std::string to_string() const;

  MetricKind kind() const noexcept { return kind_; }
  double gamma() const noexcept { return gamma_; }
  /// Soft-DTW aligns series of different lengths; the others need equal shapes.
  bool allows_length_mismatch() const noexcept { return kind_ == MetricKind::SoftDtw; }

  /// Throws std::invalid_argument when x and v cannot be compared.
  void check_compatible(const Object& x, const Object& v) const;

  double distance(const Object& x, const Object& v) const;
  /// Gradient of d(x, v) with respect to v.
  Object grad_v(const Object& x, const Object& v) const;
  /// Value, and the v-gradient into *grad when grad is non-null.
  double distance_and_grad(const Object& x, const Object& v, Object* grad) const;
  /// Value plus gradients in both arguments (either pointer may be null).
  double distance_and_grads(const Object& x, const Object& v, Object* grad_x, Object* grad_v) const;

  friend bool operator==(const SemiMetric&, const SemiMetric&) = default;

 private:
  SemiMetric(MetricKind kind, double gamma) : kind_(kind), gamma_(gamma) {}

  MetricKind kind_ = MetricKind::SqEuclidean;
  double gamma_ = 0.0;
};

/// Soft-DTW with squared-Euclidean frame cost. Non-null grad_y / grad_x
/// receive the gradients with respect to y / x (same shapes as y / x).
double soft_dtw(const Object& x, const Object& y, double gamma, Object* grad_y = nullptr,
                Object* grad_x = nullptr);

}  // namespace softecm
